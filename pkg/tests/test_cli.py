"""Command-line interface: exit codes, config validation, artifacts."""

import json
import os

import pytest

from tiptrack.cli import main


def _write_config(tmp_path, payload, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


POLY_CFG = {
    "model": {"id": "polygonal",
              "params": {"c": 1.0, "d": 0.25, "forcing": "const1"}},
    "integrator": {"rel_tol": 1e-7, "abs_tol": 1e-9},
}


def test_models_listing(capsys):
    assert main(["models"]) == 0
    out = capsys.readouterr().out
    for mid in ("quadratic:bench53", "quadratic:fig61", "polygonal",
                "climate", "hopfield"):
        assert mid in out


def test_models_json(tmp_path):
    assert main(["models", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "models.json").read_text())
    assert "quadratic:bench53" in data
    entry = data["quadratic:bench53"]
    assert "defaults" in entry and "description" in entry
    assert entry["defaults"]["c"] == 1.0


def test_config_rejects_unknown_section(tmp_path, capsys):
    cfg = dict(POLY_CFG)
    cfg["snacks"] = {}
    rc = main(["classify", "--config", _write_config(tmp_path, cfg)])
    assert rc == 2
    assert "snacks" in capsys.readouterr().err


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = {"model": {"id": "polygonal", "zap": 1}}
    rc = main(["classify", "--config", _write_config(tmp_path, cfg)])
    assert rc == 2


def test_config_rejects_unknown_model_param(tmp_path):
    cfg = {"model": {"id": "polygonal", "params": {"bogus": 2.0}}}
    rc = main(["classify", "--config", _write_config(tmp_path, cfg)])
    assert rc == 2


def test_config_requires_model_id(tmp_path):
    rc = main(["classify", "--config", _write_config(tmp_path, {"model": {}})])
    assert rc == 2


def test_classify_deterministic_json(tmp_path):
    cfg_path = _write_config(tmp_path, POLY_CFG)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["classify", "--config", cfg_path, "--out", str(out1)]) == 0
    assert main(["classify", "--config", cfg_path, "--out", str(out2)]) == 0
    b1 = (out1 / "classify.json").read_bytes()
    b2 = (out2 / "classify.json").read_bytes()
    assert b1 == b2
    payload = json.loads(b1)
    assert payload["case"] == "A_tracking"
    assert payload["gap"] > 0.0


def test_classify_plot_data(tmp_path):
    cfg_path = _write_config(tmp_path, POLY_CFG)
    assert main(["classify", "--config", cfg_path, "--out", str(tmp_path),
                 "--emit-plot-data"]) == 0
    lines = (tmp_path / "plot_classify.csv").read_text().splitlines()
    assert lines[0] == "t,attractor,repeller,upper,lower,transition"
    assert len(lines) == 802


def test_certify_polygonal(tmp_path):
    cfg_path = _write_config(tmp_path, POLY_CFG)
    assert main(["certify", "--config", cfg_path, "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "certify.json").read_text())
    assert payload["kind"] == "polygonal"
    assert payload["verdict"] == "tracking"
    fired = payload["fired"]
    assert fired["criterion"].startswith("Thm6.12")
    assert fired["margin"] > fired["error_budget"]


def test_certify_piecewise_bench(tmp_path):
    cfg = {
        "model": {"id": "quadratic:bench53", "params": {"c": 2.0, "h": 1.0}},
        "integrator": {"rel_tol": 1e-7, "abs_tol": 1e-9},
        "certify": {"pair_tail": 1e-4},
    }
    cfg_path = _write_config(tmp_path, cfg)
    assert main(["certify", "--config", cfg_path, "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "certify.json").read_text())
    assert payload["kind"] == "piecewise"
    assert payload["verdict"] in ("tracking", "tipping_no_bounded", "none")


def test_lambda_star_bad_bracket_exit_code(tmp_path):
    cfg = {
        "model": {"id": "polygonal",
                  "params": {"c": 1.0, "d": 0.25, "forcing": "const1"}},
        "integrator": {"rel_tol": 1e-7, "abs_tol": 1e-9},
        "lambda_star": {"bracket": [5.0, 10.0], "pair_tail": 1e-4},
    }
    rc = main(["lambda-star", "--config", _write_config(tmp_path, cfg)])
    assert rc == 3


def test_scan_size_artifacts(tmp_path):
    cfg = {
        "model": {"id": "polygonal",
                  "params": {"c": 1.0, "d": 0.25, "forcing": "const1"}},
        "integrator": {"rel_tol": 1e-7, "abs_tol": 1e-9},
        "scan": {"kind": "size", "d_grid": [0.25, 2.5], "tol": 5e-3,
                 "pair_tail": 1e-4},
    }
    cfg_path = _write_config(tmp_path, cfg)
    assert main(["scan", "--config", cfg_path, "--out", str(tmp_path)]) == 0
    csv_text = (tmp_path / "scan_size.csv").read_text()
    assert csv_text.splitlines()[0].startswith("c,d,")
    summary = json.loads((tmp_path / "scan_size_summary.json").read_text())
    assert summary["n_points"] == 2
    assert summary["n_failed"] == 0
    # byte-stable across reruns
    out2 = tmp_path / "again"
    assert main(["scan", "--config", cfg_path, "--out", str(out2)]) == 0
    assert (out2 / "scan_size.csv").read_text() == csv_text


def test_scan_requires_grids(tmp_path):
    cfg = {
        "model": {"id": "quadratic:bench53"},
        "scan": {"kind": "rate_step"},
    }
    rc = main(["scan", "--config", _write_config(tmp_path, cfg)])
    assert rc == 2
