"""Command line front end.

Subcommands: ``models`` lists the registry, ``classify`` resolves one
transition equation into tracking, tipping, or the indeterminate band,
``lambda-star`` bisects the saddle-node threshold, ``scan`` sweeps a
parameter grid into a CSV, and ``certify`` runs the certificate ladder.

All work is described by a JSON run configuration (``--config``); unknown
keys anywhere in it are rejected.  Exit codes: 0 on success, 2 for
configuration problems, 3 for numerical failures (no convergence, no
bracket, or a soundness violation).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from .bifurcation import (
    BracketError,
    classify,
    lambda_star,
    scan_phase,
    scan_rate_step,
    scan_size,
    write_scan_csv,
)
from .criteria import (
    SoundnessError,
    certificate_to_dict,
    certify_continuous,
    certify_piecewise,
    certify_polygonal,
)
from .fields import (
    MODEL_REGISTRY,
    build_model,
    discretize_transition,
    polygonal_transition,
)
from .integrate import IntegrationError, IntegratorConfig
from .pullback import (
    NoPairError,
    PairConvergenceError,
    attractor_repeller,
    default_repeller_seed,
    special_solutions,
)

__all__ = ["main", "ConfigError", "RunConfig"]


class ConfigError(ValueError):
    """Malformed or contradictory run configuration."""


_SECTION_KEYS = {
    "model": {"id", "params"},
    "integrator": {"rel_tol", "abs_tol", "max_step"},
    "classify": {"lead", "pair_tail"},
    "lambda_star": {"tol", "bracket", "lead", "pair_tail"},
    "scan": {"kind", "c_grid", "h_grid", "s_grid", "d_grid", "tol", "lead",
             "pair_tail"},
    "certify": {"kind", "h", "lambda_star_hi", "lead", "pair_tail"},
}


class RunConfig:
    """Validated view of the JSON run configuration.

    Only known sections and known keys inside them are accepted, so typos
    fail loudly instead of silently falling back to defaults.
    """

    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise ConfigError("run configuration must be a JSON object")
        unknown = set(raw) - set(_SECTION_KEYS)
        if unknown:
            raise ConfigError("unknown configuration section(s): %s"
                              % ", ".join(sorted(unknown)))
        for section, keys in _SECTION_KEYS.items():
            value = raw.get(section, {})
            if not isinstance(value, dict):
                raise ConfigError("section %r must be an object" % section)
            bad = set(value) - keys
            if bad:
                raise ConfigError("unknown key(s) in section %r: %s"
                                  % (section, ", ".join(sorted(bad))))
        if "model" not in raw or "id" not in raw["model"]:
            raise ConfigError("configuration needs a model section with an id")
        self.raw = raw

    def model_id(self) -> str:
        return self.raw["model"]["id"]

    def model_params(self) -> dict:
        return dict(self.raw["model"].get("params", {}))

    def section(self, name: str) -> dict:
        return dict(self.raw.get(name, {}))


def _load_config(path: Optional[str]) -> RunConfig:
    if not path:
        raise ConfigError("this subcommand needs --config")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError("configuration file not found: %s" % path)
    except json.JSONDecodeError as exc:
        raise ConfigError("configuration is not valid JSON: %s" % exc)
    return RunConfig(raw)


def _integrator(config: RunConfig, tol_override: Optional[float]) -> IntegratorConfig:
    sec = config.section("integrator")
    rel = float(sec.get("rel_tol", 1e-9))
    abs_ = float(sec.get("abs_tol", rel * 1e-2))
    if tol_override is not None:
        rel = float(tol_override)
        abs_ = rel * 1e-2
    kwargs = {"rel_tol": rel, "abs_tol": abs_}
    if "max_step" in sec:
        kwargs["max_step"] = float(sec["max_step"])
    return IntegratorConfig(**kwargs)


def _build(config: RunConfig):
    try:
        return build_model(config.model_id(), config.model_params())
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _merged_params(config: RunConfig) -> dict:
    entry = MODEL_REGISTRY.get(config.model_id())
    if entry is None:
        raise ConfigError("unknown model id %r" % config.model_id())
    merged = dict(entry["params"])
    merged.update(config.model_params())
    return merged


def _emit_json(out_dir: Optional[str], name: str, payload: dict):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit_plot_csv(out_dir: Optional[str], name: str, pair, specials, gamma):
    t_hi = specials.t_inf
    ts = np.linspace(-t_hi, t_hi, 801)
    lines = ["t,attractor,repeller,upper,lower,transition"]
    up, low = specials.upper, specials.lower
    for t in ts:
        t = float(t)
        cells = [_fmt(t), _fmt(float(pair.attractor(t))),
                 _fmt(float(pair.repeller(t)))]
        cells.append(_fmt(float(up(t))) if up.t_min <= t <= up.t_max else "")
        cells.append(_fmt(float(low(t))) if low.t_min <= t <= low.t_max else "")
        cells.append(_fmt(gamma.value(t)))
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w", encoding="utf-8",
                  newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pair_for(f, gamma, cfg, lead, pair_tail):
    t_inf = gamma.saturation_time + lead
    seeds = {}
    seed_r = default_repeller_seed(f)
    if seed_r is not None:
        seeds["seed_repeller"] = seed_r
    return attractor_repeller(f, (-t_inf - 2.0, t_inf + 2.0), cfg=cfg,
                              tail_tol=pair_tail, **seeds), t_inf


def _cmd_models(args) -> int:
    if args.out:
        payload = {mid: {"description": entry["description"],
                         "defaults": entry["params"]}
                   for mid, entry in MODEL_REGISTRY.items()}
        _emit_json(args.out, "models.json", payload)
        return 0
    width = max(len(mid) for mid in MODEL_REGISTRY)
    for mid in sorted(MODEL_REGISTRY):
        entry = MODEL_REGISTRY[mid]
        print("%-*s  %s" % (width, mid, entry["description"]))
        print("%-*s  defaults: %s" % (width, "",
                                      json.dumps(entry["params"], sort_keys=True)))
    return 0


def _cmd_classify(args) -> int:
    config = _load_config(args.config)
    cfg = _integrator(config, args.tol)
    sec = config.section("classify")
    lead = float(sec.get("lead", 25.0))
    pair_tail = float(sec.get("pair_tail", 1e-6))
    f, gamma = _build(config)
    verdict = classify(f, gamma, cfg=cfg, lead=lead, pair_tail=pair_tail)
    payload = {
        "model": {"id": config.model_id(), "params": _merged_params(config)},
        "case": verdict.case,
        "gap": verdict.gap,
        "margin": verdict.margin,
        "error_budget": verdict.error_budget,
        "comparison_time": verdict.comparison_time,
        "details": verdict.details,
    }
    if args.cross_check:
        finer = IntegratorConfig(rel_tol=cfg.rel_tol * 0.5,
                                 abs_tol=cfg.abs_tol * 0.5,
                                 max_step=cfg.max_step)
        again = classify(f, gamma, cfg=finer, lead=lead, pair_tail=pair_tail)
        payload["cross_check"] = {"case": again.case, "gap": again.gap}
        if again.case != verdict.case:
            _emit_json(args.out, "classify.json", payload)
            raise PairConvergenceError(
                "classification flips under tolerance refinement: %s vs %s"
                % (verdict.case, again.case))
    _emit_json(args.out, "classify.json", payload)
    if args.emit_plot_data:
        pair, _ = _pair_for(f, gamma, cfg, lead, pair_tail)
        specials = special_solutions(f, gamma, pair, cfg=cfg)
        _emit_plot_csv(args.out, "plot_classify.csv", pair, specials, gamma)
    return 0


def _cmd_lambda_star(args) -> int:
    config = _load_config(args.config)
    cfg = _integrator(config, None)
    sec = config.section("lambda_star")
    tol = float(args.tol if args.tol is not None else sec.get("tol", 1e-3))
    bracket = sec.get("bracket")
    if bracket is not None:
        bracket = (float(bracket[0]), float(bracket[1]))
    lead = float(sec.get("lead", 25.0))
    pair_tail = float(sec.get("pair_tail", 1e-6))
    f, gamma = _build(config)
    result = lambda_star(f, gamma, tol=tol, bracket=bracket, cfg=cfg,
                         lead=lead, pair_tail=pair_tail)
    payload = {
        "model": {"id": config.model_id(), "params": _merged_params(config)},
        "lambda_star": result.value,
        "bracket": list(result.bracket),
        "tol": result.tol,
        "converged": result.converged,
        "n_classifications": result.n_classifications,
    }
    if args.cross_check:
        finer = lambda_star(f, gamma, tol=tol * 0.5, bracket=bracket, cfg=cfg,
                            lead=lead, pair_tail=pair_tail)
        lo, hi = result.bracket
        consistent = (finer.bracket[0] >= lo - tol
                      and finer.bracket[1] <= hi + tol)
        payload["cross_check"] = {
            "lambda_star": finer.value,
            "bracket": list(finer.bracket),
            "consistent": consistent,
        }
        _emit_json(args.out, "lambda_star.json", payload)
        if not consistent:
            raise BracketError("halved-tolerance bracket escaped the original")
        return 0
    _emit_json(args.out, "lambda_star.json", payload)
    return 0


def _cmd_scan(args) -> int:
    config = _load_config(args.config)
    cfg_sec = config.section("integrator")
    cfg = _integrator(config, None) if cfg_sec else None
    sec = config.section("scan")
    kind = sec.get("kind")
    if kind not in ("rate_step", "phase", "size"):
        raise ConfigError("scan.kind must be rate_step, phase, or size")
    tol = float(args.tol if args.tol is not None else sec.get("tol", 2e-3))
    lead = float(sec.get("lead", 25.0))
    pair_tail = float(sec.get("pair_tail", 1e-6))
    workers = max(1, args.workers)
    f, gamma = _build(config)
    if kind == "rate_step":
        if "c_grid" not in sec or "h_grid" not in sec:
            raise ConfigError("rate_step scans need c_grid and h_grid")
        rows, summary = scan_rate_step(f, gamma, sec["c_grid"], sec["h_grid"],
                                       tol=tol, cfg=cfg, workers=workers,
                                       lead=lead, pair_tail=pair_tail)
    elif kind == "phase":
        if "s_grid" not in sec:
            raise ConfigError("phase scans need s_grid")
        if f.forcing is None:
            raise ConfigError("phase scans need a model with explicit forcing")
        rows, summary = scan_phase(f.forcing, gamma, sec["s_grid"], tol=tol,
                                   cfg=cfg, workers=workers, lead=lead,
                                   pair_tail=pair_tail)
    else:
        if "d_grid" not in sec:
            raise ConfigError("size scans need d_grid")
        if config.model_id() != "polygonal":
            raise ConfigError("size scans are defined for the polygonal model")
        params = _merged_params(config)
        c_val = float(params["c"])

        def family(d):
            return f, polygonal_transition(c_val, d)

        rows, summary = scan_size(family, sec["d_grid"], tol=tol, cfg=cfg,
                                  workers=workers, lead=lead,
                                  pair_tail=pair_tail, c_label=c_val)
    summary["model"] = {"id": config.model_id(), "params": _merged_params(config)}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_scan_csv(os.path.join(args.out, "scan_%s.csv" % kind), rows, kind)
        _emit_json(args.out, "scan_%s_summary.json" % kind, summary)
    else:
        sys.stdout.write(write_scan_csv(None, rows, kind))
        _emit_json(None, "", summary)
    n_failed = summary.get("n_failed", 0)
    if n_failed:
        raise PairConvergenceError("%d of %d scan points failed"
                                   % (n_failed, summary.get("n_points", 0)))
    return 0


def _certify_kind(config: RunConfig, gamma, h: Optional[float]) -> str:
    explicit = config.section("certify").get("kind")
    if explicit is not None:
        if explicit not in ("piecewise", "continuous", "polygonal"):
            raise ConfigError("certify.kind must be piecewise, continuous, "
                              "or polygonal")
        return explicit
    if config.model_id() == "polygonal":
        return "polygonal"
    if gamma.step is not None or (h is not None and h > 0.0):
        return "piecewise"
    if gamma.derivative is not None and gamma.saturation_time > 0.0:
        return "continuous"
    return "piecewise"


def _cmd_certify(args) -> int:
    config = _load_config(args.config)
    cfg = _integrator(config, args.tol)
    sec = config.section("certify")
    lead = float(sec.get("lead", 25.0))
    pair_tail = float(sec.get("pair_tail", 1e-6))
    h = sec.get("h")
    h = float(h) if h is not None else None
    f, gamma = _build(config)
    kind = _certify_kind(config, gamma, h)
    if kind in ("continuous", "polygonal") and f.structure != "quadratic":
        raise ConfigError("%s certificates need a quadratic model" % kind)
    gamma_used = gamma
    if kind == "piecewise" and gamma.step is None:
        gamma_used = discretize_transition(gamma, h if h is not None else 1.0)
    pair, _ = _pair_for(f, gamma_used, cfg, lead, pair_tail)
    specials = None
    if kind == "piecewise":
        specials = special_solutions(f, gamma_used, pair, cfg=cfg)
        bundle = certify_piecewise(pair, gamma_used, specials=specials, cfg=cfg)
    elif kind == "continuous":
        specials = special_solutions(f, gamma_used, pair, cfg=cfg)
        hi = sec.get("lambda_star_hi")
        bundle = certify_continuous(pair, gamma_used,
                                    lambda_star_hi=None if hi is None else float(hi),
                                    specials=specials, cfg=cfg)
    else:
        params = _merged_params(config)
        bundle = certify_polygonal(pair, float(params["c"]), float(params["d"]),
                                   cfg=cfg)
    payload = {
        "model": {"id": config.model_id(), "params": _merged_params(config)},
        "kind": kind,
        "verdict": bundle["verdict"],
        "fired": None if bundle["fired"] is None
        else certificate_to_dict(bundle["fired"]),
        "certificates": [certificate_to_dict(c) for c in bundle["certificates"]],
    }
    if args.cross_check and bundle["fired"] is not None:
        verdict = classify(f, gamma_used, pair=pair, cfg=cfg, lead=lead,
                           pair_tail=pair_tail)
        payload["cross_check"] = {"case": verdict.case, "gap": verdict.gap}
        fired = bundle["fired"].verdict
        clash = (fired == "tracking" and verdict.case == "C_tipping") or \
            (fired.startswith("tipping") and verdict.case == "A_tracking")
        if clash:
            _emit_json(args.out, "certify.json", payload)
            raise SoundnessError("certificate %s disagrees with the "
                                 "classification %s" % (fired, verdict.case))
    _emit_json(args.out, "certify.json", payload)
    if args.emit_plot_data and specials is not None:
        _emit_plot_csv(args.out, "plot_certify.csv", pair, specials, gamma_used)
    return 0


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to the JSON run configuration")
    common.add_argument("--out", help="directory for result files "
                                      "(default: print to stdout)")
    common.add_argument("--workers", type=int, default=1,
                        help="worker processes for scans")
    common.add_argument("--tol", type=float, default=None,
                        help="override the dominant tolerance of the task")
    common.add_argument("--emit-plot-data", action="store_true",
                        help="also write sampled curves as CSV")
    common.add_argument("--cross-check", action="store_true",
                        help="repeat the computation at a finer tolerance "
                             "and require agreement")
    p = argparse.ArgumentParser(
        prog="tiptrack",
        description="rate-induced transition analysis for scalar concave "
                    "equations: classification, thresholds, parameter scans, "
                    "and machine-checked certificates")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("models", parents=[common],
                   help="list the built-in model families")
    sub.add_parser("classify", parents=[common],
                   help="tracking / tipping / indeterminate for one model")
    sub.add_parser("lambda-star", parents=[common],
                   help="bisect the saddle-node threshold")
    sub.add_parser("scan", parents=[common],
                   help="sweep a parameter grid into a CSV")
    sub.add_parser("certify", parents=[common],
                   help="run the certificate ladder")
    return p


_COMMANDS = {
    "models": _cmd_models,
    "classify": _cmd_classify,
    "lambda-star": _cmd_lambda_star,
    "scan": _cmd_scan,
    "certify": _cmd_certify,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    except (NoPairError, PairConvergenceError, BracketError, IntegrationError,
            SoundnessError, ValueError, OverflowError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
