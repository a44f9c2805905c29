"""Classification, saddle-node threshold, and scan plumbing."""

import math

import numpy as np
import pytest

from tiptrack.bifurcation import (
    CASE_A,
    CASE_B,
    CASE_C,
    BracketError,
    _CachedPairFactory,
    classify,
    lambda_star,
    scan_rate_step,
    write_scan_csv,
)
from tiptrack.fields import (
    arctan_transition,
    constant_forcing,
    constant_transition,
    make_quadratic,
    shift_parameter,
    step_transition,
)
from tiptrack.integrate import IntegratorConfig

CFG = IntegratorConfig(rel_tol=1e-7, abs_tol=1e-9)


def test_lambda_star_of_pure_quadratic():
    # -x^2 sits exactly at the saddle-node: threshold 0
    f = make_quadratic(constant_forcing(0.0))
    ls = lambda_star(f, constant_transition(0.0), tol=1e-3, cfg=CFG,
                     pair_tail=1e-4)
    assert ls.converged
    assert abs(ls.value) <= 2e-3
    assert ls.bracket[0] <= 0.0 <= ls.bracket[1]


def test_lambda_star_autonomous_unit():
    # 1 - x^2 + lambda has a pair iff lambda > -1
    f = make_quadratic(constant_forcing(1.0))
    ls = lambda_star(f, constant_transition(0.0), tol=1e-3, cfg=CFG,
                     pair_tail=1e-4)
    assert ls.value == pytest.approx(-1.0, abs=2e-3)


def test_shift_identity_single():
    f = make_quadratic(constant_forcing(1.0))
    gamma = constant_transition(0.0)
    base = lambda_star(f, gamma, tol=1e-3, cfg=CFG, pair_tail=1e-4)
    shifted = lambda_star(shift_parameter(f, 0.35), gamma, tol=1e-3, cfg=CFG,
                          pair_tail=1e-4)
    assert shifted.value == pytest.approx(base.value - 0.35, abs=2e-3)


def test_classify_cases():
    f = make_quadratic(constant_forcing(1.0))
    flat = classify(f, constant_transition(0.0), cfg=CFG, pair_tail=1e-4)
    assert flat.case == CASE_A
    assert flat.gap == pytest.approx(2.0, abs=1e-4)
    assert flat.margin > 0.0
    assert flat.margin == pytest.approx(flat.gap - flat.error_budget)

    big = classify(f, step_transition(5.0), cfg=CFG, pair_tail=1e-4)
    assert big.case == CASE_C
    # exact collapsed gap: (a - 2d) - r = -8 for the unit pair
    assert big.gap == pytest.approx(-8.0, abs=1e-4)

    edge = classify(f, step_transition(1.0), cfg=CFG, pair_tail=1e-4)
    assert edge.case == CASE_B
    assert abs(edge.gap) <= edge.error_budget


def test_bracket_error_when_no_straddle():
    f = make_quadratic(constant_forcing(1.0))
    with pytest.raises(BracketError):
        lambda_star(f, constant_transition(0.0), tol=1e-3,
                    bracket=(5.0, 10.0), cfg=CFG, pair_tail=1e-4)


def test_scan_rate_step_rows_and_csv_stability():
    f = make_quadratic(constant_forcing(1.0))
    gamma = arctan_transition(1.0)
    rows, summary = scan_rate_step(f, gamma, [0.5, 2.0], [1.0, 0.0],
                                   tol=5e-3, cfg=CFG, pair_tail=1e-4)
    assert summary["n_points"] == 4
    assert summary["n_failed"] == 0
    for row in rows:
        assert set(row) == {"c", "key", "lambda_star", "bracket_lo",
                            "bracket_hi", "verdict"}
        assert row["bracket_lo"] <= row["lambda_star"] <= row["bracket_hi"]
    text1 = write_scan_csv(None, rows, "rate_step")
    text2 = write_scan_csv(None, rows, "rate_step")
    assert text1 == text2
    assert text1.splitlines()[0].startswith("c,h,")

    rows_b, _ = scan_rate_step(f, gamma, [0.5, 2.0], [1.0, 0.0],
                               tol=5e-3, cfg=CFG, pair_tail=1e-4)
    assert write_scan_csv(None, rows_b, "rate_step") == text1


def test_scan_validates_grids():
    f = make_quadratic(constant_forcing(1.0))
    gamma = arctan_transition(1.0)
    with pytest.raises(ValueError):
        scan_rate_step(f, gamma, [0.0, 1.0], [1.0], cfg=CFG)
    with pytest.raises(ValueError):
        scan_rate_step(f, gamma, [1.0], [-0.5], cfg=CFG)


def test_pair_factory_cache_is_bounded():
    # dense pairs weigh megabytes each; a shared factory must not grow
    # with the number of distinct shifts it has ever seen
    f = make_quadratic(constant_forcing(1.0))
    fac = _CachedPairFactory(f, (-6.0, 6.0), CFG, 1e-4, max_entries=4)
    for i in range(12):
        fac(-0.5 + 0.05 * i)
    assert len(fac._cache) == 4

    # most recently used entries survive and still hit the cache
    _, pair_last, _ = fac(0.05)
    assert pair_last is not None
    assert fac(0.05)[1] is pair_last

    # an evicted shift is rebuilt, equal in value to a fresh factory's
    _, pair_old, _ = fac(-0.5)
    _, pair_ref, _ = _CachedPairFactory(f, (-6.0, 6.0), CFG, 1e-4)(-0.5)
    assert pair_old.attractor(0.0) == pytest.approx(pair_ref.attractor(0.0))

    with pytest.raises(ValueError):
        _CachedPairFactory(f, (-6.0, 6.0), CFG, 1e-4, max_entries=0)
