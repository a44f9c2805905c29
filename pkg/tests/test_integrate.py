"""Integrator accuracy against closed forms and scipy, both time directions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiptrack.fields import (
    arctan_transition,
    constant_forcing,
    discretize_transition,
    make_quadratic,
    rate_transition,
    translate_by_transition,
)
from tiptrack.integrate import (
    BlowUpError,
    IntegratorConfig,
    flow,
    integrate_span,
)

from .oracles import riccati_flow, scipy_flow, tanh_blow_up_time, tanh_flow

CFG = IntegratorConfig(rel_tol=1e-9, abs_tol=1e-11)


def test_flow_matches_tanh_closed_form(auto_field):
    for t, s, x0 in ((3.0, 0.0, 0.0), (10.0, -2.0, 0.4), (1.0, 0.0, -0.9),
                     (6.0, 1.5, 5.0)):
        want = tanh_flow(t, s, x0)
        assert flow(auto_field, t, s, x0, CFG) == pytest.approx(want, abs=1e-8)


def test_flow_backward_matches_closed_form(auto_field):
    # backward along the connecting orbit stays in (-1, 1)
    for t, s, x0 in ((-4.0, 0.0, 0.5), (-1.0, 2.0, 0.9), (0.0, 3.0, 0.0)):
        want = tanh_flow(t, s, x0)
        assert flow(auto_field, t, s, x0, CFG) == pytest.approx(want, abs=1e-8)


def test_flow_matches_scipy_on_bench(bench_continuous):
    f, gamma = bench_continuous
    g = translate_by_transition(f, gamma)
    for t, s, x0 in ((5.0, -5.0, 0.2), (-6.0, 4.0, 0.3)):
        want = scipy_flow(g, t, s, x0)
        assert flow(g, t, s, x0, CFG) == pytest.approx(want, abs=5e-7)


def test_cocycle_property(auto_field):
    t, r, s, x0 = 4.0, 1.0, -2.0, 0.3
    mid = flow(auto_field, r, s, x0, CFG)
    assert flow(auto_field, t, r, mid, CFG) == pytest.approx(
        flow(auto_field, t, s, x0, CFG), abs=1e-8)


def test_dense_output_consistency_forward(auto_field):
    traj = integrate_span(auto_field, (0.0, 8.0), 0.0, 0.2, CFG)
    # at its own samples
    for tt, xx in zip(traj.t, traj.x):
        assert traj(float(tt)) == pytest.approx(float(xx), abs=1e-12)
    # mid-segment against the closed form
    for tt in np.linspace(0.05, 7.95, 37):
        assert traj(float(tt)) == pytest.approx(tanh_flow(float(tt), 0.0, 0.2),
                                                abs=1e-8)


def test_dense_output_consistency_backward(auto_field):
    # regression: backward segments store dt < 0 and must negate the
    # interpolant coefficients; the bug was exact at sample points and
    # wrong strictly inside segments
    traj = integrate_span(auto_field, (-8.0, 0.0), 0.0, 0.5, CFG)
    for tt, xx in zip(traj.t, traj.x):
        assert traj(float(tt)) == pytest.approx(float(xx), abs=1e-12)
    for tt in np.linspace(-7.97, -0.03, 41):
        assert traj(float(tt)) == pytest.approx(tanh_flow(float(tt), 0.0, 0.5),
                                                abs=1e-8)


def test_two_sided_span(auto_field):
    traj = integrate_span(auto_field, (-3.0, 3.0), 0.0, 0.1, CFG)
    assert traj.t_min <= -3.0 + 1e-12 and traj.t_max >= 3.0 - 1e-12
    for tt in (-2.5, -0.4, 1.3, 2.9):
        assert traj(tt) == pytest.approx(tanh_flow(tt, 0.0, 0.1), abs=1e-8)


def test_forward_blow_up_detection():
    f = make_quadratic(constant_forcing(0.0))  # x' = -x**2
    x0, s = -2.0, 0.0
    t_true = s - 1.0 / x0  # 1 + x0*(t-s) = 0
    with pytest.raises(BlowUpError):
        flow(f, 2.0, s, x0)
    traj = integrate_span(f, (0.0, 2.0), s, x0)
    assert traj.blow_up is not None
    assert traj.blow_up.direction == "-inf"
    # the bracket localizes the escape-threshold crossing, which precedes
    # the true blow-up time by O(1/threshold)
    lo, hi = traj.blow_up.escape_time
    assert lo < hi <= t_true
    assert t_true - hi < 0.2


def test_backward_blow_up_detection(auto_field):
    # above the attractor, backward orbits escape to +inf
    x0 = 2.0
    t_true = -math.atanh(1.0 / x0)  # tanh(t)= -1/x0 makes the denominator 0
    traj = integrate_span(auto_field, (-3.0, 0.0), 0.0, x0)
    assert traj.blow_up_backward is not None
    assert traj.blow_up_backward.direction == "+inf"
    # backward in time the true blow-up lies before the threshold crossing
    lo, hi = traj.blow_up_backward.escape_time
    assert t_true <= lo < hi
    assert lo - t_true < 0.2


def test_knot_clipping_with_sampled_transition(auto_field):
    # exact reference through a piecewise-constant transition: glue tanh
    # arcs at the knots, where the translated state jumps with the profile
    gamma = discretize_transition(rate_transition(arctan_transition(1.0), 1.0), 0.5)
    g = translate_by_transition(auto_field, gamma)
    s, x0, t_end = -2.0, 0.4, 2.0
    got = flow(g, t_end, s, x0, CFG)

    # x is continuous across knots; on each cell x' = 1 - (x - g_j)^2
    t, x = s, x0
    for knot in np.arange(-1.5, t_end + 1e-9, 0.5):
        gj = gamma.value(t)
        x = tanh_flow(float(knot), t, x - gj) + gj
        t = float(knot)
    want = x
    # eight restarts accumulate a few units of local error each
    assert got == pytest.approx(want, abs=5e-8)


def test_tolerance_refinement(auto_field):
    want = tanh_flow(7.0, 0.0, -0.95)
    errs = []
    for rel in (1e-5, 1e-8, 1e-11):
        cfg = IntegratorConfig(rel_tol=rel, abs_tol=rel * 1e-2)
        errs.append(abs(flow(auto_field, 7.0, 0.0, -0.95, cfg) - want))
    assert errs[2] <= errs[1] <= errs[0]
    assert errs[2] < 1e-10


def test_riccati_closed_form():
    f = make_quadratic(constant_forcing(0.0))
    for t, s, x0 in ((4.0, 0.0, 1.0), (10.0, 2.0, 0.25)):
        assert flow(f, t, s, x0, CFG) == pytest.approx(riccati_flow(t, s, x0),
                                                       abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(x_lo=st.floats(-0.9, 0.85), gap=st.floats(0.01, 0.1))
def test_flow_preserves_order(x_lo, gap):
    f = make_quadratic(constant_forcing(1.0))
    hi = flow(f, 2.0, 0.0, x_lo + gap, CFG)
    lo = flow(f, 2.0, 0.0, x_lo, CFG)
    assert hi > lo
