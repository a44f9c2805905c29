"""Field and transition constructors: values, metadata, validation."""

import math

import numpy as np
import pytest

from tiptrack.fields import (
    MODEL_REGISTRY,
    arctan_transition,
    bench_forcing,
    build_model,
    climate_constants,
    climate_field,
    constant_forcing,
    discretize_transition,
    hopfield_field,
    make_quadratic,
    polygonal_transition,
    rate_transition,
    shift_parameter,
    step_transition,
    time_shift_forcing,
    translate_by_transition,
)

# Reference equilibrium distances and temperatures; the inputs
# mu = (0.99993, 1.00007) circulating alongside them are inconsistent with
# these outputs under the model's own formulas, while mu = (0.9993, 1.0007)
# (the actual range of the seasonal factor) reproduces them to ten digits.
# Both readings are pinned: the corrected one against the reference
# outputs, the literal one as a frozen regression.
CLIMATE_PUBLISHED = {"d1": 0.9999995097, "d2": 0.9982486778,
                     "T1": 298.6397736, "T2": 172.4197537}
CLIMATE_LITERAL_FROZEN = {"d1": 0.999999995099657, "d2": 0.998302054461835,
                          "T1": 298.54575307556644, "T2": 172.36547090359784}


def test_climate_constants_corrected_inputs_match_published():
    out = climate_constants(0.9993, 1.0007, 1.690e-5, 1.835e-5)
    for key, want in CLIMATE_PUBLISHED.items():
        assert abs(out[key] - want) / abs(want) < 1e-6


def test_climate_constants_literal_inputs_frozen():
    out = climate_constants(0.99993, 1.00007, 1.690e-5, 1.835e-5)
    for key, want in CLIMATE_LITERAL_FROZEN.items():
        assert abs(out[key] - want) / abs(want) < 1e-12


def test_quadratic_field_shape(auto_field):
    # rhs(t, x) = -(x - 0)^2 + 1 for the constant unit forcing
    assert auto_field.structure == "quadratic"
    assert auto_field.rhs(0.0, 0.5) == pytest.approx(0.75)
    assert auto_field.rhs(3.0, -2.0) == pytest.approx(-3.0)
    assert auto_field.rhs_dx(0.0, 0.5) == pytest.approx(-1.0)


def test_quadratic_concavity_everywhere(auto_field):
    xs = np.linspace(-5.0, 5.0, 41)
    slopes = [auto_field.rhs_dx(0.0, float(x)) for x in xs]
    assert all(s2 < s1 for s1, s2 in zip(slopes, slopes[1:]))


def test_bench_forcing_bounds():
    p = bench_forcing()
    ts = np.linspace(-200.0, 200.0, 4001)
    vals = np.array([p.value(float(t)) for t in ts])
    assert np.max(np.abs(vals)) <= p.sup_abs + 1e-12


def test_time_shift_forcing():
    p = bench_forcing()
    q = time_shift_forcing(p, 1.7)
    for t in (-3.0, 0.0, 2.5):
        assert q.value(t) == pytest.approx(p.value(1.7 + t), abs=1e-14)


def test_shift_parameter(auto_field):
    g = shift_parameter(auto_field, 0.35)
    assert g.rhs(1.0, 0.2) == pytest.approx(auto_field.rhs(1.0, 0.2) + 0.35)
    assert g.structure == "quadratic"


def test_translate_by_transition(auto_field):
    gamma = arctan_transition(1.0)
    g = translate_by_transition(auto_field, gamma)
    for t, y in ((-2.0, 0.3), (0.5, -1.1), (4.0, 0.0)):
        want = auto_field.rhs(t, y - gamma.value(t))
        assert g.rhs(t, y) == pytest.approx(want, abs=1e-14)


def test_arctan_transition_profile():
    g = arctan_transition(2.0, size=1.0, tail=0.01)
    assert g.value(0.0) == pytest.approx(0.0)
    assert g.value(0.5) == pytest.approx(0.5)  # (2/pi)*arctan(1)
    assert g.gamma_minus == -1.0 and g.gamma_plus == 1.0
    assert g.monotone == "nondecreasing"
    assert abs(g.value(g.saturation_time) - 1.0) <= g.tail_tol + 1e-12
    neg = arctan_transition(1.0, size=-1.0)
    assert neg.monotone == "nonincreasing"
    assert neg.gamma_minus == 1.0 and neg.gamma_plus == -1.0


def test_rate_transition_composes_time():
    g = arctan_transition(1.0)
    gc = rate_transition(g, 4.0)
    for t in (-1.0, 0.25, 3.0):
        assert gc.value(t) == pytest.approx(g.value(4.0 * t), abs=1e-14)
    assert gc.saturation_time == pytest.approx(g.saturation_time / 4.0)


def test_polygonal_transition_ramp():
    c, d = 2.0, 0.5
    g = polygonal_transition(c, d)
    assert g.value(-10.0) == -d and g.value(10.0) == d
    assert g.value(0.0) == 0.0
    assert g.value(0.25) == pytest.approx(c * d * 0.25)
    assert g.knots == (-1.0 / c, 1.0 / c)
    assert g.derivative(0.1) == pytest.approx(c * d)
    assert g.derivative(5.0) == 0.0
    assert g.monotone == "nondecreasing"


def test_step_transition_jump():
    g = step_transition(0.7)
    assert g.value(-1e-9) == -0.7
    assert g.value(1e-9) == 0.7
    assert g.knots == (0.0,)
    assert g.saturation_time == 0.0


def test_discretize_transition_exact_at_knots():
    g = rate_transition(arctan_transition(1.0), 2.0)
    h = 0.5
    gh = discretize_transition(g, h)
    assert gh.step == h
    for j in (-5, -1, 0, 1, 7):
        t = j * h
        assert gh.value(t) == pytest.approx(g.value(t), abs=1e-14)
        # piecewise constant on [jh, (j+1)h)
        assert gh.value(t + 0.49 * h) == gh.value(t)


def test_discretize_step_edge_cases():
    g = arctan_transition(1.0)
    assert discretize_transition(g, 0.0) is g
    with pytest.raises(ValueError):
        discretize_transition(g, -1.0)


def test_climate_field_metadata():
    f = climate_field()
    T2 = f.concavity_domain[0]
    assert 150.0 < T2 < 200.0
    assert f.coercive_side == "upper"
    # concave on (T2, inf): slope decreasing there
    xs = np.linspace(T2 + 1.0, T2 + 150.0, 30)
    slopes = [f.rhs_dx(0.0, float(x)) for x in xs]
    assert all(s2 <= s1 + 1e-12 for s1, s2 in zip(slopes, slopes[1:]))


def test_hopfield_field_metadata():
    f = hopfield_field(0.4)
    assert f.concavity_domain[0] == 0.0
    xs = np.linspace(0.1, 3.0, 30)
    slopes = [f.rhs_dx(0.0, float(x)) for x in xs]
    assert all(s2 <= s1 + 1e-12 for s1, s2 in zip(slopes, slopes[1:]))


def test_registry_ids_and_validation():
    assert set(MODEL_REGISTRY) == {"quadratic:bench53", "quadratic:fig61",
                                   "polygonal", "climate", "hopfield"}
    with pytest.raises(KeyError):
        build_model("nope")
    with pytest.raises(ValueError):
        build_model("quadratic:bench53", {"zaps": 1.0})
    f, gamma = build_model("quadratic:bench53", {"c": 2.0, "h": 0.5})
    assert f.structure == "quadratic"
    assert gamma.step == 0.5
    f2, gamma2 = build_model("polygonal", {"c": 1.0, "d": 0.25,
                                           "forcing": "const1"})
    assert gamma2.knots == (-1.0, 1.0)
