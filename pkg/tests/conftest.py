"""Shared fixtures: fields, transitions, and session-cached pairs."""

import pytest

from tiptrack.fields import build_model, constant_forcing, make_quadratic
from tiptrack.integrate import IntegratorConfig
from tiptrack.pullback import attractor_repeller, default_repeller_seed

TIGHT = IntegratorConfig(rel_tol=1e-9, abs_tol=1e-11)
LOOSE = IntegratorConfig(rel_tol=1e-7, abs_tol=1e-9)


@pytest.fixture(scope="session")
def tight_cfg():
    return TIGHT


@pytest.fixture(scope="session")
def loose_cfg():
    return LOOSE


@pytest.fixture(scope="session")
def auto_field():
    """x' = 1 - x**2; attractor 1, repeller -1, separation 2."""
    return make_quadratic(constant_forcing(1.0), name="auto-unit")


@pytest.fixture(scope="session")
def auto_pair(auto_field):
    return attractor_repeller(auto_field, (-40.0, 40.0), cfg=TIGHT,
                              seed_repeller=default_repeller_seed(auto_field))


@pytest.fixture(scope="session")
def bench_continuous():
    """Benchmark field with the continuous rate-1 transition."""
    return build_model("quadratic:bench53", {"c": 1.0, "h": 0.0})


@pytest.fixture(scope="session")
def bench_pair(bench_continuous):
    # window wide enough for sampled profiles up to h = 1.5 at c = 1,
    # whose saturation rounds up past the continuous one by ~2h
    f, gamma = bench_continuous
    w = gamma.saturation_time + 31.0
    return attractor_repeller(f, (-w, w), cfg=TIGHT,
                              seed_repeller=default_repeller_seed(f))
