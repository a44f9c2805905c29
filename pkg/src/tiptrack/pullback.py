"""Pullback attractor-repeller pairs and the bounded-solution boundaries.

For a concave coercive field the bounded solutions, when any exist, fill an
integral funnel whose upper boundary attracts pullback-forward and whose
lower boundary repels (equivalently, attracts pullback-backward).  This
module computes numerical candidates for that pair by integrating from
coercivity-level seeds over doubling horizons until the window values
stabilize, and derives the auxiliary objects the certificate checks consume:

* the boundaries ``upper = a_G`` and ``lower = r_G`` of past-bounded and
  future-bounded solutions of the transition equation, seeded from the
  limiting pairs;
* convex combinations ``b_nu = nu * attractor + (1 - nu) * repeller``, which
  are strict lower solutions for ``nu`` strictly between 0 and 1;
* the uniform time ``h`` after which the flow started on ``b_nu1`` has
  overtaken ``b_nu2`` (a transfer time between combination levels);
* exponential dichotomy constants estimated along a trajectory.

Everything here is grid-rigorous: suprema and infima are taken over sample
grids and the callers account for that through explicit error budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .fields import ScalarField, Transition, translate_by_transition
from .integrate import (
    BlowUp,
    IntegratorConfig,
    IntegrationError,
    Trajectory,
    integrate_span,
)

__all__ = [
    "HyperbolicPair",
    "SpecialSolutions",
    "NoPairError",
    "PairConvergenceError",
    "attractor_repeller",
    "default_repeller_seed",
    "special_solutions",
    "convex_combination",
    "transfer_time",
    "entry_exit_times",
    "dichotomy_estimate",
    "perturbation_radius",
    "lower_solution_test",
]


class NoPairError(RuntimeError):
    """No attractor-repeller pair was found (escape or candidate crossing)."""

    def __init__(self, reason: str, blow_up: Optional[BlowUp] = None):
        super().__init__(reason)
        self.reason = reason
        self.blow_up = blow_up


class PairConvergenceError(RuntimeError):
    """Pullback iteration did not stabilize within the horizon budget."""


@dataclass(frozen=True, eq=False)
class HyperbolicPair:
    """Numerical attractor-repeller pair certified on a window.

    ``tail_defect`` bounds the change of either trajectory on the window
    under the last horizon doubling; it enters every error budget downstream.
    """

    attractor: Trajectory
    repeller: Trajectory
    window: tuple
    min_separation: float
    field: ScalarField
    tail_defect: float
    horizon: float
    dichotomy: Optional[tuple] = None


@dataclass(frozen=True, eq=False)
class SpecialSolutions:
    """Boundaries of the bounded-solution set of a transition equation.

    ``upper`` bounds the solutions that stay bounded in the past, ``lower``
    those bounded in the future.  ``gap = upper - lower`` at
    ``comparison_time`` decides between the tracking and tipping regimes;
    ``-inf`` records that ``upper`` escaped before a comparison was possible.
    """

    upper: Trajectory
    lower: Trajectory
    comparison_time: float
    gap: float
    tail_budget: float
    transition: Transition
    field: ScalarField
    t_inf: float


def _as_window(window) -> tuple:
    if np.ndim(window) == 0:
        w = float(window)
        if w <= 0.0:
            raise ValueError("scalar window must be positive")
        return (-w, w)
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    return (lo, hi)


def _window_grid(f: ScalarField, lo: float, hi: float, samples: int) -> np.ndarray:
    ts = np.linspace(lo, hi, samples)
    inner = [k for k in f.knots if lo < k < hi]
    if inner:
        ts = np.unique(np.concatenate([ts, np.asarray(inner)]))
    return ts


def default_repeller_seed(f: ScalarField) -> float:
    """Seed below the repeller: -(rho+1) for two-sided coercive fields, just
    above the concavity floor otherwise."""
    if f.coercive_side == "both":
        return -(f.coercivity_radius + 1.0)
    lo = f.concavity_domain[0]
    if math.isfinite(lo):
        return lo + 1e-2
    return -(f.coercivity_radius + 1.0)


def attractor_repeller(f: ScalarField, window, cfg: Optional[IntegratorConfig] = None,
                       tail_tol: float = 1e-6, horizon: float = 40.0,
                       max_doublings: int = 5, seed_attractor: Optional[float] = None,
                       seed_repeller: Optional[float] = None,
                       samples: int = 512) -> HyperbolicPair:
    """Pullback attractor and repeller candidates on a window.

    The attractor candidate is integrated forward from ``window_lo - H`` at
    one coercivity level above the radius, the repeller candidate backward
    from ``window_hi + H`` at the mirrored seed.  ``H`` doubles from
    ``horizon`` until both restrictions to the window move by less than the
    effective tolerance; escape of either candidate raises
    :class:`NoPairError` (there is no bounded solution on that side), failure
    to stabilize raises :class:`PairConvergenceError`.

    Two long runs differ by accumulated integration error even after the
    tail transient is gone, so the effective tolerance is ``tail_tol``
    raised to the observable noise floor of the integrator configuration;
    the achieved defect is reported in ``tail_defect`` and belongs in any
    downstream error budget.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    lo, hi = _as_window(window)
    noise_floor = 50.0 * (cfg.rel_tol * max(1.0, f.coercivity_radius) + cfg.abs_tol)
    eff_tol = max(tail_tol, noise_floor)
    seed_a = float(seed_attractor) if seed_attractor is not None \
        else f.coercivity_radius + 1.0
    seed_r = float(seed_repeller) if seed_repeller is not None \
        else default_repeller_seed(f)
    ts = _window_grid(f, lo, hi, samples)

    def run(h_val):
        a = integrate_span(f, (lo - h_val, hi), lo - h_val, seed_a, cfg)
        if a.blow_up is not None:
            raise NoPairError("attractor candidate escapes to %s"
                              % a.blow_up.direction, a.blow_up)
        if a.t_max < hi:
            raise NoPairError("attractor candidate left the window")
        r = integrate_span(f, (lo, hi + h_val), hi + h_val, seed_r, cfg)
        if r.blow_up_backward is not None:
            raise NoPairError("repeller candidate escapes to %s backward"
                              % r.blow_up_backward.direction, r.blow_up_backward)
        if r.t_min > lo:
            raise NoPairError("repeller candidate left the window")
        return a, r

    h_cur = float(horizon)
    a_prev, r_prev = run(h_cur)
    for _ in range(max_doublings):
        h_cur *= 2.0
        a_cur, r_cur = run(h_cur)
        defect = max(
            float(np.max(np.abs(a_cur(ts) - a_prev(ts)))),
            float(np.max(np.abs(r_cur(ts) - r_prev(ts)))),
        )
        if defect <= eff_tol:
            sep = a_cur(ts) - r_cur(ts)
            min_sep = float(np.min(sep))
            if min_sep <= 0.0:
                raise NoPairError("attractor and repeller candidates cross "
                                  "on the window (min separation %g)" % min_sep)
            return HyperbolicPair(
                attractor=a_cur,
                repeller=r_cur,
                window=(lo, hi),
                min_separation=min_sep,
                field=f,
                tail_defect=defect,
                horizon=h_cur,
            )
        a_prev, r_prev = a_cur, r_cur
    raise PairConvergenceError(
        "pullback iteration still moving after horizon %g; the pair is "
        "either absent or too weakly hyperbolic for tail_tol=%g" % (h_cur, eff_tol))


def special_solutions(f: ScalarField, gamma: Transition, pair: HyperbolicPair,
                      t_inf: Optional[float] = None, lead: float = 25.0,
                      cfg: Optional[IntegratorConfig] = None) -> SpecialSolutions:
    """Past-bounded and future-bounded boundaries of the transition equation.

    Seeds ``attractor(-T) + gamma_minus`` forward and
    ``repeller(T) + gamma_plus`` backward, with ``T = saturation + lead``.
    The comparison time is the first sample of the upper boundary at or past
    the saturation time; if the upper boundary escapes earlier the gap is
    reported as ``-inf``.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    if t_inf is None:
        t_inf = gamma.saturation_time + lead
    t_inf = float(t_inf)
    lo, hi = pair.window
    if lo > -t_inf or hi < t_inf:
        raise ValueError("pair window [%g, %g] does not cover the transition "
                         "span [-%g, %g]" % (lo, hi, t_inf, t_inf))
    g = translate_by_transition(f, gamma)
    upper = integrate_span(g, (-t_inf, t_inf), -t_inf,
                           pair.attractor(-t_inf) + gamma.gamma_minus, cfg)
    lower = integrate_span(g, (-t_inf, t_inf), t_inf,
                           pair.repeller(t_inf) + gamma.gamma_plus, cfg)
    tail_budget = pair.tail_defect + gamma.tail_tol
    t_target = min(gamma.saturation_time, t_inf)
    t_target = max(t_target, float(lower.t_min))
    idx = int(np.searchsorted(upper.t, t_target - 1e-12))
    if idx >= len(upper.t) or upper.blow_up is not None and upper.t_max < t_target:
        t0 = t_target
        gap = -math.inf
    else:
        t0 = float(upper.t[idx])
        if t0 > lower.t_max or t0 < lower.t_min:
            gap = -math.inf
        else:
            gap = float(upper(t0) - lower(t0))
    return SpecialSolutions(
        upper=upper,
        lower=lower,
        comparison_time=t0,
        gap=gap,
        tail_budget=tail_budget,
        transition=gamma,
        field=g,
        t_inf=t_inf,
    )


def convex_combination(pair: HyperbolicPair, nu: float) -> Callable[[float], float]:
    """The blend ``b_nu(t) = nu * attractor(t) + (1 - nu) * repeller(t)``."""
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1]")
    a, r = pair.attractor, pair.repeller
    nu = float(nu)

    def b(t):
        return nu * a(t) + (1.0 - nu) * r(t)

    return b


def transfer_time(pair: HyperbolicPair, nu1: float, nu2: float,
                  h_max: float = 20.0, window=None, s_step: float = 0.1,
                  cfg: Optional[IntegratorConfig] = None,
                  t_tol: float = 1e-10) -> float:
    """Smallest uniform lag after which the flow from ``b_nu1`` clears ``b_nu2``.

    For each starting time ``s`` on a grid over ``window`` (clipped so the
    integration span stays inside the pair coverage), integrates the
    solution started at ``b_nu1(s)`` and locates its first crossing of
    ``b_nu2``; the result is the largest crossing lag over the grid.  The
    answer is certified on the sample grid only; callers must budget for
    continuity in ``s``.  Raises ``ValueError`` if some crossing has not
    happened within ``h_max``.
    """
    if not (0.0 < nu1 <= nu2 < 1.0):
        raise ValueError("need 0 < nu1 <= nu2 < 1")
    if nu1 == nu2:
        return 0.0
    if cfg is None:
        cfg = IntegratorConfig()
    lo, hi = _as_window(window) if window is not None else pair.window
    lo = max(lo, pair.window[0])
    hi = min(hi, pair.window[1] - h_max)
    if hi < lo:
        raise ValueError("pair coverage too short for transfer horizon "
                         "h_max=%g" % h_max)
    b1 = convex_combination(pair, nu1)
    b2 = convex_combination(pair, nu2)
    worst = 0.0
    s = lo
    while s <= hi + 1e-12:
        x0 = b1(s)
        if x0 >= b2(s):
            s += s_step
            continue
        traj = integrate_span(pair.field, (s, s + h_max), s, x0, cfg)
        if traj.blow_up is not None:
            raise NoPairError("flow from the blend escaped during transfer "
                              "measurement at s=%g" % s, traj.blow_up)
        ts = traj.t
        gap_prev = x0 - b2(s)
        t_prev = s
        t_cross = None
        for i in range(1, len(ts)):
            t_i = float(ts[i])
            gap_i = float(traj(t_i) - b2(t_i))
            if gap_i >= 0.0:
                a_t, b_t = t_prev, t_i
                for _ in range(80):
                    if b_t - a_t <= t_tol:
                        break
                    mid = 0.5 * (a_t + b_t)
                    if traj(mid) - b2(mid) >= 0.0:
                        b_t = mid
                    else:
                        a_t = mid
                t_cross = b_t
                break
            t_prev, gap_prev = t_i, gap_i
        if t_cross is None:
            raise ValueError("no crossing within h_max=%g at s=%g; "
                             "increase h_max" % (h_max, s))
        worst = max(worst, t_cross - s)
        s += s_step
    return worst


def entry_exit_times(specials: SpecialSolutions, pair: HyperbolicPair,
                     times, nu1: float, nu2: float, budget: float = 0.0):
    """Anchor bracket ``(t1, t2)`` on a candidate time grid.

    ``t2`` is the earliest time where the lower boundary sits below the
    ``nu2`` blend (shifted back by the transition) with some earlier grid
    time ``t1`` where the upper boundary sits above the ``nu1`` blend;
    ``t1`` is the latest such time before ``t2``, so the bracket hugs the
    transition instead of drifting into a tail.  Slacks must clear
    ``budget``.
    """
    times = np.asarray(times, dtype=float)
    b1 = convex_combination(pair, nu1)
    b2 = convex_combination(pair, nu2)
    gval = specials.transition.value
    up, low = specials.upper, specials.lower
    left_ok = []
    right_ok = []
    for t in times:
        t = float(t)
        ok_l = ok_r = False
        if up.t_min <= t <= up.t_max:
            ok_l = (up(t) - gval(t) - b1(t)) > budget
        if low.t_min <= t <= low.t_max:
            ok_r = (b2(t) - (low(t) - gval(t))) > budget
        left_ok.append(ok_l)
        right_ok.append(ok_r)
    for j in range(len(times)):
        if not right_ok[j]:
            continue
        cands = [i for i in range(j) if left_ok[i]]
        if cands:
            return float(times[max(cands)]), float(times[j])
    raise ValueError("no anchor bracket found on the supplied grid")


def dichotomy_estimate(f: ScalarField, traj: Trajectory, window=None,
                       sense: str = "attractive", n_quad: int = 4000,
                       n_anchor: int = 120):
    """Exponential dichotomy constants ``(k, beta)`` along a trajectory.

    Estimates ``exp(int_s^t f_x(l, x(l)) dl) <= k * exp(-beta (t-s))`` for
    the attractive sense (``t >= s``), or with ``+beta (t-s)`` and ``t <= s``
    for the repulsive one, from a trapezoid cumulative integral on a fine
    grid and a coarse double loop over anchor pairs.  Raises ``ValueError``
    when no exponential rate of the requested sign is visible.
    """
    if sense not in ("attractive", "repulsive"):
        raise ValueError('sense must be "attractive" or "repulsive"')
    lo, hi = _as_window(window) if window is not None else (traj.t_min, traj.t_max)
    ts = np.linspace(lo, hi, n_quad + 1)
    vals = np.array([f.rhs_dx(float(t), traj(float(t))) for t in ts])
    dt = ts[1] - ts[0]
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * dt)])
    idx = np.linspace(0, n_quad, n_anchor).astype(int)
    worst_rate = -math.inf
    for ii in range(len(idx)):
        for jj in range(ii + 1, len(idx)):
            i, j = idx[ii], idx[jj]
            span = ts[j] - ts[i]
            if span <= 1e-9:
                continue
            rate = (cum[j] - cum[i]) / span
            worst_rate = max(worst_rate, rate if sense == "attractive" else -rate)
    # attractive: need sup rate < 0 so that beta = -sup rate > 0
    beta = -worst_rate
    if beta <= 0.0:
        raise ValueError("no exponential %s rate on the window (beta <= 0)" % sense)
    worst_k = 0.0
    for ii in range(len(idx)):
        for jj in range(ii + 1, len(idx)):
            i, j = idx[ii], idx[jj]
            span = ts[j] - ts[i]
            growth = (cum[j] - cum[i]) if sense == "attractive" else -(cum[j] - cum[i])
            worst_k = max(worst_k, growth + beta * span)
    return max(1.0, math.exp(worst_k)), beta


def perturbation_radius(k: float, beta_f: float, beta: float, rho: float,
                        m_dx: float, l_dx: float, eps: float) -> float:
    """Sup-norm perturbation size under which a pair persists within ``eps``.

    ``k`` and ``beta_f`` are dichotomy constants of the unperturbed pair,
    ``beta`` the retained rate, ``rho`` the localization radius, ``m_dx`` a
    bound on ``|f_x|`` and ``l_dx`` a Lipschitz bound of ``f_x`` near the
    pair.
    """
    if k < 1.0:
        raise ValueError("dichotomy constant k must be >= 1")
    if not 0.0 < beta < beta_f:
        raise ValueError("need 0 < beta < beta_f")
    if min(rho, m_dx, l_dx, eps) <= 0.0:
        raise ValueError("rho, m_dx, l_dx, eps must be positive")
    return min(0.5 * rho,
               beta * eps / (2.0 * k * m_dx),
               (beta_f - beta) / l_dx)


def lower_solution_test(f: ScalarField, b: Callable[[float], float], times,
                        db: Optional[Callable[[float], float]] = None):
    """Check the strict lower-solution inequality ``b'(t) < f(t, b(t))``.

    Returns ``(ok, worst_margin)`` with ``worst_margin = min f(t, b) - b'``
    over the sampled times; the derivative is a central difference when
    ``db`` is not supplied.
    """
    worst = math.inf
    for t in np.asarray(times, dtype=float):
        t = float(t)
        if db is not None:
            slope = db(t)
        else:
            dt = 1e-6 * (1.0 + abs(t))
            slope = (b(t + dt) - b(t - dt)) / (2.0 * dt)
        worst = min(worst, f.rhs(t, b(t)) - slope)
    return worst > 0.0, worst
