"""Scalar concave vector fields and asymptotically constant transition profiles.

This module defines the two value types the rest of the library consumes:

* :class:`ScalarField` wraps a right-hand side ``f(t, x)`` together with the
  metadata the solvers need (knot times where ``t -> f(t, x)`` is allowed to
  jump, a coercivity radius outside which the field points inward, and a bound
  on ``|f|`` inside that radius).
* :class:`Transition` wraps a bounded profile ``G(t)`` with finite limits
  ``gamma_minus`` and ``gamma_plus`` at ``t -> -/+ infinity``.  The composed
  equation ``x' = f(t, x - G(t))`` models a transition between the limiting
  equations ``x' = f(t, x - gamma_minus)`` and ``x' = f(t, x - gamma_plus)``.

Constructors are provided for the quadratic family ``-x^2 + p(t)``, for an
energy-balance climate model with a quartic right-hand side, and for a
synchronized Hopfield-type network equation.  All values are immutable; the
callables they carry must be pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ForcingProfile",
    "ScalarField",
    "Transition",
    "make_quadratic",
    "translate_by_transition",
    "shift_parameter",
    "time_shift_forcing",
    "discretize_transition",
    "rate_transition",
    "polygonal_transition",
    "step_transition",
    "arctan_transition",
    "constant_transition",
    "climate_constants",
    "climate_equilibria",
    "climate_field",
    "hopfield_field",
    "bench_forcing",
    "fig_phase_forcing",
    "constant_forcing",
    "MODEL_REGISTRY",
    "build_model",
]

_MONOTONE_KINDS = ("nonincreasing", "nondecreasing", "none")


@dataclass(frozen=True, eq=False)
class ForcingProfile:
    """A bounded measurable forcing ``t -> p(t)`` with a declared sup bound.

    Parameters
    ----------
    value : callable
        The forcing itself.
    description : str
        Human-readable summary used by the model registry.
    sup_abs : float
        A bound on ``sup_t |p(t)|``.  It does not need to be sharp, but it
        must be valid: coercivity radii are derived from it.
    """

    value: Callable[[float], float]
    description: str = ""
    sup_abs: float = 1.0

    def __post_init__(self):
        if not self.sup_abs > 0.0:
            raise ValueError("sup_abs must be positive")


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Right-hand side of a scalar nonautonomous ODE ``x' = f(t, x)``.

    Attributes
    ----------
    rhs, rhs_dx : callable
        ``f(t, x)`` and its partial derivative in ``x``.
    knots : tuple of float
        Times where ``t -> f(t, x)`` may be discontinuous.  Integrators clip
        steps so that no step crosses a knot.
    coercivity_radius : float
        Radius ``rho`` with ``f(t, x) < 0`` for ``x > rho`` (and for
        ``x < -rho`` when ``coercive_side == "both"``).
    m_bound : float
        Bound on ``sup_t sup_{|x| <= rho} |f(t, x)|``.
    structure : str or None
        ``"quadratic"`` marks fields of the exact shape ``-x^2 + p(t)``;
        several sharp criteria are only valid for that shape.
    concavity_domain : (float, float)
        Interval of the state variable on which ``x -> f(t, x)`` is concave.
    coercive_side : str
        ``"both"``, ``"upper"``, or ``"upper-average"`` (inward drift on the
        upper side only in time average; no pointwise bound exists).
    base, transition :
        Set on fields produced by :func:`translate_by_transition`, pointing
        back at the unperturbed field and the profile used.
    """

    rhs: Callable[[float, float], float]
    rhs_dx: Callable[[float, float], float]
    coercivity_radius: float
    m_bound: float
    knots: tuple = ()
    name: str = ""
    structure: Optional[str] = None
    forcing: Optional[ForcingProfile] = None
    concavity_domain: tuple = (-math.inf, math.inf)
    coercive_side: str = "both"
    base: Optional["ScalarField"] = None
    transition: Optional["Transition"] = None

    def __post_init__(self):
        if not self.coercivity_radius > 0.0:
            raise ValueError("coercivity_radius must be positive")
        if not self.m_bound > 0.0:
            raise ValueError("m_bound must be positive")
        if self.coercive_side not in ("both", "upper", "upper-average"):
            raise ValueError("unknown coercive_side %r" % (self.coercive_side,))
        object.__setattr__(self, "knots", tuple(sorted(self.knots)))


@dataclass(frozen=True, eq=False)
class Transition:
    """Bounded profile with finite limits at both ends of the time axis.

    ``saturation_time`` is a time ``T`` with ``|value(t) - gamma_minus|``
    (resp. ``gamma_plus``) bounded by ``tail_tol`` for ``t <= -T`` (resp.
    ``t >= T``).  ``knots`` lists the discontinuity (or kink) times inside
    the saturation window; piecewise-constant profiles produced by
    :func:`discretize_transition` also record their grid ``step``.
    """

    value: Callable[[float], float]
    gamma_minus: float
    gamma_plus: float
    saturation_time: float
    derivative: Optional[Callable[[float], float]] = None
    monotone: str = "none"
    knots: tuple = ()
    tail_tol: float = 0.0
    sup_abs: Optional[float] = None
    step: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        if self.monotone not in _MONOTONE_KINDS:
            raise ValueError("monotone must be one of %s" % (_MONOTONE_KINDS,))
        if self.saturation_time < 0.0:
            raise ValueError("saturation_time must be nonnegative")
        if self.sup_abs is None:
            bound = max(abs(self.gamma_minus), abs(self.gamma_plus)) + abs(self.tail_tol)
            object.__setattr__(self, "sup_abs", bound)
        object.__setattr__(self, "knots", tuple(sorted(self.knots)))


# ---------------------------------------------------------------------------
# quadratic family
# ---------------------------------------------------------------------------

def make_quadratic(p: ForcingProfile, name: str = "") -> ScalarField:
    """Build the concave quadratic field ``f(t, x) = -x^2 + p(t)``.

    The coercivity radius is ``sqrt(sup|p|) + 1`` and the bound on ``|f|``
    inside it is ``rho^2 + sup|p|``.
    """
    sup = float(p.sup_abs)
    rho = math.sqrt(sup) + 1.0
    pval = p.value

    def rhs(t, x):
        return -x * x + pval(t)

    def rhs_dx(t, x):
        return -2.0 * x

    return ScalarField(
        rhs=rhs,
        rhs_dx=rhs_dx,
        coercivity_radius=rho,
        m_bound=rho * rho + sup,
        name=name or "quadratic",
        structure="quadratic",
        forcing=p,
    )


def time_shift_forcing(p: ForcingProfile, s: float) -> ForcingProfile:
    """Phase-shifted forcing ``p_s(t) = p(s + t)``."""
    base = p.value
    s = float(s)
    return ForcingProfile(
        value=lambda t: base(s + t),
        description="%s shifted by %g" % (p.description or "forcing", s),
        sup_abs=p.sup_abs,
    )


def shift_parameter(f: ScalarField, lam: float) -> ScalarField:
    """The field ``f + lam``.  Preserves the quadratic structure tag."""
    lam = float(lam)
    base_rhs = f.rhs

    def rhs(t, x):
        return base_rhs(t, x) + lam

    forcing = None
    if f.structure == "quadratic" and f.forcing is not None:
        pval = f.forcing.value
        forcing = ForcingProfile(
            value=lambda t: pval(t) + lam,
            description=f.forcing.description,
            sup_abs=f.forcing.sup_abs + abs(lam),
        )
        rho = math.sqrt(forcing.sup_abs) + 1.0
        m = rho * rho + forcing.sup_abs
    elif lam <= 0.0:
        # adding a nonpositive constant keeps the inward drift
        rho = f.coercivity_radius
        m = f.m_bound + abs(lam)
    else:
        rho = _expand_radius(f, lam)
        m = _sampled_sup(rhs, rho, f)
    return ScalarField(
        rhs=rhs,
        rhs_dx=f.rhs_dx,
        coercivity_radius=rho,
        m_bound=m,
        knots=f.knots,
        name=f.name,
        structure=f.structure,
        forcing=forcing,
        concavity_domain=f.concavity_domain,
        coercive_side=f.coercive_side,
    )


def _expand_radius(f: ScalarField, lam: float) -> float:
    ts = np.linspace(-200.0, 200.0, 241)
    rho = f.coercivity_radius
    for _ in range(12):
        ok = all(f.rhs(t, rho + 0.0) + lam < 0.0 for t in ts)
        if f.coercive_side == "both":
            ok = ok and all(f.rhs(t, -rho) + lam < 0.0 for t in ts)
        if ok:
            return rho + 1.0
        rho *= 2.0
    raise ValueError("could not restore coercivity after parameter shift")


def _sampled_sup(rhs, rho, f: ScalarField, transition: Optional[Transition] = None) -> float:
    half = max(f.coercivity_radius, rho)
    t_hi = 50.0
    if transition is not None:
        t_hi = max(t_hi, transition.saturation_time + 10.0)
    ts = np.concatenate([np.linspace(-t_hi, t_hi, 401), np.asarray(f.knots, dtype=float)])
    xs = np.linspace(-half, half, 41)
    best = 0.0
    for t in ts:
        for x in xs:
            best = max(best, abs(rhs(float(t), float(x))))
    return 1.1 * best + 1e-9


def translate_by_transition(f: ScalarField, gamma: Transition) -> ScalarField:
    """The transition equation field ``g(t, x) = f(t, x - G(t))``."""
    base_rhs, base_dx, gval = f.rhs, f.rhs_dx, gamma.value

    def rhs(t, x):
        return base_rhs(t, x - gval(t))

    def rhs_dx(t, x):
        return base_dx(t, x - gval(t))

    sup_g = float(gamma.sup_abs)
    rho = f.coercivity_radius + sup_g
    if f.structure == "quadratic" and f.forcing is not None:
        m = (rho + sup_g) ** 2 + f.forcing.sup_abs
    else:
        m = _sampled_sup(rhs, rho, f, gamma)
    return ScalarField(
        rhs=rhs,
        rhs_dx=rhs_dx,
        coercivity_radius=rho,
        m_bound=m,
        knots=tuple(sorted(set(f.knots) | set(gamma.knots))),
        name=(f.name + "+" + (gamma.name or "transition")) if f.name else "translated",
        structure=None,
        concavity_domain=f.concavity_domain,
        coercive_side=f.coercive_side,
        base=f,
        transition=gamma,
    )


# ---------------------------------------------------------------------------
# transition profiles
# ---------------------------------------------------------------------------

def constant_transition(v: float, name: str = "constant") -> Transition:
    v = float(v)
    return Transition(
        value=lambda t: v,
        gamma_minus=v,
        gamma_plus=v,
        saturation_time=0.0,
        derivative=lambda t: 0.0,
        monotone="nonincreasing",
        name=name,
    )


def arctan_transition(c: float, size: float = 1.0, tail: float = 0.01) -> Transition:
    """Smooth sigmoid profile ``size * (2/pi) * atan(c t)``.

    ``tail`` fixes the declared saturation: ``|value(t) - limit|`` is below
    ``|size| * tail`` for ``|t| >= saturation_time``.
    """
    if c <= 0.0:
        raise ValueError("rate c must be positive")
    if not 0.0 < tail < 1.0:
        raise ValueError("tail must lie in (0, 1)")
    c, size = float(c), float(size)
    two_over_pi = 2.0 / math.pi

    def value(t):
        return size * two_over_pi * math.atan(c * t)

    def derivative(t):
        return size * two_over_pi * c / (1.0 + (c * t) ** 2)

    return Transition(
        value=value,
        gamma_minus=-size,
        gamma_plus=size,
        saturation_time=math.tan(0.5 * math.pi * (1.0 - tail)) / c,
        derivative=derivative,
        monotone="nondecreasing" if size >= 0.0 else "nonincreasing",
        tail_tol=abs(size) * tail,
        name="arctan(c=%g,size=%g)" % (c, size),
    )


def polygonal_transition(c: float, d: float) -> Transition:
    """Piecewise-linear ramp from ``-d`` to ``d`` with slope ``c*d`` on ``[-1/c, 1/c]``."""
    if c <= 0.0:
        raise ValueError("rate c must be positive")
    if d < 0.0:
        raise ValueError("size d must be nonnegative")
    c, d = float(c), float(d)
    t_star = 1.0 / c

    def value(t):
        u = c * t
        if u < -1.0:
            return -d
        if u > 1.0:
            return d
        return d * u

    def derivative(t):
        return c * d if -t_star <= t < t_star else 0.0

    return Transition(
        value=value,
        gamma_minus=-d,
        gamma_plus=d,
        saturation_time=t_star,
        derivative=derivative,
        monotone="nondecreasing",
        knots=(-t_star, t_star),
        name="polygonal(c=%g,d=%g)" % (c, d),
    )


def step_transition(d: float) -> Transition:
    """Instantaneous jump: ``-d`` for ``t < 0``, ``0`` at ``t = 0``, ``d`` for ``t > 0``."""
    if d < 0.0:
        raise ValueError("size d must be nonnegative")
    d = float(d)

    def value(t):
        if t < 0.0:
            return -d
        if t > 0.0:
            return d
        return 0.0

    return Transition(
        value=value,
        gamma_minus=-d,
        gamma_plus=d,
        saturation_time=0.0,
        monotone="nondecreasing",
        knots=(0.0,),
        name="step(d=%g)" % d,
    )


def _grid_index(t: float, h: float) -> int:
    # snap to the grid when t sits within 1e-9 steps of a grid point, so that
    # value(j*h) uses the j-th cell exactly despite floating point division
    q = t / h
    j = math.floor(q)
    if q - j > 1.0 - 1e-9:
        j += 1
    return j


def discretize_transition(gamma: Transition, h: float) -> Transition:
    """Right-continuous piecewise-constant sampling at an equispaced grid.

    The value on ``[j*h, (j+1)*h)`` is ``gamma.value(j*h)``; in particular the
    sampled profile agrees with ``gamma`` at every grid point.  ``h == 0``
    returns ``gamma`` unchanged.
    """
    if h < 0.0:
        raise ValueError("grid step must be nonnegative")
    if h == 0.0:
        return gamma
    h = float(h)
    base = gamma.value
    n = int(math.ceil(gamma.saturation_time / h)) + 2
    big_t = n * h
    tail = max(
        abs(base(big_t) - gamma.gamma_plus),
        abs(base(-big_t) - gamma.gamma_minus),
    ) + gamma.tail_tol

    def value(t):
        return base(_grid_index(t, h) * h)

    return Transition(
        value=value,
        gamma_minus=gamma.gamma_minus,
        gamma_plus=gamma.gamma_plus,
        saturation_time=big_t,
        derivative=None,
        monotone=gamma.monotone,
        knots=tuple(j * h for j in range(-n, n + 1)),
        tail_tol=tail,
        sup_abs=gamma.sup_abs,
        step=h,
        name="%s@h=%g" % (gamma.name or "profile", h),
    )


def rate_transition(gamma: Transition, c: float) -> Transition:
    """Time-rescaled profile ``t -> gamma(c t)``.  Compose before discretizing."""
    if c <= 0.0:
        raise ValueError("rate c must be positive")
    c = float(c)
    base, dbase = gamma.value, gamma.derivative
    deriv = (lambda t: c * dbase(c * t)) if dbase is not None else None
    return Transition(
        value=lambda t: base(c * t),
        gamma_minus=gamma.gamma_minus,
        gamma_plus=gamma.gamma_plus,
        saturation_time=gamma.saturation_time / c,
        derivative=deriv,
        monotone=gamma.monotone,
        knots=tuple(k / c for k in gamma.knots),
        tail_tol=gamma.tail_tol,
        sup_abs=gamma.sup_abs,
        name="%s*rate%g" % (gamma.name or "profile", c),
    )


# ---------------------------------------------------------------------------
# climate model (zero-dimensional energy balance with ice-albedo feedback)
# ---------------------------------------------------------------------------

_KAPPA = 60.0 * 60.0 * 24.0 * 365.25  # seconds per year
_TAU = 1e8
_EPS_SA = 0.62
_SIGMA = 5.6704e-8
_I0 = 1366.0
_B_LO = 1.690e-5
_B_HI = 1.835e-5
_SIG_K = 1e-6 / (1.0 - 1e-6)  # logistic constant fixing lambda(0) = 1e-6


def _mu(t_seconds: float) -> float:
    return (
        1.0
        + 0.0005 * math.sin(2.0 * math.pi * t_seconds / (11.0 * _KAPPA))
        + 0.0002 * math.sin(2.0 * math.pi * t_seconds / _KAPPA)
    )


def _logistic(y: float) -> float:
    if y > 500.0:
        return 1.0
    e = _SIG_K * math.exp(y)
    return e / (1.0 + e)


def _b_of(t_seconds: float) -> float:
    lam = _logistic(t_seconds / _KAPPA)
    return _B_LO * (1.0 - lam) + _B_HI * lam


_MU_MINUS = 1.0 - 0.0007
_MU_PLUS = 1.0 + 0.0007
_I_MINUS = _MU_MINUS * _I0
_I_PLUS = _MU_PLUS * _I0


def _m_of(t_seconds: float) -> float:
    b = _b_of(t_seconds)
    return _I_MINUS * b * b / (16.0 * _EPS_SA * _SIGMA)


def climate_constants(mu_minus: float, mu_plus: float, b_minus: float, b_plus: float):
    """Size thresholds and temperature markers of the energy-balance model.

    Returns a dict with

    * ``d1``: below it the lower/upper equilibrium branches of every frozen
      instance stay separated,
    * ``d2``: below it they stay separated uniformly across all instances,
    * ``T1``: every constant temperature below it is an upper solution,
    * ``T2``: the right-hand side is concave in ``T`` above it
      (``T1 = sqrt(3) * T2``).
    """
    for nm, v in (("mu_minus", mu_minus), ("mu_plus", mu_plus),
                  ("b_minus", b_minus), ("b_plus", b_plus)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
            raise ValueError("%s must be a positive finite number" % nm)
    if mu_minus > mu_plus:
        raise ValueError("degenerate insolation bounds: mu_minus > mu_plus")
    if b_minus > b_plus:
        raise ValueError("degenerate albedo-slope bounds: b_minus > b_plus")
    i_minus, i_plus = mu_minus * _I0, mu_plus * _I0
    d1 = 1.0 - (math.sqrt(i_plus / i_minus) - 1.0) ** 2
    ratio = b_plus * i_plus / (b_minus * i_minus)
    root_ratio = b_plus * math.sqrt(i_plus) / (b_minus * math.sqrt(i_minus))
    d2 = 1.0 - (ratio - 1.0) ** 2 / (root_ratio + 1.0) ** 2
    t1 = math.sqrt(b_plus * i_plus / (8.0 * _EPS_SA * _SIGMA))
    t2 = math.sqrt(b_plus * i_plus / (24.0 * _EPS_SA * _SIGMA))
    return {"d1": d1, "d2": d2, "T1": t1, "T2": t2}


def climate_equilibria(s_years: float, t_years: float, d: float):
    """Instantaneous equilibrium temperatures ``(T_minus, T_plus)``.

    Roots of the quartic right-hand side frozen at transition time ``s`` and
    forcing time ``t`` (both in years).  Requires ``I(t) >= d * I_minus``.
    """
    i_t = _mu(t_years * _KAPPA) * _I0
    if i_t < d * _I_MINUS:
        raise ValueError("no real equilibria: insolation below d * I_minus")
    b_s = _b_of(s_years * _KAPPA)
    pref = b_s * math.sqrt(i_t) / (8.0 * _EPS_SA * _SIGMA)
    root = math.sqrt(i_t - d * _I_MINUS)
    t_plus = math.sqrt(pref * (math.sqrt(i_t) + root))
    t_minus = math.sqrt(pref * (math.sqrt(i_t) - root))
    return t_minus, t_plus


def climate_field(mode="coupled", c: float = 1.0, d: float = 0.999, l: float = 0.0) -> ScalarField:
    """Energy-balance temperature equation, time in years.

    ``mode`` is either the string ``"coupled"`` (the albedo parameters follow
    the transition clock ``c * (u + l)``) or a number ``s`` in years (the
    albedo parameters are frozen at ``s``).  Temperatures must stay positive:
    evaluation at ``T <= 0`` is rejected, the model lives above the absolute
    zero.  The right-hand side is concave in ``T`` only for ``T > T2``.
    """
    if mode != "coupled" and not isinstance(mode, (int, float)):
        raise ValueError('mode must be "coupled" or a frozen time in years')
    if c <= 0.0:
        raise ValueError("rate c must be positive")
    if d <= 0.0:
        raise ValueError("size d must be positive")
    coupled = mode == "coupled"
    s_seconds = 0.0 if coupled else float(mode) * _KAPPA
    scale = _KAPPA / _TAU

    def albedo_args(u):
        ts = _KAPPA * c * (u + l) if coupled else s_seconds
        return _b_of(ts), _m_of(ts)

    def rhs(u, T):
        if T <= 0.0:
            raise ValueError("temperature must stay above the absolute zero")
        b, m = albedo_args(u)
        i_t = _mu(u * _KAPPA) * _I0
        return scale * (-_EPS_SA * _SIGMA * T ** 4 + 0.25 * i_t * b * T * T
                        - 0.25 * i_t * d * m)

    def rhs_dx(u, T):
        if T <= 0.0:
            raise ValueError("temperature must stay above the absolute zero")
        b, _ = albedo_args(u)
        i_t = _mu(u * _KAPPA) * _I0
        return scale * (-4.0 * _EPS_SA * _SIGMA * T ** 3 + 0.5 * i_t * b * T)

    consts = climate_constants(_MU_MINUS, _MU_PLUS, _B_LO, _B_HI)
    rho = consts["T1"] + 1.0
    m_plus = _I_MINUS * _B_HI * _B_HI / (16.0 * _EPS_SA * _SIGMA)
    m_bound = scale * (_EPS_SA * _SIGMA * rho ** 4 + 0.25 * _I_PLUS * _B_HI * rho * rho
                       + 0.25 * _I_PLUS * d * m_plus)
    return ScalarField(
        rhs=rhs,
        rhs_dx=rhs_dx,
        coercivity_radius=rho,
        m_bound=m_bound,
        name="climate(%s,c=%g,d=%g,l=%g)" % ("coupled" if coupled else "s=%g" % mode, c, d, l),
        concavity_domain=(consts["T2"], math.inf),
        coercive_side="upper",
    )


# ---------------------------------------------------------------------------
# Hopfield-type synchronized network
# ---------------------------------------------------------------------------

_GOLD = (1.0 + math.sqrt(5.0)) / 2.0


def hopfield_field(alpha: float) -> ScalarField:
    """Synchronized network equation ``y' = -a(t) y + z(t) f(y) + I(t)``.

    ``alpha >= 0`` scales a sigmoidal upward trend in the internal decay rate
    ``a``; the input ``I`` is mildly inhibitory and the coupling ``z`` stays
    above ``0.25``.  The field is concave in ``y`` only for ``y > 0``, and the
    decay rate has infimum zero, so the inward drift on the upper side holds
    in time average rather than pointwise.
    """
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    alpha = float(alpha)

    def a_of(t):
        return 0.2 * (1.0 + math.sin(math.pi * t) * math.sin(_GOLD * t)) \
            + alpha / (1.0 + math.exp(-t / 5.0))

    def z_of(t):
        return 1.0 + 0.75 * math.sin(t / 7.0) * math.sin(_GOLD * t)

    def input_of(t):
        return 0.2 * (math.sin(2.0 * math.pi * t / math.sqrt(5.0)) * math.cos(t / 7.0) - 1.5)

    def rhs(t, y):
        return -a_of(t) * y + z_of(t) * math.tanh(0.5 * y) + input_of(t)

    def rhs_dx(t, y):
        th = math.tanh(0.5 * y)
        return -a_of(t) + 0.5 * z_of(t) * (1.0 - th * th)

    rho = 10.0
    m_bound = (0.4 + alpha) * rho + 1.75 + 0.5
    return ScalarField(
        rhs=rhs,
        rhs_dx=rhs_dx,
        coercivity_radius=rho,
        m_bound=m_bound,
        name="hopfield(alpha=%g)" % alpha,
        concavity_domain=(0.0, math.inf),
        coercive_side="upper-average",
    )


# ---------------------------------------------------------------------------
# stock forcings and the model registry
# ---------------------------------------------------------------------------

def bench_forcing() -> ForcingProfile:
    """Quasi-periodic benchmark forcing ``0.962 - sin(t/2) - sin(sqrt(5) t)``."""
    r5 = math.sqrt(5.0)
    return ForcingProfile(
        value=lambda t: 0.962 - math.sin(0.5 * t) - math.sin(r5 * t),
        description="quasi-periodic benchmark forcing",
        sup_abs=2.962,
    )


def fig_phase_forcing(s: float = 0.0) -> ForcingProfile:
    """Phase-family forcing ``0.83 - sin((t+s)/2) - sin(sqrt(5)(t+s))``."""
    r5 = math.sqrt(5.0)
    s = float(s)
    return ForcingProfile(
        value=lambda t: 0.83 - math.sin(0.5 * (t + s)) - math.sin(r5 * (t + s)),
        description="phase-scan forcing family, offset %g" % s,
        sup_abs=2.83,
    )


def constant_forcing(level: float = 1.0) -> ForcingProfile:
    level = float(level)
    return ForcingProfile(
        value=lambda t: level,
        description="constant forcing %g" % level,
        sup_abs=max(abs(level), 1e-12),
    )


def _build_bench53(params):
    c = float(params.get("c", 1.0))
    h = float(params.get("h", 0.0))
    phase = float(params.get("phase", 0.0))
    p = bench_forcing()
    if phase:
        p = time_shift_forcing(p, phase)
    f = make_quadratic(p, name="bench53")
    gamma = rate_transition(arctan_transition(1.0), c)
    if h > 0.0:
        gamma = discretize_transition(gamma, h)
    return f, gamma


def _build_fig61(params):
    s = float(params.get("s", 0.0))
    c = float(params.get("c", 1.0))
    h = float(params.get("h", 0.0))
    f = make_quadratic(fig_phase_forcing(s), name="fig61")
    gamma = rate_transition(arctan_transition(1.0), c)
    if h > 0.0:
        gamma = discretize_transition(gamma, h)
    return f, gamma


def _build_polygonal(params):
    c = float(params.get("c", 1.0))
    d = float(params.get("d", 0.5))
    which = params.get("forcing", "bench53")
    if which == "bench53":
        p = bench_forcing()
    elif which == "const1":
        p = constant_forcing(1.0)
    else:
        raise ValueError("unknown forcing %r (expected bench53 or const1)" % (which,))
    f = make_quadratic(p, name="polygonal-base")
    return f, polygonal_transition(c, d)


def _build_climate(params):
    mode = params.get("mode", "coupled")
    f = climate_field(
        mode=mode,
        c=float(params.get("c", 1.0)),
        d=float(params.get("d", 0.999)),
        l=float(params.get("l", 0.0)),
    )
    return f, constant_transition(0.0)


def _build_hopfield(params):
    f = hopfield_field(float(params.get("alpha", 0.0)))
    return f, constant_transition(0.0)


MODEL_REGISTRY = {
    "quadratic:bench53": {
        "build": _build_bench53,
        "params": {"c": 1.0, "h": 0.0, "phase": 0.0},
        "description": "quadratic field with quasi-periodic forcing and a sigmoid transition",
    },
    "quadratic:fig61": {
        "build": _build_fig61,
        "params": {"s": 0.0, "c": 1.0, "h": 0.0},
        "description": "quadratic phase-scan family with a sigmoid transition",
    },
    "polygonal": {
        "build": _build_polygonal,
        "params": {"c": 1.0, "d": 0.5, "forcing": "bench53"},
        "description": "quadratic field with a piecewise-linear ramp transition",
    },
    "climate": {
        "build": _build_climate,
        "params": {"mode": "coupled", "c": 1.0, "d": 0.999, "l": 0.0},
        "description": "energy-balance temperature model with ice-albedo feedback",
    },
    "hopfield": {
        "build": _build_hopfield,
        "params": {"alpha": 0.0},
        "description": "synchronized neural network with drifting decay rate",
    },
}


def build_model(model_id: str, params: Optional[dict] = None):
    """Instantiate ``(field, transition)`` from the registry."""
    if model_id not in MODEL_REGISTRY:
        raise KeyError("unknown model id %r; known: %s"
                       % (model_id, ", ".join(sorted(MODEL_REGISTRY))))
    entry = MODEL_REGISTRY[model_id]
    merged = dict(entry["params"])
    for key, val in (params or {}).items():
        if key not in merged:
            raise ValueError("unknown parameter %r for model %s" % (key, model_id))
        merged[key] = val
    return entry["build"](merged)
