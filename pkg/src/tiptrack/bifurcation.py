"""Regime classification and the saddle-node parameter of transition equations.

Adding a parameter ``lambda`` to a concave coercive field produces a unique
threshold ``lambda*``: below it the transition equation ``x' = f(t, x - G(t))
+ lambda`` has no bounded solutions, above it a hyperbolic attractor-repeller
pair.  The sign of ``lambda*`` therefore classifies the unshifted equation:

* ``lambda* < 0``: case A, the local pullback attractor tracks the moving
  quasi-static attractor across the transition;
* ``lambda* > 0``: case C, rate-induced tipping, no bounded solutions;
* ``lambda* = 0``: the degenerate boundary case B.

``classify`` decides one equation by comparing the boundaries of past- and
future-bounded solutions at a comparison time past the transition, with an
explicit error budget; gaps inside the budget come back as the indeterminate
band rather than a sign.  ``lambda_star`` brackets the threshold by bisection
on that verdict.  The ``scan_*`` helpers sweep parameter grids, optionally
across worker processes, and serialize to stable CSV.
"""

from __future__ import annotations

import math
import multiprocessing
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .fields import (
    ScalarField,
    Transition,
    discretize_transition,
    make_quadratic,
    rate_transition,
    shift_parameter,
    time_shift_forcing,
    translate_by_transition,
)
from .integrate import IntegratorConfig, IntegrationError
from .pullback import (
    HyperbolicPair,
    NoPairError,
    PairConvergenceError,
    attractor_repeller,
    special_solutions,
)

__all__ = [
    "Verdict",
    "LambdaStar",
    "BracketError",
    "classify",
    "lambda_star",
    "scan_rate_step",
    "scan_phase",
    "scan_size",
    "refine_size_flip",
    "write_scan_csv",
    "CSV_KEYS",
]

CASE_A = "A_tracking"
CASE_B = "indeterminate_B_band"
CASE_C = "C_tipping"


class BracketError(RuntimeError):
    """The bisection bracket does not straddle the threshold."""

    def __init__(self, msg: str, verdict_lo: str = "", verdict_hi: str = ""):
        super().__init__(msg)
        self.verdict_lo = verdict_lo
        self.verdict_hi = verdict_hi


@dataclass(frozen=True)
class Verdict:
    """Outcome of one classification.

    ``gap`` is the distance between the bounded-solution boundaries at the
    comparison time (``-inf`` when the upper boundary escapes first) and
    ``margin = |gap| - error_budget`` quantifies how decisively the sign was
    resolved; the indeterminate band has a nonpositive margin.
    """

    case: str
    gap: float
    margin: float
    error_budget: float
    comparison_time: Optional[float] = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LambdaStar:
    value: float
    bracket: tuple
    tol: float
    converged: bool
    endpoint_verdicts: tuple = ("C_tipping", "A_tracking")
    n_classifications: int = 0


def _budget(cfg: IntegratorConfig, scale: float, tail: float) -> float:
    return 10.0 * (cfg.rel_tol * scale + cfg.abs_tol) + tail


def classify(f: ScalarField, gamma: Transition, pair: Optional[HyperbolicPair] = None,
             cfg: Optional[IntegratorConfig] = None, t_inf: Optional[float] = None,
             lead: float = 25.0, pair_tail: float = 1e-6,
             pair_kwargs: Optional[dict] = None) -> Verdict:
    """Classify ``x' = f(t, x - G(t))`` as tracking, tipping, or in the band.

    When no pair is supplied one is computed for ``f`` on a window covering
    the transition span.  Absence of the limiting pair already settles the
    matter: with no bounded solutions in the limits there are none across
    the transition either.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    if t_inf is None:
        t_inf = gamma.saturation_time + lead
    if pair is None:
        try:
            pair = attractor_repeller(f, (-(t_inf + 2.0), t_inf + 2.0), cfg=cfg,
                                      tail_tol=pair_tail, **(pair_kwargs or {}))
        except NoPairError as exc:
            return Verdict(
                case=CASE_C,
                gap=-math.inf,
                margin=math.inf,
                error_budget=_budget(cfg, 1.0, pair_tail),
                details={"reason": "no limiting pair: %s" % exc.reason},
            )
    specials = special_solutions(f, gamma, pair, t_inf=t_inf, cfg=cfg)
    if specials.gap == -math.inf:
        return Verdict(
            case=CASE_C,
            gap=-math.inf,
            margin=math.inf,
            error_budget=_budget(cfg, 1.0, specials.tail_budget),
            comparison_time=specials.comparison_time,
            details={"reason": "past-bounded boundary escapes before the "
                               "comparison time"},
        )
    t0 = specials.comparison_time
    scale = max(1.0, abs(float(specials.upper(t0))), abs(float(specials.lower(t0))))
    budget = _budget(cfg, scale, specials.tail_budget)
    gap = specials.gap
    if gap > budget:
        case = CASE_A
    elif gap < -budget:
        case = CASE_C
    else:
        case = CASE_B
    return Verdict(
        case=case,
        gap=gap,
        margin=abs(gap) - budget,
        error_budget=budget,
        comparison_time=t0,
        details={"t_inf": specials.t_inf},
    )


class _CachedPairFactory:
    """Builds the attractor-repeller pair of ``f + lam`` on a fixed window,
    caching by the shift so bisections across a scan share the work.

    The cache is a bounded LRU: a pair on a scan-sized window holds dense
    trajectories of several megabytes, and grid points bisect through mostly
    distinct shifts, so without eviction a shared factory grows with the
    whole scan instead of with its working set."""

    def __init__(self, f: ScalarField, window, cfg: IntegratorConfig,
                 pair_tail: float, pair_kwargs: Optional[dict] = None,
                 max_entries: int = 16):
        if max_entries < 1:
            raise ValueError("max_entries must be positive")
        self.f = f
        self.window = window
        self.cfg = cfg
        self.pair_tail = pair_tail
        self.pair_kwargs = pair_kwargs or {}
        self.max_entries = int(max_entries)
        self._cache = OrderedDict()

    def __call__(self, lam: float):
        key = round(float(lam), 12)
        hit = self._cache.get(key, None)
        if hit is None:
            f_lam = shift_parameter(self.f, lam)
            try:
                pair = attractor_repeller(f_lam, self.window, cfg=self.cfg,
                                          tail_tol=self.pair_tail, **self.pair_kwargs)
                hit = (f_lam, pair, None)
            except (NoPairError, PairConvergenceError) as exc:
                hit = (f_lam, None, exc)
            self._cache[key] = hit
            while len(self._cache) > self.max_entries:
                self._cache.popitem(last=False)
        else:
            self._cache.move_to_end(key)
        return hit


def _default_bracket(f: ScalarField, gamma: Transition, t_inf: float):
    g = translate_by_transition(f, gamma)
    ts = np.concatenate([
        np.linspace(-t_inf, t_inf, 2001),
        np.asarray([k for k in g.knots if -t_inf <= k <= t_inf], dtype=float),
    ])
    sup0 = max(abs(g.rhs(float(t), 0.0)) for t in ts)
    return (-g.m_bound - 1.0, sup0 + 1.0)


def lambda_star(f: ScalarField, gamma: Transition, tol: float = 1e-3,
                bracket=None, cfg: Optional[IntegratorConfig] = None,
                pair_tail: float = 1e-6, lead: float = 25.0,
                window=None, pair_factory: Optional[Callable] = None,
                pair_kwargs: Optional[dict] = None,
                max_iter: int = 200) -> LambdaStar:
    """Bisect the saddle-node threshold of ``x' = f(t, x - G(t)) + lambda``.

    Endpoint classifications must come out tipping below and tracking above,
    otherwise :class:`BracketError` reports the verdicts seen.  Midpoints
    falling in the indeterminate band are nudged by a quarter and an eighth
    of the current bracket; if no decisive point is found the bisection stops
    early with ``converged=False`` and the bracket as narrow as it got.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    t_inf = gamma.saturation_time + lead
    if window is None:
        window = (-(t_inf + 2.0), t_inf + 2.0)
    if bracket is None:
        bracket = _default_bracket(f, gamma, t_inf)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if pair_factory is None:
        pair_factory = _CachedPairFactory(f, window, cfg, pair_tail, pair_kwargs)
    n_class = 0

    def verdict_at(lam):
        nonlocal n_class
        n_class += 1
        f_lam, pair, fail = pair_factory(lam)
        if fail is not None:
            if isinstance(fail, NoPairError):
                return CASE_C
            return None  # pair not resolved: indeterminate
        try:
            v = classify(f_lam, gamma, pair=pair, cfg=cfg, t_inf=t_inf,
                         pair_tail=pair_tail)
        except (IntegrationError, ValueError):
            return None
        return v.case if v.case in (CASE_A, CASE_C) else None

    v_lo = verdict_at(lo)
    v_hi = verdict_at(hi)
    if v_lo != CASE_C or v_hi != CASE_A:
        raise BracketError(
            "bracket [%g, %g] does not straddle the threshold: verdicts "
            "(%s, %s)" % (lo, hi, v_lo, v_hi),
            verdict_lo=str(v_lo), verdict_hi=str(v_hi))
    converged = True
    it = 0
    while hi - lo > 2.0 * tol:
        it += 1
        if it > max_iter:
            converged = False
            break
        width = hi - lo
        mid = 0.5 * (lo + hi)
        decided = None
        for cand in (mid, mid + 0.125 * width, mid - 0.125 * width,
                     mid + 0.25 * width, mid - 0.25 * width):
            v = verdict_at(cand)
            if v is not None:
                decided = (cand, v)
                break
        if decided is None:
            converged = False
            break
        cand, v = decided
        if v == CASE_A:
            hi = cand
        else:
            lo = cand
    return LambdaStar(
        value=0.5 * (lo + hi),
        bracket=(lo, hi),
        tol=tol,
        converged=converged,
        endpoint_verdicts=(CASE_C, CASE_A),
        n_classifications=n_class,
    )


# ---------------------------------------------------------------------------
# grid scans
# ---------------------------------------------------------------------------

CSV_KEYS = {"rate_step": "h", "phase": "s", "size": "d"}

_SCAN_CTX = None


def _row(c, key_val, lam: Optional[LambdaStar], verdict: str) -> dict:
    if lam is None:
        return {"c": c, "key": key_val, "lambda_star": math.nan,
                "bracket_lo": math.nan, "bracket_hi": math.nan, "verdict": verdict}
    return {"c": c, "key": key_val, "lambda_star": lam.value,
            "bracket_lo": lam.bracket[0], "bracket_hi": lam.bracket[1],
            "verdict": verdict}


def _verdict_from_bracket(lam: LambdaStar) -> str:
    if lam.bracket[1] < 0.0:
        return CASE_A
    if lam.bracket[0] > 0.0:
        return CASE_C
    return CASE_B


def _scan_point(args):
    kind, c, key_val = args
    ctx = _SCAN_CTX
    try:
        if kind == "rate_step":
            gamma = rate_transition(ctx["gamma"], c)
            if key_val > 0.0:
                gamma = discretize_transition(gamma, key_val)
            f = ctx["f"]
        elif kind == "phase":
            gamma = ctx["gamma"]
            f = make_quadratic(time_shift_forcing(ctx["forcing"], key_val))
        elif kind == "size":
            f, gamma = ctx["family"](key_val)
        else:
            raise ValueError("unknown scan kind %r" % kind)
        factory = ctx.setdefault("_factory", {})
        cache = factory.get("f_obj", None)
        if kind == "rate_step" and cache is not None:
            pf = cache
        else:
            pf = _CachedPairFactory(f, ctx["window"], ctx["cfg"], ctx["pair_tail"])
            if kind == "rate_step":
                factory["f_obj"] = pf
        lam = lambda_star(f, gamma, tol=ctx["tol"], cfg=ctx["cfg"],
                          pair_tail=ctx["pair_tail"], lead=ctx["lead"],
                          window=ctx["window"],
                          pair_factory=pf if kind == "rate_step" else None)
        return _row(c, key_val, lam, _verdict_from_bracket(lam))
    except BracketError as exc:
        if exc.verdict_lo == CASE_A and exc.verdict_hi == CASE_A:
            return _row(c, key_val, None, CASE_A)
        if exc.verdict_lo == CASE_C and exc.verdict_hi == CASE_C:
            return _row(c, key_val, None, CASE_C)
        return _row(c, key_val, None, "failed:BracketError")
    except (NoPairError, PairConvergenceError, IntegrationError, ValueError) as exc:
        return _row(c, key_val, None, "failed:%s" % type(exc).__name__)


def _run_scan(kind, points, ctx, workers):
    global _SCAN_CTX
    _SCAN_CTX = ctx
    try:
        args = [(kind, c, k) for (c, k) in points]
        if workers > 1:
            mp = multiprocessing.get_context("fork")
            chunk = max(1, len(args) // (4 * workers))
            with mp.Pool(workers) as pool:
                rows = pool.map(_scan_point, args, chunksize=chunk)
        else:
            rows = [_scan_point(a) for a in args]
    finally:
        _SCAN_CTX = None
    return rows


def _scan_cfg(cfg):
    return cfg if cfg is not None else IntegratorConfig(rel_tol=1e-7, abs_tol=1e-9)


def scan_rate_step(f: ScalarField, gamma: Transition, c_grid, h_grid,
                   tol: float = 2e-3, cfg: Optional[IntegratorConfig] = None,
                   workers: int = 1, lead: float = 25.0,
                   pair_tail: float = 1e-6):
    """Sweep transition rate ``c`` and sampling step ``h`` (``h = 0`` means
    the continuous profile).  Returns ``(rows, summary)``.

    The pair of ``f + lambda`` does not depend on ``(c, h)``, so one cached
    factory on a window covering the slowest rate serves the whole grid.
    """
    cfg = _scan_cfg(cfg)
    c_grid = [float(c) for c in c_grid]
    h_grid = [float(h) for h in h_grid]
    if any(c <= 0.0 for c in c_grid):
        raise ValueError("rates c must be positive")
    if any(h < 0.0 for h in h_grid):
        raise ValueError("steps h must be nonnegative")
    t_span = max(
        discretize_transition(rate_transition(gamma, c), h).saturation_time
        if h > 0.0 else rate_transition(gamma, c).saturation_time
        for c in c_grid for h in h_grid
    )
    window = (-(t_span + lead + 2.0), t_span + lead + 2.0)
    ctx = {"f": f, "gamma": gamma, "tol": tol, "cfg": cfg, "window": window,
           "pair_tail": pair_tail, "lead": lead}
    points = [(c, h) for c in c_grid for h in h_grid]
    rows = _run_scan("rate_step", points, ctx, workers)
    n_failed = sum(1 for r in rows if str(r["verdict"]).startswith("failed"))
    summary = {"kind": "rate_step", "n_points": len(rows), "n_failed": n_failed}
    return rows, summary


def scan_phase(forcing, gamma: Transition, s_grid, tol: float = 2e-3,
               cfg: Optional[IntegratorConfig] = None, workers: int = 1,
               lead: float = 25.0, pair_tail: float = 1e-6,
               c_label: float = 1.0):
    """Sweep the phase ``s`` of the forcing ``p_s(t) = p(s + t)`` against a
    fixed transition.  ``total_tracking`` is flagged when every bracket top
    stays at or below minus the largest transition slope."""
    cfg = _scan_cfg(cfg)
    s_grid = [float(s) for s in s_grid]
    t_span = gamma.saturation_time
    window = (-(t_span + lead + 2.0), t_span + lead + 2.0)
    ctx = {"forcing": forcing, "gamma": gamma, "tol": tol, "cfg": cfg,
           "window": window, "pair_tail": pair_tail, "lead": lead}
    points = [(c_label, s) for s in s_grid]
    rows = _run_scan("phase", points, ctx, workers)
    n_failed = sum(1 for r in rows if str(r["verdict"]).startswith("failed"))
    summary = {"kind": "phase", "n_points": len(rows), "n_failed": n_failed}
    if gamma.derivative is not None:
        ts = np.linspace(-t_span - 1.0, t_span + 1.0, 4001)
        sup_slope = max(float(gamma.derivative(float(t))) for t in ts)
        tops = [r["bracket_hi"] for r in rows if math.isfinite(r["bracket_hi"])]
        summary["sup_slope"] = sup_slope
        summary["total_tracking"] = bool(tops) and len(tops) == len(rows) \
            and max(tops) <= -sup_slope
    return rows, summary


def scan_size(family: Callable[[float], tuple], d_grid, tol: float = 2e-3,
              cfg: Optional[IntegratorConfig] = None, workers: int = 1,
              lead: float = 25.0, pair_tail: float = 1e-6,
              c_label: float = 1.0):
    """Sweep a size parameter ``d`` through ``family(d) -> (field, transition)``.

    The summary records the first adjacent pair of decided grid points whose
    verdict flips from tracking to tipping.
    """
    cfg = _scan_cfg(cfg)
    d_grid = [float(d) for d in d_grid]
    t_span = max(family(d)[1].saturation_time for d in d_grid)
    window = (-(t_span + lead + 2.0), t_span + lead + 2.0)
    ctx = {"family": family, "tol": tol, "cfg": cfg, "window": window,
           "pair_tail": pair_tail, "lead": lead}
    points = [(c_label, d) for d in d_grid]
    rows = _run_scan("size", points, ctx, workers)
    n_failed = sum(1 for r in rows if str(r["verdict"]).startswith("failed"))
    summary = {"kind": "size", "n_points": len(rows), "n_failed": n_failed}
    decided = [(r["key"], r["verdict"]) for r in rows if r["verdict"] in (CASE_A, CASE_C)]
    flip = None
    for (d1, v1), (d2, v2) in zip(decided, decided[1:]):
        if v1 == CASE_A and v2 == CASE_C:
            flip = (d1, d2)
            break
    summary["flip_bracket"] = flip
    return rows, summary


def refine_size_flip(family: Callable[[float], tuple], d_lo: float, d_hi: float,
                     d_tol: float = 1e-2, cfg: Optional[IntegratorConfig] = None,
                     lead: float = 25.0, pair_tail: float = 1e-6,
                     pair_kwargs: Optional[dict] = None):
    """Narrow a tracking-to-tipping flip in the size parameter by bisection
    on the classification verdict at ``lambda = 0``.

    ``family(d_lo)`` must classify as tracking and ``family(d_hi)`` as
    tipping.  Band or failed midpoints tighten nothing and stop the
    refinement early, returning the narrowest decided bracket.
    """
    cfg = _scan_cfg(cfg)

    def verdict_of(d):
        f, gamma = family(d)
        try:
            v = classify(f, gamma, cfg=cfg, lead=lead, pair_tail=pair_tail,
                         pair_kwargs=pair_kwargs)
        except (IntegrationError, PairConvergenceError, ValueError):
            return None
        return v.case

    v_lo, v_hi = verdict_of(d_lo), verdict_of(d_hi)
    if v_lo != CASE_A or v_hi != CASE_C:
        raise BracketError("size bracket endpoints are (%s, %s), need "
                           "(tracking, tipping)" % (v_lo, v_hi),
                           verdict_lo=str(v_lo), verdict_hi=str(v_hi))
    lo, hi = float(d_lo), float(d_hi)
    while hi - lo > d_tol:
        mid = 0.5 * (lo + hi)
        v = verdict_of(mid)
        if v == CASE_A:
            lo = mid
        elif v == CASE_C:
            hi = mid
        else:
            break
    return lo, hi


def write_scan_csv(path, rows, kind: str):
    """Serialize scan rows with a stable byte layout: fixed header, 17
    significant digits, newline endings, no timestamps.  ``path`` may be
    None to only return the text."""
    key = CSV_KEYS[kind]
    lines = ["c,%s,lambda_star,bracket_lo,bracket_hi,verdict" % key]
    for r in rows:
        lines.append("%s,%s,%s,%s,%s,%s" % (
            format(float(r["c"]), ".17g"),
            format(float(r["key"]), ".17g"),
            format(float(r["lambda_star"]), ".17g"),
            format(float(r["bracket_lo"]), ".17g"),
            format(float(r["bracket_hi"]), ".17g"),
            r["verdict"],
        ))
    data = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(data)
    return data
