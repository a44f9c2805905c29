"""Independent references the test suite checks the package against.

Everything here is derived without the package's own integrator: closed
forms for the two autonomous quadratic fields, and scipy's DOP853 at
tolerances two orders tighter than anything under test.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp


def tanh_flow(t, s, x0):
    """Exact flow of x' = 1 - x**2 through (s, x0).

    x(t) = (x0 + th) / (1 + x0*th) with th = tanh(t - s), valid on the
    maximal interval; raises OverflowError past the blow-up time.
    """
    th = math.tanh(t - s)
    den = 1.0 + x0 * th
    if den <= 0.0:
        raise OverflowError("past blow-up time")
    return (x0 + th) / den


def tanh_blow_up_time(s, x0):
    """Forward blow-up time of x' = 1 - x**2 from x0 < -1."""
    if x0 >= -1.0:
        raise ValueError("forward blow-up needs x0 < -1")
    return s + math.atanh(-1.0 / x0)


def riccati_flow(t, s, x0):
    """Exact flow of x' = -x**2: x(t) = x0 / (1 + x0*(t - s))."""
    den = 1.0 + x0 * (t - s)
    if den <= 0.0:
        raise OverflowError("past blow-up time")
    return x0 / den


def transfer_time_tanh(x1, x2):
    """Time for x' = 1 - x**2 to move from level x1 to level x2."""
    return math.atanh(x2) - math.atanh(x1)


def scipy_flow(field, t, s, x0, rtol=1e-11, atol=1e-13):
    """Reference flow value via scipy DOP853 (handles t < s natively)."""
    sol = solve_ivp(lambda tt, y: [field.rhs(float(tt), float(y[0]))],
                    (s, t), [x0], method="DOP853", rtol=rtol, atol=atol,
                    dense_output=False)
    if not sol.success:
        raise RuntimeError("scipy reference failed: %s" % sol.message)
    return float(sol.y[0, -1])


def scipy_samples(field, span, s, x0, times, rtol=1e-11, atol=1e-13):
    """Reference solution sampled at ``times`` within ``span``."""
    lo, hi = span
    out = np.empty(len(times))
    fwd = [(i, tt) for i, tt in enumerate(times) if tt >= s]
    bwd = [(i, tt) for i, tt in enumerate(times) if tt < s]
    for chunk, edge in ((fwd, hi), (bwd, lo)):
        if not chunk:
            continue
        t_eval = [tt for _, tt in chunk]
        sol = solve_ivp(lambda tt, y: [field.rhs(float(tt), float(y[0]))],
                        (s, edge), [x0], method="DOP853", rtol=rtol,
                        atol=atol, t_eval=sorted(t_eval, reverse=edge < s))
        if not sol.success:
            raise RuntimeError("scipy reference failed: %s" % sol.message)
        got = dict(zip(sol.t, sol.y[0]))
        for i, tt in chunk:
            out[i] = got[tt]
    return out
