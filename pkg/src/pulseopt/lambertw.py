"""Principal-branch Lambert W on the nonnegative reals.

W0 inverts x = w * e^w.  Only x >= 0 is supported: the current-update step
queries arguments of the form 2 * 4^b * t * e^{2t} / nu which are never
negative, and the W-1 branch is out of scope.

Two entry points are provided.  ``lambert_w0`` takes the argument directly
and iterates Halley's method from w0 = log(1 + x).  ``lambert_w0_ln`` takes
log(x) instead and solves w + log(w) = log(x) by Newton from the asymptotic
guess L - log(L) + log(L)/L; this is how callers evaluate W0 when x itself
would overflow (durations in the hundreds put e^{2t} far beyond float range).
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError

__all__ = ["lambert_w0", "lambert_w0_ln"]

_MAX_ITERS = 100
_RTOL = 1e-12
# above this, log1p(x) is close enough to the exp ceiling that Halley's
# intermediate e^w can overflow; route through the log-space solver
_DIRECT_LIMIT = 1e250


def lambert_w0(x):
    """W0(x) for x >= 0, scalar or array.

    Satisfies |w e^w - x| <= 1e-12 * max(x, 1) elementwise.

    Raises
    ------
    ValueError
        If any argument is negative.
    ConvergenceError
        If the residual tolerance is not met within the iteration cap
        (not expected for any finite nonnegative input).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise ValueError("lambert_w0 requires nonnegative arguments")
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)

    w = np.empty_like(x_arr)
    big = x_arr > _DIRECT_LIMIT
    if np.any(big):
        w[big] = lambert_w0_ln(np.log(x_arr[big]))
    small = ~big
    if np.any(small):
        w[small] = _halley(x_arr[small])

    resid = np.abs(w * np.exp(np.minimum(w, 700.0)) - x_arr)
    if np.any(resid > _RTOL * np.maximum(x_arr, 1.0)):
        raise ConvergenceError("lambert_w0 failed to reach residual tolerance")
    return float(w[0]) if scalar else w


def _halley(x: np.ndarray) -> np.ndarray:
    w = np.log1p(x)
    for _ in range(_MAX_ITERS):
        e = np.exp(w)
        f = w * e - x
        # Halley step for f(w) = w e^w - x
        denom = e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w = w - step
        if np.all(np.abs(f) <= 0.5 * _RTOL * np.maximum(x, 1.0)):
            break
    return np.maximum(w, 0.0)


def lambert_w0_ln(ln_x):
    """W0(e^{ln_x}) computed from the logarithm of the argument.

    For ln_x < 1 the argument is small enough to exponentiate and the direct
    solver is used.  Otherwise w >= 1 holds and Newton's method on
    g(w) = w + log(w) - ln_x converges from the asymptotic expansion
    w ~ L - log L + log L / L with L = ln_x.

    Satisfies |w + log(w) - ln_x| <= 1e-12 * max(|ln_x|, 1) on the log branch.
    """
    l_arr = np.asarray(ln_x, dtype=float)
    scalar = l_arr.ndim == 0
    l_arr = np.atleast_1d(l_arr)

    w = np.empty_like(l_arr)
    lo = l_arr < 1.0
    if np.any(lo):
        w[lo] = lambert_w0(np.exp(l_arr[lo]))
    hi = ~lo
    if np.any(hi):
        w[hi] = _newton_log(l_arr[hi])
        resid = np.abs(w[hi] + np.log(w[hi]) - l_arr[hi])
        if np.any(resid > _RTOL * np.maximum(np.abs(l_arr[hi]), 1.0)):
            raise ConvergenceError("lambert_w0_ln failed to reach residual tolerance")
    return float(w[0]) if scalar else w


def _newton_log(L: np.ndarray) -> np.ndarray:
    logL = np.log(L)
    w = L - logL + logL / L
    w = np.maximum(w, 1.0)
    for _ in range(_MAX_ITERS):
        g = w + np.log(w) - L
        # g'(w) = 1 + 1/w = (w + 1)/w
        w = w - g * w / (w + 1.0)
        w = np.maximum(w, 1.0)
        if np.all(np.abs(g) <= 0.5 * _RTOL * np.maximum(np.abs(L), 1.0)):
            break
    return w
