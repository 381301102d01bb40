"""Independent verification engines for the closed-form solvers.

Nothing here reuses the KKT formulas or the dual bisection: the single-bit
optimum is rederived by brute-force search along the budget curve, the two
inner convex problems are re-solved by projected gradient descent in
energy-share coordinates, and the word MSE is re-estimated by Monte Carlo
simulation of actual bit flips.  Tests and the ``verify`` command compare
these against the analytic routes.

The projected-descent solvers substitute s_b = i_b^2 t_b (the energy share of
bit b), which turns the budget into a plain capped simplex and keeps the
objective curvature within a small factor across bits, so vanilla descent
with backtracking converges quickly.  The substitution changes coordinates
only; the method remains a generic first-order solve of the same convex
subproblems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .model import Budget, DeviceParams, PulseAllocation, bit_weights, failure_prob_approx

__all__ = [
    "McEstimate",
    "grid_search_single_bit",
    "convex_solve_durations",
    "convex_solve_currents",
    "monte_carlo_mse",
]

_MC_CHUNK = 1_000_000  # fixed so results depend only on (seed, trials)


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo MSE estimate with a 95% normal-approximation interval."""

    mean: float
    half_width: float
    trials: int
    seed: int

    def contains(self, value: float) -> bool:
        return abs(value - self.mean) <= self.half_width


def grid_search_single_bit(
    params: DeviceParams,
    budget: Budget,
    grid_density: int,
    i_max: float = 6.0,
) -> tuple[float, float, float]:
    """Brute-force minimizer of the failure probability along i^2 t = E.

    Samples ``grid_density`` currents uniformly on [1 + epsilon, i_max],
    assigns each the budget-saturating duration, and returns the grid point
    with the lowest approximate failure probability.
    """
    if grid_density < 10:
        raise ValueError("grid_density must be >= 10")
    i = np.linspace(params.current_floor, i_max, grid_density)
    t = budget.energy / i**2
    p = failure_prob_approx(params, i, t)
    k = int(np.argmin(p))
    return float(i[k]), float(t[k]), float(p[k])


def _project_capped_simplex(v: np.ndarray, cap: float) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum(x) <= cap}."""
    if cap <= 0.0:
        return np.zeros_like(v)
    w = np.maximum(v, 0.0)
    if w.sum() <= cap:
        return w
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - cap
    j = np.arange(1, v.size + 1)
    rho = int(np.max(np.nonzero(u - css / j > 0)[0])) + 1
    tau = css[rho - 1] / rho
    return np.maximum(v - tau, 0.0)


def _projected_descent(value_grad, x0, cap, tol, max_iters):
    """Minimize a smooth convex function over {x >= 0, sum(x) <= cap}.

    Backtracking proximal-gradient with the standard sufficient-decrease
    test; stops once the per-iteration objective change stays below
    tol * max(1, |f|) for three consecutive accepted steps.
    """
    x = _project_capped_simplex(np.asarray(x0, dtype=float), cap)
    f, g = value_grad(x)
    step = max(1e-9, (cap / max(x.size, 1)) / (np.max(np.abs(g)) + 1e-300))
    flat = 0
    for _ in range(max_iters):
        while True:
            x_new = _project_capped_simplex(x - step * g, cap)
            d = x_new - x
            if not np.any(d):
                return x  # projected-stationary point
            f_new, g_new = value_grad(x_new)
            if f_new <= f + float(g @ d) + float(d @ d) / (2.0 * step):
                break
            step *= 0.5
            if step < 1e-18:
                return x
        if f - f_new <= tol * max(1.0, abs(f_new)):
            flat += 1
            if flat >= 3:
                return x_new
        else:
            flat = 0
        x, f, g = x_new, f_new, g_new
        step *= 1.3
    raise ConvergenceError("projected descent exhausted its iteration cap")


def convex_solve_durations(
    params: DeviceParams,
    currents,
    budget: Budget,
    tol: float,
    max_iters: int = 20000,
) -> np.ndarray:
    """Durations for fixed currents by projected descent (no KKT formulas).

    Minimizes c * sum w_b exp(-kappa_b s_b) over energy shares s on the
    capped simplex, kappa_b = 2 (i_b - 1) / i_b^2, then maps back to
    durations t = s / i^2.
    """
    i = np.asarray(currents, dtype=float)
    if np.any(i < params.current_floor):
        raise ValueError("all currents must be >= 1 + epsilon")
    w = params.c * bit_weights(i.size)
    kappa = 2.0 * (i - 1.0) / i**2
    cap = budget.energy

    def value_grad(s):
        terms = w * np.exp(-kappa * s)
        return float(terms.sum()), -kappa * terms

    s0 = np.full(i.size, cap / i.size)
    s = _projected_descent(value_grad, s0, cap, tol, max_iters)
    return s / i**2


def convex_solve_currents(
    params: DeviceParams,
    durations,
    budget: Budget,
    tol: float,
    max_iters: int = 20000,
) -> np.ndarray:
    """Currents for fixed durations by projected descent (no Lambert W).

    Bits with zero duration are returned at the floor 1 + epsilon.  Active
    bits are optimized over energy shares e_b >= t_b (1+eps)^2 with
    sum(e) <= E; objective terms are c w_b exp(2 t_b - 2 sqrt(t_b e_b)),
    evaluated in exponent space since e^{2 t_b} alone can overflow while the
    combined exponent never exceeds log(c w_b) - 2 t_b eps.
    """
    t = np.asarray(durations, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("durations must be nonnegative")
    floor = params.current_floor
    out = np.full(t.size, floor)
    active = t > 0.0
    if not np.any(active):
        return out

    t_a = t[active]
    ln_w = np.log(params.c * bit_weights(t.size)[active])
    e_min = floor**2 * t_a
    slack = budget.energy - float(e_min.sum())
    if slack < -1e-12 * budget.energy:
        raise ValueError("budget below the floor-current energy; infeasible")
    slack = max(slack, 0.0)

    def value_grad(x):
        e = e_min + x
        root = np.sqrt(t_a * e)
        expo = ln_w + 2.0 * t_a - 2.0 * root
        terms = np.exp(expo)
        grad = -np.exp(expo + 0.5 * (np.log(t_a) - np.log(e)))
        return float(terms.sum()), grad

    x0 = np.full(t_a.size, slack / t_a.size)
    x = _projected_descent(value_grad, x0, slack, tol, max_iters)
    out[active] = np.maximum(np.sqrt((e_min + x) / t_a), floor)
    return out


def monte_carlo_mse(
    params: DeviceParams,
    alloc: PulseAllocation,
    trials: int,
    seed: int,
) -> McEstimate:
    """Empirical word MSE under independent per-bit flips.

    Each trial flips bit b with probability min(1, c e^{-2(i_b-1)t_b}) and
    scores 4^b per flipped bit, matching the additive per-bit definition of
    the word MSE (no cross terms).  The clamp to [0, 1] applies only here,
    where a proper probability is required.  Results are deterministic given
    (seed, trials).

    The half-width is the normal-approximation 95% interval built from the
    exact sampling variance sum_b 16^b p_b (1 - p_b) / trials, which the
    simulator knows because it draws from those very probabilities.  A
    sample-variance interval would be badly anticonservative here: the most
    significant bits flip so rarely that typical runs observe none of them,
    underestimate the spread, and miss far more than 5% of the time.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = np.minimum(failure_prob_approx(params, alloc.currents, alloc.durations), 1.0)
    w = bit_weights(alloc.width)
    rng = np.random.default_rng(seed)

    total = 0.0
    left = trials
    while left > 0:
        n = min(left, _MC_CHUNK)
        total += float(((rng.random((n, alloc.width)) < p) @ w).sum())
        left -= n

    mean = total / trials
    var_mean = float(np.sum(w**2 * p * (1.0 - p))) / trials
    half = 1.96 * float(np.sqrt(var_mean))
    return McEstimate(mean=mean, half_width=half, trials=trials, seed=seed)
