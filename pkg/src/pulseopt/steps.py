"""Closed-form inner solves of the alternating optimization, one per block.

Both subproblems minimize the weighted kernel sum c * sum_b 4^b e^{-2(i_b-1)t_b}
subject to the energy budget sum_b i_b^2 t_b <= E and are solved exactly from
their KKT conditions.  Stationarity gives a per-bit formula parameterized by
the single dual variable of the energy constraint, and complementary slackness
makes the constraint tight whenever any duration is positive, so the dual is
pinned down by a one-dimensional root find.

Durations for fixed currents (water-filling over bits):

    t_b = 0                                    if nu >= theta_b,
    t_b = log(theta_b / nu) / (2 (i_b - 1))    otherwise,

with per-bit threshold theta_b = 2 * 4^b * (i_b - 1) / i_b^2.  More
significant bits have higher thresholds and fill first.

Currents for fixed durations:

    i_b = 1 + eps                                          if nu' >= phi_b,
    i_b = W0( 2 * 4^b * t_b * e^{2 t_b} / nu' ) / (2 t_b)  otherwise,

with phi_b = 4^b e^{-2 t_b eps} / (1 + eps).  Bits with t_b = 0 influence
neither the objective nor the energy; they are excluded from the solve and
pinned to the floor 1 + eps (reported as inactive by callers).

The achieved energy is continuous and strictly decreasing in the dual
wherever any bit is active, so the root is searched on a bracket
[smallest threshold * 1e-16, largest threshold] (expanded geometrically if
the root lies below it), in log-dual space.  Within the bracket the search
takes Newton steps, whose slope comes free from the per-bit formulas, and
falls back to the bisection midpoint whenever a step leaves the bracket;
the bracket guarantees convergence, Newton makes it take ~10 evaluations
instead of ~55, which the outer loop's random-start workloads need.  The
search runs the residual down to ~1e-12 of the budget, far below the default
1e-9 allowance, so repeated solves reproduce iterates to near machine
precision and the outer loop's fixed-point checks are meaningful.  The
Lambert W argument is assembled in log space because e^{2 t_b} overflows for
durations above ~354.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError
from .lambertw import lambert_w0_ln
from .model import Budget, DeviceParams

__all__ = ["DualSolve", "solve_durations", "solve_currents"]

_SEARCH_CAP = 200
_LN4 = np.log(4.0)
# additive expansion step for an unbracketed root, in log-dual units
_EXPAND = 40.0


@dataclass(frozen=True)
class DualSolve:
    """Outcome of one dual root find.

    Attributes
    ----------
    value : float
        The dual variable of the energy constraint (nu or nu').
    iterations : int
        Energy evaluations spent locating the dual.
    residual : float
        |achieved energy - budget| at the returned dual.
    """

    value: float
    iterations: int
    residual: float


def _default_tol(budget: Budget) -> float:
    return 1e-9 * budget.energy


def _solve_dual(
    energy_and_slope: Callable[[float], tuple[float, float]],
    u_lo: float,
    u_hi: float,
    target: float,
    tol: float,
) -> tuple[float, int, float]:
    """Solve achieved_energy(u) = target for the log-dual u.

    ``energy_and_slope`` returns (E(u), dE/du) with E continuous and
    nonincreasing and E(u_hi) <= target.  Maintains a bracket throughout;
    Newton steps that leave it are replaced by the midpoint.
    """
    iters = 0
    expansions = 0
    while True:
        e_lo, _ = energy_and_slope(u_lo)
        iters += 1
        if e_lo >= target:
            break
        u_lo -= _EXPAND
        expansions += 1
        if expansions > 200:
            raise ConvergenceError("dual search could not bracket the energy target")

    stop = max(1e-12 * target, 5e-324)
    u = 0.5 * (u_lo + u_hi)
    best_u, best_resid = u_hi, abs(energy_and_slope(u_hi)[0] - target)
    while iters < _SEARCH_CAP:
        e, de = energy_and_slope(u)
        iters += 1
        resid = abs(e - target)
        if resid < best_resid:
            best_u, best_resid = u, resid
        if resid <= stop:
            return u, iters, resid
        if e > target:
            u_lo = u
        else:
            u_hi = u
        if (u_hi - u_lo) <= 4e-16 * max(1.0, abs(u_lo), abs(u_hi)):
            break
        u_next = u + (target - e) / de if de < 0.0 else u_lo
        if not (u_lo < u_next < u_hi):
            u_next = 0.5 * (u_lo + u_hi)
        u = u_next

    if best_resid > tol:
        raise ConvergenceError(
            f"dual search residual {best_resid:.3e} exceeds tolerance {tol:.3e}"
        )
    return best_u, iters, best_resid


def solve_durations(
    params: DeviceParams,
    currents,
    budget: Budget,
    tol: float | None = None,
) -> tuple[np.ndarray, DualSolve]:
    """Optimal durations for fixed currents under the energy budget.

    Parameters
    ----------
    currents : array_like
        Per-bit currents, all >= 1 + epsilon.
    tol : float, optional
        Allowed |achieved energy - budget|; defaults to 1e-9 * budget.

    Returns
    -------
    (durations, DualSolve)
        Durations with sum(i^2 t) equal to the budget within ``tol``.
    """
    i = np.asarray(currents, dtype=float)
    if i.ndim != 1 or i.size < 1:
        raise ValueError("currents must be a 1-D vector")
    if np.any(i < params.current_floor):
        raise ValueError("all currents must be >= 1 + epsilon")
    if tol is None:
        tol = _default_tol(budget)
    target = budget.energy

    b = np.arange(i.size)
    ln_theta = np.log(2.0) + b * _LN4 + np.log(i - 1.0) - 2.0 * np.log(i)
    gain = i**2 / (2.0 * (i - 1.0))  # energy per unit of log-level drop

    def energy_and_slope(u: float) -> tuple[float, float]:
        lift = ln_theta - u
        wet = lift > 0.0
        return float(np.sum(gain[wet] * lift[wet])), -float(np.sum(gain[wet]))

    u_hi = float(np.max(ln_theta))
    u_lo = float(np.min(ln_theta)) - 16.0 * np.log(10.0)
    u, iters, resid = _solve_dual(energy_and_slope, u_lo, u_hi, target, tol)

    lift = ln_theta - u
    t = np.where(lift > 0.0, lift / (2.0 * (i - 1.0)), 0.0)
    return t, DualSolve(value=float(np.exp(u)), iterations=iters, residual=resid)


def solve_currents(
    params: DeviceParams,
    durations,
    budget: Budget,
    tol: float | None = None,
) -> tuple[np.ndarray, DualSolve]:
    """Optimal currents for fixed durations under the energy budget.

    Bits with zero duration are pinned to the floor 1 + epsilon and excluded
    from the energy constraint.  If every duration is zero the constraint is
    vacuous and the all-floor vector is returned with a zero-residual dual.

    Raises
    ------
    ValueError
        If even floor currents exceed the budget ((1+eps)^2 * sum(t) > E),
        i.e. the subproblem is infeasible.
    """
    t = np.asarray(durations, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("durations must be a 1-D vector")
    if np.any(t < 0.0):
        raise ValueError("durations must be nonnegative")
    if tol is None:
        tol = _default_tol(budget)
    target = budget.energy
    floor = params.current_floor

    active = t > 0.0
    if not np.any(active):
        i = np.full(t.size, floor)
        return i, DualSolve(value=0.0, iterations=0, residual=0.0)

    t_act = t[active]
    b_act = np.arange(t.size)[active].astype(float)
    ln_phi = b_act * _LN4 - np.log(floor) - 2.0 * t_act * params.epsilon
    e_floor = floor**2 * float(np.sum(t_act))
    if e_floor > target * (1.0 + 1e-12):
        raise ValueError(
            f"budget {target:g} below the floor-current energy {e_floor:g}; "
            "no feasible currents exist for these durations"
        )
    if e_floor >= target * (1.0 - 1e-12):
        # budget equals the floor energy: the feasible set is the single
        # point with every active bit at the floor
        i = np.full(t.size, floor)
        return i, DualSolve(
            value=float(np.exp(np.max(ln_phi))),
            iterations=0,
            residual=abs(e_floor - target),
        )
    ln_arg_base = np.log(2.0) + b_act * _LN4 + np.log(t_act) + 2.0 * t_act
    e_floor_per_bit = floor**2 * t_act

    def currents_at(u: float) -> np.ndarray:
        i_act = np.full(t_act.size, floor)
        free = u < ln_phi
        if np.any(free):
            w = lambert_w0_ln(ln_arg_base[free] - u)
            i_act[free] = np.maximum(w / (2.0 * t_act[free]), floor)
        return i_act

    def energy_and_slope(u: float) -> tuple[float, float]:
        free = u < ln_phi
        if not np.any(free):
            return float(np.sum(e_floor_per_bit)), 0.0
        w = lambert_w0_ln(ln_arg_base[free] - u)
        # i = w/(2t) so per-bit energy is w^2/(4t); dw/du = -w/(1+w)
        e = float(np.sum(w * w / (4.0 * t_act[free]))) + float(
            np.sum(e_floor_per_bit[~free])
        )
        slope = -float(np.sum(w * w / (2.0 * t_act[free] * (1.0 + w))))
        return e, slope

    u_hi = float(np.max(ln_phi))
    u_lo = float(np.min(ln_phi)) - 16.0 * np.log(10.0)
    u, iters, resid = _solve_dual(energy_and_slope, u_lo, u_hi, target, tol)

    i = np.full(t.size, floor)
    i[active] = currents_at(u)
    return i, DualSolve(value=float(np.exp(u)), iterations=iters, residual=resid)
