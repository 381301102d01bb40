"""Outer alternating loop over the two convex blocks.

The word-level problem (minimize the weighted kernel MSE over currents and
durations jointly, under one energy budget) is biconvex, not convex, so it is
solved by alternate convex search: fix currents and solve for durations, fix
those durations and solve for currents, repeat.  Each half-step is an exact
convex solve, so the MSE trace is nonincreasing and converges; the limit
depends on the starting currents.

The recorded iterate 0 pairs the starting currents with the equal-energy
baseline durations t_b = E / (B i_b^2).  For the (2,...,2) start that is the
uniform allocation, so ``mse_trace[0] / mse_trace[-1]`` is the realized
reduction factor of the run.

Starting at (2,...,2) is special: when the first duration solve keeps every
bit positive, that pair already satisfies the KKT conditions of the current
block, the loop is stationary from iteration 1, and ``one_step_fast_path``
returns it without ever solving for currents.  Starting at the floor
(1+eps,...,1+eps) is also special, in a degenerate way: the tight duration
solve leaves the current block a single feasible point, so the floor start is
itself a fixed point and never escapes.  It is retained because it is the
natural feasible stand-in for an all-ones start.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analytic import energy_threshold, mse_closed_forms
from .model import Budget, DeviceParams, PulseAllocation, mse
from .steps import solve_currents, solve_durations

__all__ = ["SolverConfig", "SolveReport", "solve", "one_step_fast_path"]

START_ALL_TWOS = "all-twos"
START_ALL_ONES = "all-ones"


@dataclass(frozen=True)
class SolverConfig:
    """Starting point, stopping rule, and tolerances for the outer loop.

    Stopping criteria are OR-combined; the first one that fires ends the
    loop, and ``max_outer_iters`` always applies as a hard cap.

    Attributes
    ----------
    start : str or sequence of float
        ``"all-twos"``, ``"all-ones"`` (floor currents 1 + epsilon), or an
        explicit vector of starting currents, each >= 1 + epsilon.
    mse_tol : float, optional
        Stop when the MSE decrease over one outer iteration falls to this
        absolute value or below.  Defaults to 1e-12 times the initial MSE.
    iterate_tol : float, optional
        Stop when no coordinate of (currents, durations) moved by more than
        this.  Disabled when None.
    stop_iters : int, optional
        Stop after exactly this many outer iterations.  Disabled when None.
    energy_rtol : float
        Dual-bisection energy tolerance, relative to the budget.
    max_outer_iters : int
        Hard iteration cap.
    """

    start: str | Sequence[float] = START_ALL_TWOS
    mse_tol: float | None = None
    iterate_tol: float | None = None
    stop_iters: int | None = None
    energy_rtol: float = 1e-9
    max_outer_iters: int = 100

    def __post_init__(self) -> None:
        for name in ("mse_tol", "iterate_tol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive when given")
        if self.stop_iters is not None and self.stop_iters < 1:
            raise ValueError("stop_iters must be >= 1 when given")
        if not self.energy_rtol > 0:
            raise ValueError("energy_rtol must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be >= 1")


@dataclass
class SolveReport:
    """Full record of one alternating solve.

    ``iterates[k]`` is the (currents, durations) pair after outer iteration
    k, with entry 0 the starting currents paired with the equal-energy
    baseline durations.  ``mse_trace``, ``energy_trace`` align with
    ``iterates``; ``duals[k-1]`` holds the (nu, nu') pair of iteration k,
    nu' being None on the fast path where the current solve never ran.

    ``stalled_above_closed_form`` reports (without erroring) that the run
    ended at an MSE above the (2,...,2) closed-form value even though the
    budget was high enough for that value to be attainable, i.e. the search
    settled in a worse basin than the recommended start reaches.
    """

    iterates: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    mse_trace: list[float] = field(default_factory=list)
    energy_trace: list[float] = field(default_factory=list)
    duals: list[tuple[float, float | None]] = field(default_factory=list)
    termination: str = ""
    fast_path: bool = False
    stalled_above_closed_form: bool = False

    @property
    def iterations(self) -> int:
        """Outer iterations performed (excludes the baseline entry)."""
        return len(self.iterates) - 1

    @property
    def allocation(self) -> PulseAllocation:
        """Final per-bit pulses."""
        i, t = self.iterates[-1]
        return PulseAllocation(currents=i, durations=t)

    @property
    def final_mse(self) -> float:
        return self.mse_trace[-1]


def starting_currents(params: DeviceParams, bits: int, start) -> np.ndarray:
    """Resolve a start spec into a validated vector of currents."""
    if isinstance(start, str):
        if start == START_ALL_TWOS:
            return np.full(bits, 2.0)
        if start == START_ALL_ONES:
            return np.full(bits, params.current_floor)
        raise ValueError(f"unknown start {start!r}")
    i0 = np.asarray(start, dtype=float)
    if i0.ndim != 1 or i0.size != bits:
        raise ValueError(f"custom start must be a length-{bits} vector")
    if np.any(i0 < params.current_floor):
        raise ValueError("custom start currents must all be >= 1 + epsilon")
    return i0.copy()


def _baseline(params: DeviceParams, i0: np.ndarray, budget: Budget) -> np.ndarray:
    # equal energy per bit: i_b^2 t_b = E / B
    return budget.energy / (i0.size * i0**2)


def _record(report: SolveReport, params: DeviceParams, i: np.ndarray, t: np.ndarray) -> None:
    alloc = PulseAllocation(currents=i, durations=t)
    report.iterates.append((alloc.currents, alloc.durations))
    report.mse_trace.append(mse(params, alloc))
    report.energy_trace.append(float(np.sum(i**2 * t)))


def solve(
    params: DeviceParams,
    bits: int,
    budget: Budget,
    config: SolverConfig | None = None,
) -> SolveReport:
    """Run the alternating solve and return its full trace.

    Every recorded iterate is feasible (currents at or above the floor,
    durations nonnegative, energy within tolerance of the budget) and the
    MSE trace is nonincreasing up to solver tolerance.  ``fast_path`` is set
    when the run started at (2,...,2) and the first duration solve kept all
    bits positive, the condition under which iteration 1 is already a fixed
    point; the loop still verifies that mechanically rather than assuming it.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if config is None:
        config = SolverConfig()
    tol = config.energy_rtol * budget.energy

    i = starting_currents(params, bits, config.start)
    alltwos_start = isinstance(config.start, str) and config.start == START_ALL_TWOS
    report = SolveReport()
    _record(report, params, i, _baseline(params, i, budget))

    mse_tol = config.mse_tol
    if mse_tol is None:
        mse_tol = 1e-12 * report.mse_trace[0]

    for k in range(1, config.max_outer_iters + 1):
        i_prev, t_prev = report.iterates[-1]
        t, dual_t = solve_durations(params, i, budget, tol)
        if k == 1 and alltwos_start and np.all(t > 0.0):
            report.fast_path = True
        i, dual_i = solve_currents(params, t, budget, tol)
        _record(report, params, i, t)
        report.duals.append((dual_t.value, dual_i.value))

        mse_drop = report.mse_trace[-2] - report.mse_trace[-1]
        if abs(mse_drop) <= mse_tol:
            report.termination = "mse_delta"
            break
        if config.iterate_tol is not None:
            moved = max(
                float(np.max(np.abs(i - i_prev))), float(np.max(np.abs(t - t_prev)))
            )
            if moved <= config.iterate_tol:
                report.termination = "iterate_delta"
                break
        if config.stop_iters is not None and k >= config.stop_iters:
            report.termination = "stop_iters"
            break
    else:
        report.termination = "max_iters"

    _flag_stall(report, params, bits, budget)
    return report


def _flag_stall(report: SolveReport, params: DeviceParams, bits: int, budget: Budget) -> None:
    if budget.energy <= energy_threshold(bits):
        return
    reference, _, _ = mse_closed_forms(params, bits, budget)
    if report.final_mse > reference * (1.0 + 1e-9):
        report.stalled_above_closed_form = True


def one_step_fast_path(
    params: DeviceParams,
    bits: int,
    budget: Budget,
    config: SolverConfig | None = None,
) -> SolveReport:
    """Single duration solve from the (2,...,2) start, when it suffices.

    Runs one duration solve; if every bit keeps positive duration the pair
    (starting currents, solved durations) is returned immediately as the
    converged answer.  Otherwise falls back to the general loop (whose
    clipped bits change the fixed-point structure).

    Raises
    ------
    ValueError
        If the configured start is not "all-twos".
    """
    if config is None:
        config = SolverConfig()
    if not (isinstance(config.start, str) and config.start == START_ALL_TWOS):
        raise ValueError('one_step_fast_path requires the "all-twos" start')
    if bits < 1:
        raise ValueError("bits must be >= 1")

    i0 = starting_currents(params, bits, config.start)
    tol = config.energy_rtol * budget.energy
    t1, dual_t = solve_durations(params, i0, budget, tol)
    if not np.all(t1 > 0.0):
        return solve(params, bits, budget, config)

    report = SolveReport(fast_path=True, termination="fast_path")
    _record(report, params, i0, _baseline(params, i0, budget))
    _record(report, params, i0, t1)
    report.duals.append((dual_t.value, None))
    return report
