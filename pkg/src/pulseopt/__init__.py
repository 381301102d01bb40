"""pulseopt: MSE-optimal write-pulse allocation for multi-bit MRAM words.

Given a word width, a write-energy budget, and device parameters, the
library computes per-bit write currents and durations that minimize the
bit-significance-weighted mean squared error, using alternating closed-form
water-filling solves, and ships independent numerical oracles (grid search,
projected descent, Monte Carlo) that re-derive every analytic claim.
"""

from .acs import SolveReport, SolverConfig, one_step_fast_path, solve
from .analytic import (
    alltwos_durations,
    dual_closed_form,
    energy_threshold,
    mse_closed_forms,
    reduction_ratio,
    single_bit_optimum,
)
from .errors import ConvergenceError, EnergyThresholdError
from .lambertw import lambert_w0, lambert_w0_ln
from .model import (
    Budget,
    DeviceParams,
    PulseAllocation,
    bit_weights,
    energy,
    failure_prob_approx,
    failure_prob_exact,
    latency,
    mse,
    psnr,
)
from .oracle import (
    McEstimate,
    convex_solve_currents,
    convex_solve_durations,
    grid_search_single_bit,
    monte_carlo_mse,
)
from .steps import DualSolve, solve_currents, solve_durations

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "ConvergenceError",
    "DeviceParams",
    "DualSolve",
    "EnergyThresholdError",
    "McEstimate",
    "PulseAllocation",
    "SolveReport",
    "SolverConfig",
    "alltwos_durations",
    "bit_weights",
    "convex_solve_currents",
    "convex_solve_durations",
    "dual_closed_form",
    "energy",
    "energy_threshold",
    "failure_prob_approx",
    "failure_prob_exact",
    "grid_search_single_bit",
    "lambert_w0",
    "lambert_w0_ln",
    "latency",
    "mse",
    "mse_closed_forms",
    "monte_carlo_mse",
    "one_step_fast_path",
    "psnr",
    "reduction_ratio",
    "single_bit_optimum",
    "solve",
    "solve_currents",
    "solve_durations",
]
