"""Closed-form optima and the MSE reduction ratio.

These serve double duty as fast paths and as independent fixtures for the
iterative solvers.  Everything here assumes the starting currents (2,...,2),
for which no closed forms exist for other starts.

For a single bit the failure probability c e^{-2(i-1)t} on the budget curve
i^2 t = E is minimized at i = 2, t = E/4, giving p = c e^{-E/2}.

For a B-bit word started at currents (2,...,2), the duration water-filling
has uniform thresholds theta_b = 4^b / 2 and, whenever the budget exceeds
2B(B-1) log 2 (so every bit stays wet), the per-bit durations are

    t_b = E / (4B) + (b - (B-1)/2) * log 2,

the dual is nu = 2^{B-2} e^{-E/(2B)}, and the word MSE drops from the
uniform-allocation value c (4^B - 1)/3 * e^{-E/(2B)} to
c (B/2) 2^B e^{-E/(2B)}.  Their ratio

    gamma = (3B/2) * 2^B / (4^B - 1)  ~=  (3B/2) * 2^{-B}

is independent of the budget and decays exponentially with word width.
"""

from __future__ import annotations

import numpy as np

from .errors import EnergyThresholdError
from .model import Budget, DeviceParams

__all__ = [
    "single_bit_optimum",
    "energy_threshold",
    "alltwos_durations",
    "mse_closed_forms",
    "reduction_ratio",
    "dual_closed_form",
]

_LN2 = np.log(2.0)


def single_bit_optimum(params: DeviceParams, budget: Budget) -> tuple[float, float, float]:
    """Minimizer (i*, t*, p*) of the single-bit failure probability.

    Returns i* = 2, t* = E/4 and the achieved probability c * exp(-E/2).
    """
    e = budget.energy
    return 2.0, e / 4.0, float(params.c * np.exp(-e / 2.0))


def energy_threshold(bits: int) -> float:
    """Budget 2B(B-1) log 2 above which all bits get positive duration
    when starting from currents (2,...,2)."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    return 2.0 * bits * (bits - 1) * _LN2


def alltwos_durations(bits: int, budget: Budget) -> np.ndarray | None:
    """Water-filled durations for uniform currents (2,...,2), if all positive.

    Returns the vector E/(4B) + (b - (B-1)/2) log 2 when the budget strictly
    exceeds ``energy_threshold(bits)``; returns None otherwise, in which case
    the caller must fall back to the general water-filling solve (some bits
    would be clipped to zero).
    """
    e = budget.energy
    if e <= energy_threshold(bits):
        return None
    b = np.arange(bits)
    return e / (4.0 * bits) + (b - (bits - 1) / 2.0) * _LN2


def mse_closed_forms(
    params: DeviceParams, bits: int, budget: Budget
) -> tuple[float, float, float]:
    """(mse_optimized, mse_uniform, gamma) at and above the energy threshold.

    Raises
    ------
    EnergyThresholdError
        If the budget is strictly below 2B(B-1) log 2, where the optimized
        closed form no longer matches the clipped water-filling solution.
    """
    e = budget.energy
    _require_threshold(bits, e)
    decay = np.exp(-e / (2.0 * bits))
    mse_opt = params.c * (bits / 2.0) * 2.0**bits * decay
    mse_unif = params.c * (4.0**bits - 1.0) / 3.0 * decay
    gamma, _ = reduction_ratio(bits)
    return float(mse_opt), float(mse_unif), gamma


def reduction_ratio(bits: int) -> tuple[float, float]:
    """Exact and asymptotic MSE reduction ratio (gamma_exact, gamma_approx).

    gamma_exact = (3B/2) 2^B / (4^B - 1); gamma_approx = (3B/2) 2^{-B}.
    The exact form is used everywhere; the asymptotic one is reported for
    width sweeps, the two converging as B grows.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    exact = (3.0 * bits / 2.0) * 2.0**bits / (4.0**bits - 1.0)
    approx = (3.0 * bits / 2.0) * 2.0**-bits
    return float(exact), float(approx)


def dual_closed_form(bits: int, budget: Budget) -> float:
    """Water-filling dual nu = 2^{B-2} e^{-E/(2B)} for the (2,...,2) start.

    Valid down to the threshold budget (where it equals exactly 1/2);
    raises EnergyThresholdError strictly below it.
    """
    e = budget.energy
    _require_threshold(bits, e)
    return float(2.0 ** (bits - 2) * np.exp(-e / (2.0 * bits)))


def _require_threshold(bits: int, e: float) -> None:
    thr = energy_threshold(bits)
    if e < thr:
        raise EnergyThresholdError(
            f"budget {e:g} is below the closed-form threshold {thr:g} for B={bits}"
        )
