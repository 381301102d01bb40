"""Write-failure model and word-level metrics for spin-torque MRAM pulses.

All quantities are normalized: current i = I / I_c (critical switching
current) and duration t = T / T_c (characteristic relaxation time), so the
fabrication constants never appear in the numerics.  A write pulse (i, t)
switches a cell with failure probability

    p(i, t) = 1 - exp( -delta * pi^2 * (i - 1) / (4 * (i * e^{2(i-1)t} - 1)) )

which is well approximated for low p by the biconvex-friendly kernel

    p(i, t) ~= c * exp(-2 * (i - 1) * t),      c = delta * pi^2 / 4.

The approximate kernel is deliberately NOT clamped to [0, 1]: it is the
objective the optimizers minimize, and the closed-form optima rely on its
unclamped exponential form.  It systematically overestimates the exact
probability by roughly a factor i / (i - 1) at low p, which leaves the
location of the optimum unchanged.

A B-bit word is written with one pulse per bit, LSB first.  The word-level
metrics are total energy sum(i_b^2 t_b), latency max(t_b), and a mean squared
error that weights bit b by 4^b, reflecting the squared magnitude of the
value error a flipped bit causes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DeviceParams",
    "PulseAllocation",
    "Budget",
    "failure_prob_exact",
    "failure_prob_approx",
    "energy",
    "latency",
    "mse",
    "psnr",
    "bit_weights",
]


@dataclass(frozen=True)
class DeviceParams:
    """Normalized device parameters.

    Parameters
    ----------
    delta : float
        Thermal stability factor of the cell (dimensionless, > 0).
    epsilon : float
        Strictly positive offset keeping write currents above the critical
        current: every current satisfies i >= 1 + epsilon.  Must be in (0, 1).
    """

    delta: float = 60.0
    epsilon: float = 1e-3

    def __post_init__(self) -> None:
        if not (self.delta > 0 and np.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")

    @property
    def c(self) -> float:
        """Failure-probability prefactor delta * pi^2 / 4 (always recomputed)."""
        return self.delta * np.pi**2 / 4.0

    @property
    def current_floor(self) -> float:
        """Smallest admissible normalized current, 1 + epsilon."""
        return 1.0 + self.epsilon


@dataclass(frozen=True)
class Budget:
    """Normalized write-energy budget for one word (> 0)."""

    energy: float

    def __post_init__(self) -> None:
        if not (self.energy > 0 and np.isfinite(self.energy)):
            raise ValueError(f"energy budget must be positive and finite, got {self.energy}")


@dataclass(frozen=True)
class PulseAllocation:
    """Per-bit write pulses for a B-bit word.

    ``currents[b]`` and ``durations[b]`` define the pulse for bit b, with
    b = 0 the least significant bit.  Currents must be >= 1 and durations
    >= 0; solvers additionally keep currents at or above the device floor
    1 + epsilon.
    """

    currents: np.ndarray
    durations: np.ndarray

    def __post_init__(self) -> None:
        i = np.array(self.currents, dtype=float)
        t = np.array(self.durations, dtype=float)
        if i.ndim != 1 or t.ndim != 1 or i.shape != t.shape or i.size < 1:
            raise ValueError("currents and durations must be 1-D vectors of equal length >= 1")
        if not np.all(np.isfinite(i)) or not np.all(np.isfinite(t)):
            raise ValueError("pulse parameters must be finite")
        if np.any(i < 1.0):
            raise ValueError("normalized currents must be >= 1")
        if np.any(t < 0.0):
            raise ValueError("durations must be nonnegative")
        i.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "currents", i)
        object.__setattr__(self, "durations", t)

    @property
    def width(self) -> int:
        """Word width B."""
        return self.currents.size


def bit_weights(width: int) -> np.ndarray:
    """Squared-error weights 4^b for b = 0..width-1."""
    if width < 1:
        raise ValueError("width must be >= 1")
    return 4.0 ** np.arange(width)


def failure_prob_exact(params: DeviceParams, current, duration):
    """Exact switching-failure probability of a single pulse.

    Evaluates ``1 - exp(-c (i-1) / (i e^{2(i-1)t} - 1))`` with
    ``c = delta pi^2 / 4``.  Stable over the full float range: the
    denominator is computed as ``expm1`` of ``2(i-1)t + log i`` and switched
    to log space once the exponent is large.

    Parameters
    ----------
    current : array_like
        Normalized current(s), strictly greater than 1 (the expression is
        singular at i = 1).
    duration : array_like
        Normalized duration(s), >= 0.

    Returns
    -------
    ndarray or float
        Probability in [0, 1], broadcast over the inputs.
    """
    i = np.asarray(current, dtype=float)
    t = np.asarray(duration, dtype=float)
    if np.any(i <= 1.0):
        raise ValueError("exact failure probability requires current > 1")
    if np.any(t < 0.0):
        raise ValueError("duration must be nonnegative")
    z = 2.0 * (i - 1.0) * t + np.log(i)
    # log(e^z - 1), accurate both near z = 0 and for z beyond the exp range
    log_denom = z + np.log(-np.expm1(-z))
    y = np.exp(np.log(params.c) + np.log(i - 1.0) - log_denom)
    p = -np.expm1(-y)
    return p if p.ndim else float(p)


def failure_prob_approx(params: DeviceParams, current, duration):
    """Approximate failure probability c * exp(-2 (i-1) t), unclamped.

    This is the objective kernel used by the optimizers.  It may exceed 1
    when (i-1) t is small; callers that need a proper probability (e.g. the
    Monte Carlo simulator) clamp it themselves.
    """
    i = np.asarray(current, dtype=float)
    t = np.asarray(duration, dtype=float)
    p = params.c * np.exp(-2.0 * (i - 1.0) * t)
    return p if p.ndim else float(p)


def energy(alloc: PulseAllocation) -> float:
    """Total normalized write energy sum_b i_b^2 t_b."""
    return float(np.sum(alloc.currents**2 * alloc.durations))


def latency(alloc: PulseAllocation) -> float:
    """Normalized write latency max_b t_b."""
    return float(np.max(alloc.durations))


def mse(params: DeviceParams, alloc: PulseAllocation) -> float:
    """Significance-weighted mean squared error of a word write.

    Sums c * 4^b * exp(-2 (i_b - 1) t_b) over bits; uses the unclamped
    approximate kernel, so the value can exceed the all-bits-failed squared
    error for very weak pulses.
    """
    kernels = np.exp(-2.0 * (alloc.currents - 1.0) * alloc.durations)
    return float(params.c * np.sum(bit_weights(alloc.width) * kernels))


def psnr(params: DeviceParams, alloc: PulseAllocation, width: int | None = None) -> float:
    """Peak signal-to-noise ratio 10 log10((2^B - 1)^2 / MSE) in dB.

    Raises
    ------
    ValueError
        If the MSE vanishes (PSNR is unbounded).
    """
    if width is None:
        width = alloc.width
    m = mse(params, alloc)
    if m <= 0.0:
        raise ValueError("PSNR undefined for zero MSE")
    peak = 2.0**width - 1.0
    return float(10.0 * np.log10(peak**2 / m))
