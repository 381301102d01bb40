#!/usr/bin/env python3
"""Allocating one energy budget across the bits of a word.

An 8-bit word written with uniform pulses wastes fidelity: a flipped MSB
costs 4^7 times the squared error of a flipped LSB, so the MSB deserves a
longer pulse.  The alternating solver water-fills durations (and, when
needed, currents) under the single budget; starting from currents (2,...,2)
it converges after one duration solve.
"""

import numpy as np

from pulseopt import (
    Budget,
    DeviceParams,
    PulseAllocation,
    energy,
    latency,
    mse,
    one_step_fast_path,
    psnr,
)

params = DeviceParams()
bits, e = 8, 300.0
budget = Budget(e)

report = one_step_fast_path(params, bits, budget)
alloc = report.allocation
uniform = PulseAllocation(np.full(bits, 2.0), np.full(bits, e / (4 * bits)))

print(f"B = {bits}, energy budget E = {e:g}, fast path taken: {report.fast_path}\n")
print("bit | current | duration | energy share | kernel p")
print("-" * 58)
for b in range(bits):
    i_b, t_b = alloc.currents[b], alloc.durations[b]
    print(
        f"{b:3d} | {i_b:7.3f} | {t_b:8.4f} | {i_b**2*t_b:12.4f} | "
        f"{params.c*np.exp(-2*(i_b-1)*t_b):.3e}"
    )

print()
print("Durations grow by log(2) ~ 0.693 per significance step: classic")
print("water-filling with ground levels set by the 4^b weights.\n")

for name, a in (("uniform", uniform), ("optimized", alloc)):
    print(
        f"{name:>9}: mse={mse(params, a):.6e}  psnr={psnr(params, a):7.3f} dB  "
        f"energy={energy(a):.4f}  latency={latency(a):.4f}"
    )
ratio = mse(params, alloc) / mse(params, uniform)
print(f"\nMSE reduction ratio: {ratio:.4f}  (factor {1/ratio:.1f} improvement)")
