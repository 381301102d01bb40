#!/usr/bin/env python3
"""Exact switching-failure probability versus the optimizer's kernel.

The exact expression 1 - exp(-c (i-1) / (i e^{2(i-1)t} - 1)) is awkward to
optimize; the solvers use the kernel c e^{-2(i-1)t} instead.  The kernel is
biconvex in (i, t) but drops an (i-1)/i factor, so at low probabilities it
overestimates by roughly i/(i-1): a constant factor that leaves argmins and
orderings intact while the probabilities themselves span many decades.
"""

import numpy as np

from pulseopt import DeviceParams, failure_prob_approx, failure_prob_exact

params = DeviceParams()

print(f"delta = {params.delta:g}, prefactor c = {params.c:.4f}\n")
print("    i      t      p_exact      p_kernel     kernel/exact   i/(i-1)")
print("-" * 72)
for i in (1.2, 1.5, 2.0, 2.5, 3.0, 4.0):
    t = 30.0 / (i - 1.0)  # equal exponent 2(i-1)t = 60 across rows
    pe = failure_prob_exact(params, i, t)
    pa = failure_prob_approx(params, i, t)
    print(f"  {i:4.2f} {t:7.2f}  {pe:.4e}  {pa:.4e}   {pa/pe:10.4f}   {i/(i-1):7.4f}")

print()
print("Near t = 0 the kernel exceeds 1 (it is an objective, not a clamped")
print("probability) while the exact expression saturates:")
for t in (0.0, 0.02, 0.1):
    pe = failure_prob_exact(params, 2.0, t)
    pa = failure_prob_approx(params, 2.0, t)
    print(f"  t={t:4.2f}   exact={pe:.6f}   kernel={pa:10.4f}")
