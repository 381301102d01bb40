#!/usr/bin/env python3
"""Where to sit on the budget curve for a single bit.

For one bit with write-energy budget E, every choice of normalized current i
implies the duration t = E / i^2.  Sweeping i along that curve shows the
failure probability dips at i = 2 regardless of the budget: pushing current
beyond twice the critical current wastes energy quadratically, staying near
the critical current wastes it on marathon pulses.
"""

import numpy as np

from pulseopt import Budget, DeviceParams, grid_search_single_bit, single_bit_optimum

params = DeviceParams()

print("budget E | closed form (i*, t*, p*)        | grid search over i^2 t = E")
print("-" * 78)
for e in (20.0, 40.0, 60.0):
    i_star, t_star, p_star = single_bit_optimum(params, Budget(e))
    i_g, t_g, p_g = grid_search_single_bit(params, Budget(e), grid_density=100_000)
    print(
        f"{e:8.1f} | i={i_star:.4f} t={t_star:7.3f} p={p_star:.3e} | "
        f"i={i_g:.4f} t={t_g:7.3f} p={p_g:.3e}"
    )

print()
print("Failure probability along the E = 40 budget curve:")
for i in (1.2, 1.5, 2.0, 3.0, 4.5, 6.0):
    t = 40.0 / i**2
    p = params.c * np.exp(-2 * (i - 1) * t)
    bar = "#" * max(1, int(60 + 2 * np.log10(p)))
    print(f"  i={i:4.2f}  t={t:6.2f}  p={p:.3e}  {bar}")

print()
print("The minimum write failure probability decays exponentially with the")
print("budget: p* = c * exp(-E/2), so every doubling of E squares the gain.")
