#!/usr/bin/env python3
"""Re-deriving the analytic answers numerically.

Every closed form in the library has an independent check: the KKT
water-filling solves are reproduced by projected gradient descent, the dual
variable by its explicit formula, and the word MSE by Monte Carlo simulation
of actual bit flips.  This script runs each pair side by side.
"""

import numpy as np

from pulseopt import (
    Budget,
    DeviceParams,
    PulseAllocation,
    convex_solve_currents,
    convex_solve_durations,
    dual_closed_form,
    monte_carlo_mse,
    mse,
    one_step_fast_path,
    solve_currents,
    solve_durations,
)

params = DeviceParams()

print("1) duration solve vs projected descent")
currents = np.array([1.5, 2.0, 2.5, 3.0])
budget = Budget(60.0)
t_kkt, dual = solve_durations(params, currents, budget)
t_pgd = convex_solve_durations(params, currents, budget, tol=1e-13)
m_kkt = mse(params, PulseAllocation(currents, t_kkt))
m_pgd = mse(params, PulseAllocation(currents, t_pgd))
print(f"   objective, closed form: {m_kkt:.12e}")
print(f"   objective, descent:     {m_pgd:.12e}")
print(f"   relative gap: {abs(m_kkt-m_pgd)/m_kkt:.2e}   (dual evals: {dual.iterations})")

print("\n2) current solve vs projected descent")
durations = np.array([2.0, 4.0, 6.0, 8.0])
budget = Budget(100.0)
i_kkt, _ = solve_currents(params, durations, budget)
i_pgd = convex_solve_currents(params, durations, budget, tol=1e-13)
print(f"   currents, closed form: {np.round(i_kkt, 6)}")
print(f"   currents, descent:     {np.round(i_pgd, 6)}")

print("\n3) water-filling dual vs its closed form (B=8, E=300)")
_, dual = solve_durations(params, np.full(8, 2.0), Budget(300.0))
ref = dual_closed_form(8, Budget(300.0))
print(f"   root-found: {dual.value:.15e}")
print(f"   formula:    {ref:.15e}")

print("\n4) Monte Carlo word-write simulation (B=8, E=300, 10^7 trials)")
alloc = one_step_fast_path(params, 8, Budget(300.0)).allocation
analytic = mse(params, alloc)
for seed in range(3):
    est = monte_carlo_mse(params, alloc, 10_000_000, seed)
    inside = "inside" if est.contains(analytic) else "OUTSIDE"
    print(f"   seed {seed}: mean={est.mean:.4e} +- {est.half_width:.4e} "
          f"({inside}; analytic {analytic:.4e})")
