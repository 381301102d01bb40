"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they execute; without ``-s`` pytest shows them for failing tests.
"""

import time

import numpy as np
import pytest

from pulseopt import (
    Budget,
    DeviceParams,
    PulseAllocation,
    SolverConfig,
    convex_solve_currents,
    convex_solve_durations,
    dual_closed_form,
    failure_prob_approx,
    failure_prob_exact,
    grid_search_single_bit,
    monte_carlo_mse,
    mse,
    mse_closed_forms,
    one_step_fast_path,
    reduction_ratio,
    solve,
    solve_currents,
    solve_durations,
)
from pulseopt.analytic import energy_threshold
from tests.conftest import random_current_instance, random_duration_instance


def _report(num: int, name: str, passed: bool, runtime: float, limit: float, detail: str):
    status = "PASS" if passed and runtime < limit else "FAIL"
    print(f"[criterion {num:02d}] {name}: {status} ({detail}; {runtime:.2f}s < {limit:g}s)")
    assert passed, f"criterion {num}: {detail}"
    assert runtime < limit, f"criterion {num}: runtime {runtime:.2f}s exceeds {limit}s"


def _round3(x: float) -> float:
    return float(f"{x:.3g}")


def test_criterion_01_reduction_ratio_reproduction():
    t0 = time.perf_counter()
    got = {bits: _round3(reduction_ratio(bits)[0]) for bits in (8, 16, 32)}
    expected = {8: 0.0469, 16: 3.66e-4, 32: 1.12e-8}
    dt = time.perf_counter() - t0
    _report(1, "reduction ratio at B=8,16,32", got == expected, dt, 1.0, f"{got}")


def test_criterion_02_one_step_convergence(params):
    t0 = time.perf_counter()
    budget = Budget(300.0)
    full = solve(params, 8, budget)
    i1, t1 = full.iterates[1]
    i2, t2 = full.iterates[2]
    step_gap = max(float(np.max(np.abs(i2 - i1))), float(np.max(np.abs(t2 - t1))))
    fast = one_step_fast_path(params, 8, budget)
    fast_gap = max(
        float(np.max(np.abs(fast.allocation.currents - full.allocation.currents))),
        float(np.max(np.abs(fast.allocation.durations - full.allocation.durations))),
    )
    dt = time.perf_counter() - t0
    ok = step_gap <= 1e-9 and fast_gap <= 1e-9 and fast.fast_path
    _report(
        2,
        "one-step convergence from (2,...,2)",
        ok,
        dt,
        1.0,
        f"k2-k1 gap {step_gap:.2e}, fast-vs-full gap {fast_gap:.2e}",
    )


def test_criterion_03_dual_closed_form_agreement(params):
    t0 = time.perf_counter()
    pairs = [
        (bits, energy_threshold(bits) * mult + 2.0)
        for bits in range(1, 9)
        for mult in (1.2, 2.0, 3.5)
    ]
    assert len(pairs) >= 20
    worst = 0.0
    for bits, e in pairs:
        _, dual = solve_durations(params, np.full(bits, 2.0), Budget(e))
        ref = dual_closed_form(bits, Budget(e))
        worst = max(worst, abs(dual.value - ref) / ref)
    dt = time.perf_counter() - t0
    _report(3, "bisection dual vs closed form", worst <= 1e-8, dt, 1.0,
            f"{len(pairs)} pairs, worst rel {worst:.2e}")


def test_criterion_04_oracle_equivalence(params):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240229)
    worst = 0.0
    count = 0
    for _ in range(25):
        currents, budget = random_duration_instance(rng, params)
        t_cf, _ = solve_durations(params, currents, budget)
        t_pd = convex_solve_durations(params, currents, budget, tol=1e-12)
        m_cf = mse(params, PulseAllocation(currents, t_cf))
        m_pd = mse(params, PulseAllocation(currents, t_pd))
        worst = max(worst, abs(m_cf - m_pd) / m_cf)
        count += 1

        durations, budget = random_current_instance(rng, params)
        i_cf, _ = solve_currents(params, durations, budget)
        i_pd = convex_solve_currents(params, durations, budget, tol=1e-12)
        m_cf = mse(params, PulseAllocation(i_cf, durations))
        m_pd = mse(params, PulseAllocation(i_pd, durations))
        worst = max(worst, abs(m_cf - m_pd) / m_cf)
        count += 1
    dt = time.perf_counter() - t0
    _report(4, "closed-form steps vs projected descent", worst <= 1e-6 and count >= 50,
            dt, 30.0, f"{count} instances, worst rel {worst:.2e}")


def test_criterion_05_single_bit_grid_search(params):
    t0 = time.perf_counter()
    worst = 0.0
    for e in (20.0, 40.0, 60.0):
        i_star, _, _ = grid_search_single_bit(params, Budget(e), 10_000)
        worst = max(worst, abs(i_star - 2.0))
    dt = time.perf_counter() - t0
    _report(5, "grid search locates current 2", worst <= 1e-3, dt, 1.0,
            f"worst |i*-2| {worst:.2e}")


def test_criterion_06_monotone_mse_traces(params):
    t0 = time.perf_counter()
    rng = np.random.default_rng(777)
    worst_uptick = -np.inf
    for _ in range(100):
        bits = int(rng.integers(1, 9))
        start = rng.uniform(params.current_floor, 4.0, bits)
        budget = Budget(float(rng.uniform(1.0, 50.0 * bits)))
        report = solve(params, bits, budget, SolverConfig(start=start))
        trace = np.asarray(report.mse_trace)
        # 1e-12 slack, relative: one ulp of a large MSE already exceeds
        # 1e-12 absolute, so absolute slack is not meaningful in float64
        uptick = float(np.max(np.diff(trace) / np.maximum(1.0, trace[:-1])))
        worst_uptick = max(worst_uptick, uptick)
    dt = time.perf_counter() - t0
    _report(6, "monotone MSE over 100 random solves", worst_uptick <= 1e-12, dt, 10.0,
            f"worst relative uptick {worst_uptick:.2e}")


def test_criterion_07_energy_saving_at_40db(params):
    t0 = time.perf_counter()
    bits = 8
    peak_sq = (2.0**bits - 1.0) ** 2
    energies = np.linspace(100.0, 500.0, 161)
    psnr_u, psnr_o = [], []
    for e in energies:
        mse_opt, mse_unif, _ = mse_closed_forms(params, bits, Budget(float(e)))
        psnr_u.append(10 * np.log10(peak_sq / mse_unif))
        psnr_o.append(10 * np.log10(peak_sq / mse_opt))
    e_uniform = float(np.interp(40.0, psnr_u, energies))
    e_optimal = float(np.interp(40.0, psnr_o, energies))
    saving = 1.0 - e_optimal / e_uniform
    dt = time.perf_counter() - t0
    _report(7, "write-energy saving at 40 dB", 0.22 <= saving <= 0.26, dt, 5.0,
            f"saving {saving*100:.2f}% (uniform {e_uniform:.1f}, optimized {e_optimal:.1f})")


def test_criterion_08_approximation_band(params):
    t0 = time.perf_counter()
    i = np.linspace(1.2, 4.0, 100)
    t = np.linspace(1.0, 100.0, 100)
    ii, tt = np.meshgrid(i, t)
    p_exact = failure_prob_exact(params, ii, tt)
    p_approx = failure_prob_approx(params, ii, tt)
    low = p_exact <= 1e-2
    rel = np.abs(p_approx - p_exact)[low] / p_exact[low]
    worst = float(rel.max())
    best = float(rel.min())
    dt = time.perf_counter() - t0
    _report(8, "approximation within 10% at low p", worst <= 0.1, dt, 1.0,
            f"rel err over low-p grid spans [{best:.3f}, {worst:.3f}]")


def test_criterion_09_monte_carlo_consistency(params):
    t0 = time.perf_counter()
    alloc = one_step_fast_path(params, 8, Budget(300.0)).allocation
    analytic = mse(params, alloc)
    hits = sum(
        monte_carlo_mse(params, alloc, 10_000_000, seed).contains(analytic)
        for seed in range(20)
    )
    dt = time.perf_counter() - t0
    _report(9, "analytic MSE inside 95% MC interval", hits >= 17, dt, 60.0,
            f"{hits}/20 seeds")


def test_criterion_10_starting_point_comparison(params):
    t0 = time.perf_counter()
    budget = Budget(300.0)
    twos = solve(params, 8, budget)
    ones = solve(params, 8, budget, SolverConfig(start="all-ones"))
    trace = np.asarray(ones.mse_trace)
    monotone = bool(np.all(np.diff(trace) <= 1e-12 * np.maximum(1.0, trace[:-1])))
    rel_gap = abs(ones.final_mse - twos.final_mse) / twos.final_mse
    ok = (
        rel_gap <= 1e-3
        and ones.iterations <= 100
        and monotone
        and ones.iterations > twos.iterations
    )
    dt = time.perf_counter() - t0
    _report(
        10,
        "floor start reaches the (2,...,2) MSE",
        ok,
        dt,
        5.0,
        f"rel MSE gap {rel_gap:.2e}, iterations {ones.iterations} vs {twos.iterations}, "
        f"monotone {monotone}",
    )
