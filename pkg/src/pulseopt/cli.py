"""Command-line front end.

Subcommands: ``solve`` (one allocation), ``sweep-energy`` and ``sweep-width``
(figure-style sweeps), ``trace`` (per-iteration convergence rows), ``verify``
(oracle cross-checks, nonzero exit on any tolerance breach) and
``approx-check`` (exact vs approximate failure probability over a grid).

Machine output is CSV (fixed column order, floats at 17 significant digits)
or JSON ({"schema_version": 1, "spec": ..., "results": ...}); identical
specs produce byte-identical output.  Defaults can come from a key=value
config file (--config); explicit flags win, and the baseline delta can be
set with the PULSEOPT_DEFAULT_DELTA environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .acs import SolverConfig, solve
from .analytic import (
    alltwos_durations,
    dual_closed_form,
    energy_threshold,
    mse_closed_forms,
    reduction_ratio,
)
from .errors import ConvergenceError
from .model import (
    Budget,
    DeviceParams,
    PulseAllocation,
    failure_prob_approx,
    failure_prob_exact,
    latency,
    mse,
    psnr,
)
from .oracle import (
    convex_solve_currents,
    convex_solve_durations,
    grid_search_single_bit,
    monte_carlo_mse,
)
from .steps import solve_currents, solve_durations

SCHEMA_VERSION = 1
ENV_DELTA = "PULSEOPT_DEFAULT_DELTA"


# ---------------------------------------------------------------------------
# run specification


@dataclass
class RunSpec:
    command: str
    bits: int | None = None
    energy: float | None = None
    energy_range: list | None = None
    bits_range: list | None = None
    delta: float = 60.0
    epsilon: float = 1e-3
    start: str = "all-twos"
    stop: list | None = None
    format: str = "table"
    out: str | None = None
    seed: int = 0
    trials: int | None = None
    instances: int | None = None
    i_min: float | None = None
    i_max: float | None = None
    t_min: float | None = None
    t_max: float | None = None
    points: int | None = None
    debug_scale_t: float | None = None

    def to_dict(self) -> dict:
        # the output path is where the document goes, not part of what was
        # computed; keeping it out preserves byte-identity across targets
        return {k: v for k, v in asdict(self).items() if v is not None and k != "out"}


def _parse_energy_range(text: str) -> list:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError("energy range must be min:max:count[:log]")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    spacing = "linear"
    if len(parts) == 4:
        if parts[3] != "log":
            raise ValueError(f"unknown spacing {parts[3]!r}; only 'log' is recognized")
        spacing = "log"
    if count < 2:
        raise ValueError("range count must be >= 2")
    if not (0 < lo < hi):
        raise ValueError("energy range needs 0 < min < max")
    return [lo, hi, count, spacing]


def _energies(rng_spec: list) -> np.ndarray:
    lo, hi, count, spacing = rng_spec
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _parse_bits_range(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError("bits range must be min:max")
    lo, hi = int(parts[0]), int(parts[1])
    if lo < 1 or hi < lo:
        raise ValueError("bits range needs 1 <= min <= max")
    if hi == lo:
        raise ValueError("range count must be >= 2")
    return [lo, hi]


def _parse_start(text: str):
    if text in ("all-twos", "all-ones"):
        return text
    if text.startswith("custom:"):
        vals = [float(v) for v in text[len("custom:") :].split(",") if v]
        if not vals:
            raise ValueError("custom start needs a comma-separated list of currents")
        return vals
    raise ValueError(f"start must be all-twos, all-ones or custom:<csv>, got {text!r}")


def _solver_config(spec: RunSpec) -> SolverConfig:
    kwargs: dict = {"start": _parse_start(spec.start)}
    for entry in spec.stop or []:
        kind, _, value = entry.partition(":")
        if kind == "mse":
            kwargs["mse_tol"] = float(value)
        elif kind == "iterate":
            kwargs["iterate_tol"] = float(value)
        elif kind == "iters":
            kwargs["stop_iters"] = int(value)
        else:
            raise ValueError(f"stop must be mse:<tol>, iterate:<tol> or iters:<n>, got {entry!r}")
    return SolverConfig(**kwargs)


# ---------------------------------------------------------------------------
# output


def _fmt17(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_csv(spec: RunSpec, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt17(v) for v in row) for row in rows]
    _write(spec.out, "\n".join(lines) + "\n")


def _emit_json(spec: RunSpec, results: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "spec": spec.to_dict(), "results": results}
    _write(spec.out, json.dumps(doc, indent=2) + "\n")


def _emit_table(spec: RunSpec, header: list[str], rows: list[list], title: str = "") -> None:
    cells = [[_cell(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[j]) for r in cells)) if cells else len(h) for j, h in enumerate(header)]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    _write(spec.out, "\n".join(lines) + "\n")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".10g")
    return str(v)


def _emit_rows(spec: RunSpec, header: list[str], rows: list[list], results: dict, title: str = "") -> None:
    if spec.format == "csv":
        _emit_csv(spec, header, rows)
    elif spec.format == "json":
        _emit_json(spec, results)
    else:
        _emit_table(spec, header, rows, title)


def _report_dict(report) -> dict:
    return {
        "iterates": [
            {"currents": list(i), "durations": list(t)} for i, t in report.iterates
        ],
        "mse_trace": list(report.mse_trace),
        "energy_trace": list(report.energy_trace),
        "duals": [[nu, nup] for nu, nup in report.duals],
        "termination": report.termination,
        "fast_path": bool(report.fast_path),
        "stalled_above_closed_form": bool(report.stalled_above_closed_form),
        "iterations": report.iterations,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_solve(spec: RunSpec) -> int:
    params = DeviceParams(delta=spec.delta, epsilon=spec.epsilon)
    budget = Budget(spec.energy)
    report = solve(params, spec.bits, budget, _solver_config(spec))
    alloc = report.allocation
    p = np.atleast_1d(failure_prob_approx(params, alloc.currents, alloc.durations))
    saturated = [int(b) for b in np.nonzero(p > 1.0)[0]]
    inactive = [int(b) for b in np.nonzero(alloc.durations == 0.0)[0]]

    summary = {
        "mse": mse(params, alloc),
        "psnr_db": psnr(params, alloc),
        "energy": float(np.sum(alloc.currents**2 * alloc.durations)),
        "latency": latency(alloc),
        "iterations": report.iterations,
        "fast_path": bool(report.fast_path),
        "termination": report.termination,
        "stalled_above_closed_form": bool(report.stalled_above_closed_form),
        "inactive_bits": inactive,
        "approx_p_over_one_bits": saturated,
    }
    header = ["bit", "current", "duration", "p_approx"]
    rows = [[b, alloc.currents[b], alloc.durations[b], float(p[b])] for b in range(alloc.width)]

    if spec.format == "json":
        _emit_json(spec, {"summary": summary, "report": _report_dict(report)})
    elif spec.format == "csv":
        _emit_csv(spec, header, rows)
    else:
        _emit_table(spec, header, rows, title=f"solve: B={spec.bits} energy={spec.energy:g}")
        notes = [
            f"mse={summary['mse']:.10g}",
            f"psnr={summary['psnr_db']:.6g} dB",
            f"energy={summary['energy']:.10g}",
            f"latency={summary['latency']:.10g}",
            f"iterations={summary['iterations']}",
            f"fast_path={'yes' if summary['fast_path'] else 'no'}",
            f"termination={summary['termination']}",
        ]
        if report.stalled_above_closed_form:
            notes.append("stalled_above_closed_form=yes")
        if inactive:
            notes.append(f"inactive_bits={inactive}")
        if saturated:
            notes.append(f"approx_p_over_one_bits={saturated}")
        sys.stdout.write("\n" + "\n".join(notes) + "\n")
    return 0


def cmd_sweep_energy(spec: RunSpec) -> int:
    params = DeviceParams(delta=spec.delta, epsilon=spec.epsilon)
    peak_sq = (2.0**spec.bits - 1.0) ** 2
    thr = energy_threshold(spec.bits)
    rows = []
    for e in _energies(spec.energy_range):
        budget = Budget(float(e))
        mse_unif = params.c * (4.0**spec.bits - 1.0) / 3.0 * np.exp(-e / (2.0 * spec.bits))
        below = e <= thr
        if below:
            report = solve(params, spec.bits, budget, SolverConfig())
            mse_opt = report.final_mse
        else:
            mse_opt, _, _ = mse_closed_forms(params, spec.bits, budget)
        rows.append(
            [
                float(e),
                float(mse_unif),
                float(mse_opt),
                float(10.0 * np.log10(peak_sq / mse_unif)),
                float(10.0 * np.log10(peak_sq / mse_opt)),
                float(mse_opt / mse_unif),
                int(below),
            ]
        )
    header = [
        "energy",
        "mse_uniform",
        "mse_optimized",
        "psnr_uniform",
        "psnr_optimized",
        "gamma",
        "below_threshold",
    ]
    results = {"rows": [dict(zip(header, r)) for r in rows]}
    _emit_rows(spec, header, rows, results, title=f"sweep-energy: B={spec.bits}")
    return 0


def cmd_sweep_width(spec: RunSpec) -> int:
    lo, hi = spec.bits_range
    rows = []
    for bits in range(lo, hi + 1):
        exact, approx = reduction_ratio(bits)
        rows.append([bits, exact, approx])
    header = ["bits", "gamma_exact", "gamma_approx"]
    results = {"rows": [dict(zip(header, r)) for r in rows]}
    _emit_rows(spec, header, rows, results, title="sweep-width: MSE reduction ratio")
    return 0


def cmd_trace(spec: RunSpec) -> int:
    params = DeviceParams(delta=spec.delta, epsilon=spec.epsilon)
    report = solve(params, spec.bits, Budget(spec.energy), _solver_config(spec))
    header = (
        ["iteration"]
        + [f"i{b}" for b in range(spec.bits)]
        + [f"t{b}" for b in range(spec.bits)]
        + ["mse"]
    )
    rows = []
    for k, (i, t) in enumerate(report.iterates):
        rows.append([k] + [float(v) for v in i] + [float(v) for v in t] + [report.mse_trace[k]])
    results = {
        "rows": [dict(zip(header, r)) for r in rows],
        "termination": report.termination,
        "fast_path": bool(report.fast_path),
    }
    _emit_rows(spec, header, rows, results, title=f"trace: B={spec.bits} energy={spec.energy:g}")
    return 0


def cmd_approx_check(spec: RunSpec) -> int:
    params = DeviceParams(delta=spec.delta, epsilon=spec.epsilon)
    i_grid = np.linspace(spec.i_min, spec.i_max, spec.points)
    t_grid = np.linspace(spec.t_min, spec.t_max, spec.points)
    rows = []
    max_rel_low_p = 0.0
    for i in i_grid:
        p_exact = failure_prob_exact(params, i, t_grid)
        p_approx = failure_prob_approx(params, i, t_grid)
        rel = np.abs(p_approx - p_exact) / p_exact
        low = p_exact <= 1e-2
        if np.any(low):
            max_rel_low_p = max(max_rel_low_p, float(np.max(rel[low])))
        for j, t in enumerate(t_grid):
            rows.append([float(i), float(t), float(p_exact[j]), float(p_approx[j]), float(rel[j])])
    header = ["current", "duration", "p_exact", "p_approx", "rel_err"]
    results = {
        "rows": [dict(zip(header, r)) for r in rows],
        "max_rel_err_low_p": max_rel_low_p,
    }
    if spec.format == "csv":
        _emit_csv(spec, header, rows)
        sys.stderr.write(f"max_rel_err_low_p={max_rel_low_p:.17g}\n")
    elif spec.format == "json":
        _emit_json(spec, results)
    else:
        _emit_table(spec, header, rows, title="approx-check")
        sys.stdout.write(f"\nmax_rel_err_low_p={max_rel_low_p:.10g}\n")
    return 0


def _verify_checks(spec: RunSpec) -> list[dict]:
    params = DeviceParams(delta=spec.delta, epsilon=spec.epsilon)
    bits = spec.bits
    budget = Budget(spec.energy)
    rng = np.random.default_rng(spec.seed)
    checks: list[dict] = []

    def add(name: str, achieved: float, allowed: float) -> None:
        checks.append(
            {
                "check": name,
                "achieved": float(achieved),
                "allowed": float(allowed),
                "status": "pass" if achieved <= allowed else "FAIL",
            }
        )

    # brute-force single-bit optimum sits at current 2
    worst = 0.0
    for e in (20.0, 40.0, 60.0):
        i_star, _, _ = grid_search_single_bit(params, Budget(e), 10_000)
        worst = max(worst, abs(i_star - 2.0))
    add("single_bit_grid_argmin", worst, 1e-3)

    # closed-form inner solves vs projected descent, random instances
    n_inst = spec.instances or 25
    worst_t = 0.0
    worst_i = 0.0
    for _ in range(n_inst):
        nb = int(rng.integers(1, 9))
        currents = rng.uniform(1.2, 3.5, nb)
        e = float(rng.uniform(2.0, 40.0 * nb))
        t_cf, _ = solve_durations(params, currents, Budget(e))
        t_pd = convex_solve_durations(params, currents, Budget(e), tol=1e-12)
        m_cf = mse(params, PulseAllocation(currents, t_cf))
        m_pd = mse(params, PulseAllocation(currents, t_pd))
        worst_t = max(worst_t, abs(m_cf - m_pd) / m_cf)

        durations = rng.uniform(0.2, 8.0, nb) * (rng.random(nb) > 0.2)
        e2 = float(params.current_floor**2 * durations.sum() * rng.uniform(1.3, 4.0) + 1.0)
        i_cf, _ = solve_currents(params, durations, Budget(e2))
        i_pd = convex_solve_currents(params, durations, Budget(e2), tol=1e-12)
        m_cf = mse(params, PulseAllocation(i_cf, durations))
        m_pd = mse(params, PulseAllocation(i_pd, durations))
        worst_i = max(worst_i, abs(m_cf - m_pd) / m_cf)
    add("durations_vs_descent", worst_t, 1e-6)
    add("currents_vs_descent", worst_i, 1e-6)

    # bisection dual vs its closed form above the threshold
    worst = 0.0
    for nb in range(2, 9):
        for mult in (1.1, 2.0, 4.0):
            e = energy_threshold(nb) * mult + 1.0
            _, dual = solve_durations(params, np.full(nb, 2.0), Budget(e))
            ref = dual_closed_form(nb, Budget(e))
            worst = max(worst, abs(dual.value - ref) / ref)
    add("dual_vs_closed_form", worst, 1e-8)

    # closed-form durations vs the water-filling solve
    worst = 0.0
    for nb in (1, 2, 4, 8):
        e = energy_threshold(nb) * 1.5 + 10.0
        t_formula = alltwos_durations(nb, Budget(e))
        t_wf, _ = solve_durations(params, np.full(nb, 2.0), Budget(e))
        worst = max(worst, float(np.max(np.abs(t_formula - t_wf)) / np.max(t_formula)))
    add("alltwos_durations_vs_waterfill", worst, 1e-10)

    # energy tightness of a full solve (negative control: --debug-scale-t)
    report = solve(params, bits, budget, SolverConfig())
    alloc = report.allocation
    durations = alloc.durations * (spec.debug_scale_t or 1.0)
    achieved = abs(float(np.sum(alloc.currents**2 * durations)) - budget.energy) / budget.energy
    add("energy_tightness", achieved, 1e-9)

    # Monte Carlo interval contains the analytic MSE
    est = monte_carlo_mse(params, alloc, spec.trials or 1_000_000, spec.seed)
    add("monte_carlo_interval", abs(est.mean - mse(params, alloc)), est.half_width)

    return checks


def cmd_verify(spec: RunSpec) -> int:
    checks = _verify_checks(spec)
    header = ["check", "achieved", "allowed", "status"]
    rows = [[c["check"], c["achieved"], c["allowed"], c["status"]] for c in checks]
    ok = all(c["status"] == "pass" for c in checks)
    results = {"checks": checks, "all_pass": ok}
    _emit_rows(spec, header, rows, results, title="verify: oracle cross-checks")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing


def _read_config(path: str) -> dict:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key = value: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulseopt",
        description="Per-bit MRAM write-pulse allocation under an energy budget.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, solver: bool = False) -> None:
        p.add_argument("--config", help="key = value file of flag defaults")
        p.add_argument("--delta", type=float, help="thermal stability factor (default 60)")
        p.add_argument("--epsilon", type=float, help="current floor offset (default 1e-3)")
        p.add_argument("--format", choices=("table", "csv", "json"))
        p.add_argument("--out", help="output path (default stdout)")
        if solver:
            p.add_argument("--start", help="all-twos | all-ones | custom:<csv>")
            p.add_argument(
                "--stop",
                action="append",
                help="mse:<tol> | iterate:<tol> | iters:<n>; repeatable, OR-combined",
            )

    p = sub.add_parser("solve", help="optimize one word allocation")
    common(p, solver=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--energy", type=float)

    p = sub.add_parser("sweep-energy", help="uniform vs optimized MSE/PSNR over budgets")
    common(p)
    p.add_argument("--bits", type=int)
    p.add_argument("--energy-range", help="min:max:count[:log]")

    p = sub.add_parser("sweep-width", help="MSE reduction ratio over word widths")
    common(p)
    p.add_argument("--bits-range", help="min:max")

    p = sub.add_parser("trace", help="per-iteration convergence rows")
    common(p, solver=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--energy", type=float)

    p = sub.add_parser("verify", help="oracle cross-checks; nonzero exit on breach")
    common(p)
    p.add_argument("--bits", type=int)
    p.add_argument("--energy", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--instances", type=int)
    p.add_argument("--debug-scale-t", type=float, help="scale final durations (negative control)")

    p = sub.add_parser("approx-check", help="exact vs approximate failure probability")
    common(p)
    p.add_argument("--i-min", type=float)
    p.add_argument("--i-max", type=float)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)

    return parser


def _resolve(args: argparse.Namespace, config: dict, key: str, builtin, conv):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        raw = config[key]
        if conv is list:
            return [s.strip() for s in raw.split(";") if s.strip()]
        return conv(raw)
    return builtin


def _build_spec(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunSpec:
    config = _read_config(args.config) if getattr(args, "config", None) else {}
    default_delta = float(os.environ.get(ENV_DELTA, 60.0))
    r = lambda key, builtin, conv: _resolve(args, config, key, builtin, conv)

    spec = RunSpec(
        command=args.command,
        delta=r("delta", default_delta, float),
        epsilon=r("epsilon", 1e-3, float),
        format=r("format", "table", str),
        out=r("out", None, str),
    )
    try:
        if args.command in ("solve", "trace"):
            spec.bits = r("bits", 8, int)
            spec.energy = r("energy", 300.0, float)
            spec.start = r("start", "all-twos", str)
            spec.stop = r("stop", [], list)
            _parse_start(spec.start)
        elif args.command == "sweep-energy":
            spec.bits = r("bits", 8, int)
            raw = r("energy_range", None, str)
            if raw is None:
                parser.error("sweep-energy requires --energy-range min:max:count[:log]")
            spec.energy_range = _parse_energy_range(raw) if isinstance(raw, str) else raw
        elif args.command == "sweep-width":
            raw = r("bits_range", None, str)
            if raw is None:
                parser.error("sweep-width requires --bits-range min:max")
            spec.bits_range = _parse_bits_range(raw) if isinstance(raw, str) else raw
        elif args.command == "verify":
            spec.bits = r("bits", 8, int)
            spec.energy = r("energy", 300.0, float)
            spec.seed = r("seed", 0, int)
            spec.trials = r("trials", 10_000_000, int)
            spec.instances = r("instances", 25, int)
            spec.debug_scale_t = r("debug_scale_t", None, float)
        elif args.command == "approx-check":
            spec.i_min = r("i_min", 1.2, float)
            spec.i_max = r("i_max", 4.0, float)
            spec.t_min = r("t_min", 1.0, float)
            spec.t_max = r("t_max", 100.0, float)
            spec.points = r("points", 25, int)
            if spec.points < 2:
                parser.error("approx-check needs --points >= 2")
    except ValueError as exc:
        parser.error(str(exc))

    if spec.bits is not None and spec.bits < 1:
        parser.error("--bits must be >= 1")
    return spec


_DISPATCH = {
    "solve": cmd_solve,
    "sweep-energy": cmd_sweep_energy,
    "sweep-width": cmd_sweep_width,
    "trace": cmd_trace,
    "verify": cmd_verify,
    "approx-check": cmd_approx_check,
}


def _failing_module(exc: BaseException) -> str:
    name = "pulseopt"
    tb = exc.__traceback__
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("pulseopt"):
            name = mod
        tb = tb.tb_next
    return name


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    spec = _build_spec(args, parser)
    try:
        return _DISPATCH[args.command](spec)
    except (ConvergenceError, ValueError, OSError) as exc:
        sys.stderr.write(f"pulseopt: error in {_failing_module(exc)}: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
