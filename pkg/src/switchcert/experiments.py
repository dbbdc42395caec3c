"""Experiment grids: certification cells over (l, W, N, realization).

Every cell is independently seeded by a stable mix of the base seed and
the cell coordinates, so grids can be rerun, subset, or parallelized
without changing any cell's result.  Rows are emitted in sorted cell
order followed by per-(l, W, N) aggregate rows.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import struct
import time
from concurrent.futures import ProcessPoolExecutor

from .baselines import baseline_report
from .certify import continuous_bound, hybrid_bound
from .config import ExperimentConfig, resolve_system
from .sampling import SamplingConfig, sample_continuous, sample_hybrid
from .solver import solve_continuous, solve_hybrid
from .systems import SwitchedSystem, build_lift

CSV_COLUMNS = (
    "mode", "l", "W", "N", "realization", "seed",
    "lambda_star", "epsilon", "rho_primary", "rho_alternative", "rho_final",
    "vacuous", "certified", "wall_ms", "error",
)

NUMERIC_MEANS = (
    "lambda_star", "epsilon", "rho_primary", "rho_alternative", "rho_final", "wall_ms",
)


def cell_seed(base_seed: int, l: int, W: float, N: int, realization: int) -> int:
    """Stable 64-bit seed for one grid cell."""
    payload = struct.pack("<qqdqq", base_seed, l, float(W), N, realization)
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")


def run_cell(
    system: SwitchedSystem,
    mode: str,
    l: int,
    W: float,
    N: int,
    realization: int,
    beta: float,
    base_seed: int,
    lift=None,
) -> dict:
    """One sample-solve-certify cell; errors become the row's error field."""
    seed = cell_seed(base_seed, l, W, N, realization)
    row = {
        "mode": mode, "l": l, "W": W, "N": N,
        "realization": realization, "seed": seed, "error": "",
    }
    start = time.perf_counter()
    try:
        cfg = SamplingConfig(l=l, N=N, W=W, seed=seed)
        if mode == "hybrid":
            samples = sample_hybrid(system, cfg, lift)
            solution = solve_hybrid(samples)
            report = hybrid_bound(solution, samples, beta)
        elif mode == "continuous":
            samples = sample_continuous(system, cfg, lift)
            solution = solve_continuous(samples)
            report = continuous_bound(solution, samples, beta)
        else:
            raise ValueError(f"mode: expected hybrid or continuous, got {mode!r}")
        row.update(
            lambda_star=solution.lambda_star,
            epsilon=report.epsilon,
            rho_primary=report.rho_primary,
            rho_alternative=report.rho_alternative,
            rho_final=report.rho_final,
            vacuous=report.vacuous,
            certified=report.certifies_stability,
        )
    except Exception as exc:  # noqa: BLE001 - cell failures land in the CSV
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["wall_ms"] = (time.perf_counter() - start) * 1000.0
    return row


def _cell_args(system, cfg: ExperimentConfig):
    for l in sorted(set(cfg.l_values)):
        for W in sorted(set(cfg.W_values)):
            for N in sorted(set(cfg.N_values)):
                for r in range(cfg.realizations):
                    yield (system, cfg.mode, l, W, N, r, cfg.beta, cfg.seed)


def _run_cell_args(args):
    system, mode, l, W, N, r, beta, seed = args
    return run_cell(system, mode, l, W, N, r, beta, seed)


def run_experiment(system: SwitchedSystem, cfg: ExperimentConfig) -> list[dict]:
    """All certification cells of the grid, plus aggregate rows."""
    if cfg.mode == "baseline":
        raise ValueError("mode: baseline grids are produced by run_baseline")
    cells = list(_cell_args(system, cfg))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_run_cell_args, cells, chunksize=1))
    else:
        lifts = {l: build_lift(system, l) for l in sorted(set(cfg.l_values))}
        rows = [
            run_cell(system, mode, l, W, N, r, beta, seed, lifts[l])
            for (system, mode, l, W, N, r, beta, seed) in cells
        ]
    rows.sort(key=lambda r: (r["l"], r["W"], r["N"], r["realization"]))
    rows.extend(_aggregate(rows))
    return rows


def _aggregate(rows: list[dict]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["l"], row["W"], row["N"]), []).append(row)
    out = []
    for (l, W, N), members in sorted(groups.items()):
        clean = [r for r in members if not r["error"]]
        agg = {
            "mode": members[0]["mode"], "l": l, "W": W, "N": N,
            "realization": "mean", "seed": "",
            "error": "" if clean else "all realizations failed",
        }
        for key in NUMERIC_MEANS:
            agg[key] = (
                sum(r[key] for r in clean) / len(clean) if clean else math.nan
            )
        for key in ("vacuous", "certified"):
            agg[key] = (
                sum(1.0 for r in clean if r[key]) / len(clean) if clean else math.nan
            )
        out.append(agg)
    return out


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


def rows_to_csv(rows: list[dict], columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_value(row.get(c, "")) for c in columns])
    return buf.getvalue()


BASELINE_COLUMNS = ("l", "cycle_max", "lower", "upper", "upper_reduction", "width", "wall_ms")


def run_baseline(system: SwitchedSystem, cfg: ExperimentConfig) -> list[dict]:
    """Bracket table: cycle lower bound and certified uppers per horizon."""
    rows = []
    for l in sorted(set(cfg.l_values)):
        start = time.perf_counter()
        rep = baseline_report(system, l, cfg.cycle_max)
        rows.append(
            {
                "l": l,
                "cycle_max": cfg.cycle_max,
                "lower": rep.lower,
                "upper": rep.upper,
                "upper_reduction": rep.upper_reduction,
                "width": rep.width,
                "wall_ms": (time.perf_counter() - start) * 1000.0,
            }
        )
    return rows


def run_config(cfg: ExperimentConfig) -> tuple[list[dict], str]:
    """Dispatch on cfg.mode; returns (rows, csv_text)."""
    system = resolve_system(cfg.system)
    if cfg.mode == "baseline":
        rows = run_baseline(system, cfg)
        return rows, rows_to_csv(rows, BASELINE_COLUMNS)
    rows = run_experiment(system, cfg)
    return rows, rows_to_csv(rows)
