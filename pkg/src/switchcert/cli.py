"""Command-line interface.

Subcommands:
  simulate    draw and export sample sets (or a free trajectory)
  certify     one sample-solve-certify run, reported as a CSV row
  baseline    model-based bracket table over horizons
  experiment  full grid from a JSON experiment config

Exit codes: 0 on success, 1 when any cell or runtime computation fails,
2 on configuration or usage errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ConfigError, ExperimentConfig, load_experiment, resolve_system
from .experiments import (
    BASELINE_COLUMNS,
    CSV_COLUMNS,
    rows_to_csv,
    run_baseline,
    run_cell,
    run_config,
)
from .sampling import (
    SamplingConfig,
    continuous_csv,
    hybrid_csv,
    sample_continuous,
    sample_hybrid,
)
from .systems import simulate


def _add_system(parser):
    parser.add_argument(
        "--system",
        default="ncs",
        help="system config path, or 'ncs' for the built-in packet-loss demo",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchcert",
        description="Data-driven stability certificates for constrained switching systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a sample set or a trajectory")
    _add_system(p)
    p.add_argument("--mode", choices=("hybrid", "continuous"), default="hybrid")
    p.add_argument("--l", type=int, default=1, help="observation horizon")
    p.add_argument("--N", type=int, default=100, help="number of samples")
    p.add_argument("--W", type=float, default=0.0, help="noise radius")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-law", choices=("uniform-ball", "zero"), default="uniform-ball")
    p.add_argument("--trajectory", type=int, metavar="STEPS",
                   help="emit a free trajectory of STEPS transitions instead")
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("certify", help="sample, solve, and bound once")
    _add_system(p)
    p.add_argument("--mode", choices=("hybrid", "continuous"), default="hybrid")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--W", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the CSV row here instead of stdout")

    p = sub.add_parser("baseline", help="model-based bracket per horizon")
    _add_system(p)
    p.add_argument("--l-max", type=int, default=3, help="largest lift horizon")
    p.add_argument("--cycle-max", type=int, default=12, help="closed-path length cap")
    p.add_argument("--gamma-tol", type=float, default=1e-4)
    p.add_argument("--out", help="write CSV here instead of stdout")

    p = sub.add_parser("experiment", help="run a JSON-described grid")
    p.add_argument("--config", required=True, help="experiment config path or JSON")
    p.add_argument("--out", help="override the config's output path")
    p.add_argument("--workers", type=int, help="override the config's worker count")

    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_simulate(args) -> int:
    system = resolve_system(args.system)
    if args.trajectory is not None:
        rng = np.random.default_rng(args.seed)
        x0 = np.zeros(system.dimension)
        x0[0] = 1.0
        edges, states = simulate(system, args.trajectory, x0, rng)
        lines = ["k," + ",".join(f"x{j}" for j in range(system.dimension)) + ",edge"]
        lines.append("0," + ",".join(format(v, ".15g") for v in states[0]) + ",")
        for k in range(len(edges)):
            lines.append(
                f"{k + 1},"
                + ",".join(format(v, ".15g") for v in states[k + 1])
                + f",{edges[k]}"
            )
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    cfg = SamplingConfig(l=args.l, N=args.N, W=args.W, seed=args.seed,
                         noise_law=args.noise_law)
    if args.mode == "hybrid":
        text = hybrid_csv(sample_hybrid(system, cfg))
    else:
        text = continuous_csv(sample_continuous(system, cfg))
    _emit(text, args.out)
    return 0


def _cmd_certify(args) -> int:
    system = resolve_system(args.system)
    row = run_cell(system, args.mode, args.l, args.W, args.N, 0, args.beta, args.seed)
    _emit(rows_to_csv([row], CSV_COLUMNS), args.out)
    if row["error"]:
        sys.stderr.write(row["error"] + "\n")
        return 1
    return 0


def _cmd_baseline(args) -> int:
    system = resolve_system(args.system)
    if args.l_max < 1:
        raise ConfigError(f"l-max: expected >= 1, got {args.l_max}")
    cfg = ExperimentConfig(
        mode="baseline",
        l_values=tuple(range(1, args.l_max + 1)),
        cycle_max=args.cycle_max,
    )
    rows = run_baseline(system, cfg)
    _emit(rows_to_csv(rows, BASELINE_COLUMNS), args.out)
    return 0


def _cmd_experiment(args) -> int:
    cfg = load_experiment(args.config)
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    rows, text = run_config(cfg)
    _emit(text, cfg.out)
    failures = [r for r in rows if r.get("error")]
    if failures:
        sys.stderr.write(f"{len(failures)} cell(s) failed; first: {failures[0]['error']}\n")
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "certify": _cmd_certify,
        "baseline": _cmd_baseline,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
