"""Hybrid certification at longer observation horizons, noise-free.

At l=2 each observation is a two-step transition; certification still
succeeds but needs more samples than l=1.
"""

import argparse
import pathlib
import sys

from switchcert.config import DEFAULT_N_GRID, ExperimentConfig
from switchcert.experiments import run_config


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--N", type=int, nargs="+", default=list(DEFAULT_N_GRID))
    ap.add_argument("--realizations", type=int, default=20)
    ap.add_argument("--beta", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/horizon_sweep.csv")
    args = ap.parse_args(argv)

    cfg = ExperimentConfig(
        mode="hybrid",
        l_values=tuple(args.l),
        N_values=tuple(args.N),
        W_values=(0.0,),
        beta=args.beta,
        realizations=args.realizations,
        seed=args.seed,
        workers=args.workers,
    )
    rows, text = run_config(cfg)
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    failures = sum(1 for r in rows if r.get("error"))
    print(f"wrote {len(rows)} rows to {out} ({failures} failed cells)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
