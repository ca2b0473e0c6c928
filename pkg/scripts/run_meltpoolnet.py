#!/usr/bin/env python3
"""Full pipeline on a recorded melt-pool CSV.

Cleans and normalizes the table for each requested target, prints the
cleaning report, then runs the published comparison protocol (scenario
II by default: campaigns vs baselines trained on warmup+budget rows)
and writes result files. The CSV path comes from the command line or
the SURPRISE_BO_MELTPOOLNET environment variable.

Columns expected: laser_power, scanning_velocity, beam_diameter,
density, melting_temperature, thermal_conductivity, plus one column
per requested target (depth, width, length).
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from surprise_bo.bench import benchmark_scenario, emit_scenario_results, run_scenario
from surprise_bo.dataset import load_and_clean, meltpool_schema, normalize, split
from surprise_bo.engine import POLICY_BAYESIAN, POLICY_EI, POLICY_SHANNON


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "csv",
        nargs="?",
        default=os.environ.get("SURPRISE_BO_MELTPOOLNET"),
        help="recorded CSV (default: $SURPRISE_BO_MELTPOOLNET)",
    )
    ap.add_argument(
        "--targets",
        default="depth,width,length",
        help="comma list of targets to run",
    )
    ap.add_argument("--scenario", default="II", help="I or II")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ap.add_argument("--split-seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default="results/meltpoolnet")
    args = ap.parse_args()

    if not args.csv:
        ap.error("no CSV given and SURPRISE_BO_MELTPOOLNET is unset")
    path = Path(args.csv)
    if not path.exists():
        ap.error(f"CSV not found: {path}")

    out = Path(args.out)
    models = (POLICY_EI, POLICY_SHANNON, POLICY_BAYESIAN, "Ridge", "Lasso")
    for target in args.targets.split(","):
        target = target.strip()
        cleaned = load_and_clean(path, meltpool_schema(target))
        rep = cleaned.cleaning
        print(
            f"{target}: {rep['rows_in']} rows in, {rep['rows_out']} out "
            f"({rep['dropped_missing']} missing, "
            f"{rep['dropped_duplicate']} duplicate)"
        )
        data = split(normalize(cleaned), 0.75, seed=args.split_seed)
        spec = benchmark_scenario(target, repetitions=args.reps, master_seed=args.seed)
        results = run_scenario(
            spec, data, models=models, scenario=args.scenario, jobs=args.jobs
        )
        for name in sorted(results, key=lambda n: results[n].mean):
            r = results[name]
            print(f"  {name:18s} mean RMSE {r.mean:.4f}  median {r.median:.4f}")
        files = emit_scenario_results(results, out)
        print(f"  wrote {len(files)} files under {out / target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
