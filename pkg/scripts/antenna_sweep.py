#!/usr/bin/env python3
"""Sum secrecy rate versus number of transmit antennas for all four methods.

Writes the results CSV pair and prints one line per (antenna count, method).
"""

import argparse
from pathlib import Path

from dmsec.model import load_scenario, reference_scenario
from dmsec.sweeps import METHODS, SweepSpec, emit_results, run_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--values", default="4,6,8,10",
                        help="comma-separated antenna counts")
    parser.add_argument("--methods", default=",".join(METHODS))
    parser.add_argument("--trials", type=int, default=300)
    parser.add_argument("--seed", type=int, default=21)
    parser.add_argument("--config", type=Path, default=None,
                        help="scenario config file (key = value lines)")
    parser.add_argument("--output", type=Path,
                        default=Path("results/antenna_sweep.csv"))
    args = parser.parse_args()

    scenario = (load_scenario(args.config.read_text(encoding="utf-8"))
                if args.config else reference_scenario())
    spec = SweepSpec(axis="num_antennas",
                     values=tuple(int(v) for v in args.values.split(",")),
                     methods=tuple(args.methods.split(",")),
                     trials=args.trials, seed=args.seed)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    rows = run_sweep(scenario, spec)
    main_path, figure_path = emit_results(rows, args.output)

    print(f"{'antennas':>9s} {'method':>7s} {'mean rate':>10s} {'95% CI':>8s}")
    for row in rows:
        print(f"{row.axis_value:9.0f} {row.method:>7s} "
              f"{row.mean_rate:10.4f} {row.ci_halfwidth:8.4f}  [{row.status}]")
    print(f"\nwrote {main_path} and {figure_path}")
    return 0 if all(r.status == "ok" for r in rows) else 2


if __name__ == "__main__":
    raise SystemExit(main())
