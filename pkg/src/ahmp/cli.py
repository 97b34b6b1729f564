"""Command line benchmark front end.

    bench run scenarios/default.json --out results/
    bench compare-trajectories a.traj b.traj
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (ScenarioError, expansion_ratios, load_scenario,
                    load_trajectory, mean_abs_joint_error, ratios_csv,
                    report_csv, report_markdown, run_matrix)


def _cmd_run(args) -> int:
    try:
        scn = load_scenario(args.scenario)
    except (OSError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = run_matrix(scn, include_30k=args.include_30k,
                      seed_override=args.seed_override)
    ratios = expansion_ratios(rows)
    if args.format == "csv":
        (out / "report.csv").write_text(report_csv(rows))
        if ratios:
            (out / "ratios.csv").write_text(ratios_csv(ratios))
        written = [out / "report.csv"] + ([out / "ratios.csv"] if ratios else [])
    else:
        (out / "report.md").write_text(report_markdown(rows, ratios))
        written = [out / "report.md"]
    n_failed = sum(1 for r in rows if r.failed)
    print(f"{len(rows)} cells, {n_failed} with failures")
    for path in written:
        print(f"wrote {path}")
    if args.strict and n_failed:
        print("strict mode: failing cells present", file=sys.stderr)
        return 1
    return 0


def _cmd_compare(args) -> int:
    try:
        ta = load_trajectory(args.file_a)
        tb = load_trajectory(args.file_b)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    stats = mean_abs_joint_error(ta, tb, samples=args.samples)
    print("joint  mean_abs_error  std")
    for j in range(5):
        print(f"q{j}     {stats.mean[j]:.6f}        {stats.std[j]:.6f}")
    print(f"overall mean_abs_error: {stats.overall_mean:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Run planner benchmark matrices and compare trajectories.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scenario's experiment matrix")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--out", required=True, help="output directory for reports")
    run.add_argument("--format", choices=("csv", "markdown"), default="csv")
    run.add_argument("--include-30k", action="store_true",
                     help="append a 30000-sample column to the matrix")
    run.add_argument("--seed-override", type=int, default=None, metavar="N",
                     help="replace the scenario's seed list with a single seed")
    run.add_argument("--strict", action="store_true",
                     help="exit nonzero if any cell fails")
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser("compare-trajectories",
                          help="per-joint error between two trajectory files")
    cmp_.add_argument("file_a")
    cmp_.add_argument("file_b")
    cmp_.add_argument("--samples", type=int, default=200,
                      help="resampling resolution (default 200)")
    cmp_.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
