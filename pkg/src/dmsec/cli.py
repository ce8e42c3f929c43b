"""Command-line front end.

Subcommands:

* ``design``     - run one designer, print its summary, optionally save the
                   beamformers (.npz) and the iteration trace (.csv).
* ``evaluate``   - Monte Carlo secrecy-rate evaluation of a designer's output
                   (or of previously saved beamformers).
* ``sweep``      - axis sweep over power / antennas / angle spread / number of
                   eavesdroppers; writes the results CSV pair.  ``--seed`` is
                   mandatory: sweeps must be reproducible.
* ``complexity`` - closed-form interior-point cost order for given sizes.

Exit status: 0 on full success, 2 on partial failure (a sweep cell failed or
an input was rejected).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .model import (Scenario, ScenarioError, default_user_angles, load_scenario,
                    reference_scenario)
from .sca import SCAOptions, sca_maee, sca_vmd
from .secrecy import BeamformerSet, monte_carlo_secrecy
from .sweeps import (METHODS, SWEEP_AXES, ComplexityParams, SweepSpec, apply_axis,
                     complexity_estimate, emit_results, run_sweep)
from .vonmises import expected_covariance
from .baselines import slnr_beamformers, zf_beamformers


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scenario")
    group.add_argument("--config", type=Path, default=None,
                       help="scenario config file (key = value lines)")
    group.add_argument("--power-dbm", type=float, default=None)
    group.add_argument("--num-antennas", type=int, default=None)
    group.add_argument("--num-users", type=int, default=None)
    group.add_argument("--num-eves", type=int, default=None)
    group.add_argument("--max-deviation-deg", type=float, default=None,
                       help="maximum direction-angle deviation")
    group.add_argument("--concentration", type=float, default=None,
                       help="von Mises concentration of the angle error")


def _scenario_from_args(args) -> Scenario:
    if args.config is not None:
        scenario = load_scenario(args.config.read_text(encoding="utf-8"))
    else:
        scenario = reference_scenario()
    if args.num_antennas is not None:
        scenario = apply_axis(scenario, "num_antennas", args.num_antennas)
    if args.num_users is not None:
        m = args.num_users
        scenario = replace(scenario, user_angles=default_user_angles(m),
                           user_distances=np.full(m, float(scenario.user_distances[0])))
    if args.num_eves is not None:
        scenario = scenario.with_num_eves(args.num_eves)
    if args.power_dbm is not None:
        scenario = apply_axis(scenario, "transmit_power_dbm", args.power_dbm)
    if args.max_deviation_deg is not None:
        scenario = apply_axis(scenario, "delta_theta_max_deg", args.max_deviation_deg)
    if args.concentration is not None:
        old = scenario.error_model
        scenario = replace(scenario, error_model=replace(
            old, concentration=args.concentration))
    return scenario


def _design_beams(method: str, scenario: Scenario, options: SCAOptions):
    """Returns (beams, sca_result_or_None)."""
    if method == "vmd":
        result = sca_vmd(scenario, options)
        return result.beams, result
    if method == "maee":
        result = sca_maee(scenario, options)
        return result.beams, result
    covariances = [expected_covariance(scenario, k) for k in range(scenario.num_eves)]
    if method == "zf":
        return zf_beamformers(scenario, covariances), None
    return slnr_beamformers(scenario, covariances), None


def _save_beams(beams: BeamformerSet, path: Path) -> None:
    payload = {"signal": np.stack(beams.signal_matrices), "an": beams.an_matrix}
    if beams.signal_vectors is not None:
        payload["vectors"] = np.stack(beams.signal_vectors)
    np.savez(path, **payload)


def _load_beams(path: Path) -> BeamformerSet:
    data = np.load(path)
    vectors = list(data["vectors"]) if "vectors" in data else None
    return BeamformerSet(signal_matrices=list(data["signal"]), an_matrix=data["an"],
                         signal_vectors=vectors)


def _cmd_design(args) -> int:
    scenario = _scenario_from_args(args)
    options = SCAOptions(seed=args.seed, max_iterations=args.max_iterations)
    beams, result = _design_beams(args.method, scenario, options)
    print(f"method = {args.method}")
    print(f"power_used_watts = {beams.total_power():.6f}")
    if result is not None:
        print(f"iterations = {result.iterations}")
        print(f"converged = {result.converged}")
        print(f"objective_bits = {result.objective:.6f}")
        print(f"rank_one_exact = {list(result.beams.rank_one_exact)}")
        if args.trace_csv is not None:
            with open(args.trace_csv, "w", encoding="utf-8") as fh:
                fh.write("iteration,objective_bits,power_watts,status\n")
                for it, obj, power, status in result.iteration_rows():
                    fh.write(f"{it},{obj!r},{power!r},{status}\n")
            print(f"trace_csv = {args.trace_csv}")
    if args.output is not None:
        _save_beams(beams, args.output)
        print(f"output = {args.output}")
    return 0


def _cmd_evaluate(args) -> int:
    scenario = _scenario_from_args(args)
    if args.beams is not None:
        beams = _load_beams(args.beams)
    else:
        options = SCAOptions(seed=args.seed, max_iterations=args.max_iterations)
        beams, _ = _design_beams(args.method, scenario, options)
    report = monte_carlo_secrecy(scenario, beams, trials=args.trials, seed=args.seed)
    print(f"trials = {report.trials}")
    print(f"mean_sum_rate_bits = {report.sum_rate:.6f}")
    print(f"ci_halfwidth = {report.confidence_halfwidth:.6f}")
    per_user = ", ".join(f"{r:.6f}" for r in report.per_user_rates)
    print(f"per_user_rates = [{per_user}]")
    if report.negative_rate_users:
        print(f"negative_rate_users = {report.negative_rate_users}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = _scenario_from_args(args)
    values = [float(v) for v in args.values.split(",")]
    if args.axis in ("num_antennas", "num_eavesdroppers"):
        values = [int(v) for v in values]
    methods = tuple(m.strip() for m in args.methods.split(","))
    spec = SweepSpec(axis=args.axis, values=tuple(values), methods=methods,
                     trials=args.trials, seed=args.seed,
                     sca_options=SCAOptions(max_iterations=args.max_iterations))
    rows = run_sweep(scenario, spec)
    main_path, figure_path = emit_results(rows, args.output)
    print(f"rows = {len(rows)}")
    print(f"output = {main_path}")
    print(f"figure_output = {figure_path}")
    failed = [row for row in rows if row.status != "ok"]
    for row in failed:
        print(f"failed_cell = ({row.axis_value}, {row.method}): {row.status}",
              file=sys.stderr)
    return 2 if failed else 0


def _cmd_complexity(args) -> int:
    params = ComplexityParams(num_antennas=args.num_antennas, num_users=args.num_users,
                              num_eves=args.num_eves, accuracy=args.accuracy,
                              iterations=args.iterations)
    estimate = complexity_estimate(params)
    print(f"n_o = {estimate['n_o']:.0f}")
    print(f"per_iteration_flops_order = {estimate['per_iteration_flops_order']:.6e}")
    print(f"total_order = {estimate['total_order']:.6e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmsec",
        description="Robust directional-modulation secrecy-rate designers and sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="run one designer")
    p_design.add_argument("--method", choices=METHODS, required=True)
    p_design.add_argument("--seed", type=int, default=None)
    p_design.add_argument("--max-iterations", type=int, default=50)
    p_design.add_argument("--output", type=Path, default=None, help="save beams (.npz)")
    p_design.add_argument("--trace-csv", type=Path, default=None,
                          help="save the iteration trace")
    _add_scenario_flags(p_design)
    p_design.set_defaults(func=_cmd_design)

    p_eval = sub.add_parser("evaluate", help="Monte Carlo secrecy evaluation")
    p_eval.add_argument("--method", choices=METHODS, default="vmd")
    p_eval.add_argument("--beams", type=Path, default=None,
                        help="reuse beams saved by design --output")
    p_eval.add_argument("--trials", type=int, default=1000)
    p_eval.add_argument("--seed", type=int, default=None)
    p_eval.add_argument("--max-iterations", type=int, default=50)
    _add_scenario_flags(p_eval)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="axis sweep, CSV output")
    p_sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_sweep.add_argument("--methods", default="vmd,maee,zf,slnr")
    p_sweep.add_argument("--trials", type=int, default=200)
    p_sweep.add_argument("--seed", type=int, required=True,
                         help="sweeps must be seeded for reproducibility")
    p_sweep.add_argument("--max-iterations", type=int, default=50)
    p_sweep.add_argument("--output", type=Path, required=True)
    _add_scenario_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cx = sub.add_parser("complexity", help="interior-point cost order")
    p_cx.add_argument("--num-antennas", type=int, required=True)
    p_cx.add_argument("--num-users", type=int, required=True)
    p_cx.add_argument("--num-eves", type=int, required=True)
    p_cx.add_argument("--accuracy", type=float, default=1e-2)
    p_cx.add_argument("--iterations", type=int, default=1)
    p_cx.set_defaults(func=_cmd_complexity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
