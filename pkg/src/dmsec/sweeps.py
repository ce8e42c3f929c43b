"""Batch experiment sweeps, complexity estimates, and CSV persistence.

A sweep varies one scenario axis (transmit power, antenna count, maximum
angle deviation, or eavesdropper count), runs each requested designer at
every axis value, Monte Carlo-evaluates the resulting beamformers against
sampled true eavesdropper angles, and records one row per (value, method)
cell.  Cell seeds are spawned deterministically from the sweep seed, so a
sweep is reproducible bit-for-bit; per-cell failures are recorded in the
row's status text and never abort the sweep.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .baselines import PowerSplit, slnr_beamformers, zf_beamformers
from .model import ArrayGeometry, Scenario, VonMisesParams, dbm_to_watts
from .sca import SCAOptions, sca_maee, sca_vmd
from .secrecy import monte_carlo_secrecy
from .vonmises import expected_covariance

SWEEP_AXES = ("transmit_power_dbm", "num_antennas", "delta_theta_max_deg",
              "num_eavesdroppers")
METHODS = ("vmd", "maee", "zf", "slnr")

MAIN_COLUMNS = ("axis", "method", "mean_rate", "ci_halfwidth", "iterations",
                "wall_ms", "seed", "status")
FIGURE_COLUMNS = ("axis", "value", "method", "mean_rate", "ci_halfwidth", "status")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    methods: tuple[str, ...]
    trials: int = 200
    seed: int = 0
    sca_options: SCAOptions = SCAOptions()

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        values = tuple(self.values)
        if not values:
            raise ValueError("values must be nonempty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("values must be strictly increasing")
        methods = tuple(self.methods)
        if not methods:
            raise ValueError("methods must be nonempty")
        unknown = set(methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "methods", methods)


@dataclass(frozen=True)
class ComplexityParams:
    num_antennas: int
    num_users: int
    num_eves: int
    accuracy: float = 1e-2
    iterations: int = 1

    def __post_init__(self):
        if min(self.num_antennas, self.num_users, self.num_eves, self.iterations) < 1:
            raise ValueError("dimensions and iterations must be positive")
        if not 0.0 < self.accuracy < 1.0:
            raise ValueError("accuracy must be in (0, 1)")


@dataclass
class SweepRow:
    axis: str
    method: str
    axis_value: float
    mean_rate: float
    ci_halfwidth: float
    iterations: int
    wall_ms: float
    seed: int
    status: str = "ok"


def apply_axis(scenario: Scenario, axis: str, value) -> Scenario:
    """Return a scenario variant with one swept quantity replaced."""
    if axis == "transmit_power_dbm":
        return replace(scenario, total_power=dbm_to_watts(float(value)))
    if axis == "num_antennas":
        geometry = ArrayGeometry(num_antennas=int(value),
                                 spacing=scenario.geometry.spacing,
                                 carrier_frequency=scenario.geometry.carrier_frequency)
        return replace(scenario, geometry=geometry)
    if axis == "delta_theta_max_deg":
        old = scenario.error_model
        return replace(scenario, error_model=VonMisesParams(
            mean=old.mean, concentration=old.concentration,
            max_deviation=math.radians(float(value))))
    if axis == "num_eavesdroppers":
        return scenario.with_num_eves(int(value))
    raise ValueError(f"unknown axis {axis!r}")


def _design(method: str, scenario: Scenario, options: SCAOptions):
    """Run one designer; returns (beams, sca_iterations)."""
    if method == "vmd":
        result = sca_vmd(scenario, options)
        return result.beams, result.iterations
    if method == "maee":
        result = sca_maee(scenario, options)
        return result.beams, result.iterations
    covariances = [expected_covariance(scenario, k) for k in range(scenario.num_eves)]
    if method == "zf":
        return zf_beamformers(scenario, covariances), 0
    if method == "slnr":
        return slnr_beamformers(scenario, covariances), 0
    raise ValueError(f"unknown method {method!r}")


def run_sweep(base_scenario: Scenario, spec: SweepSpec) -> list[SweepRow]:
    """One row per (axis value, method); failures get status text, not raises."""
    root = np.random.SeedSequence(spec.seed)
    cells = [(value, method) for value in spec.values for method in spec.methods]
    children = root.spawn(len(cells))

    rows = []
    for (value, method), child in zip(cells, children):
        design_seed, eval_seed = (int(s.generate_state(1)[0]) for s in child.spawn(2))
        started = time.perf_counter()
        try:
            scenario = apply_axis(base_scenario, spec.axis, value)
            options = replace(spec.sca_options, seed=design_seed)
            beams, iterations = _design(method, scenario, options)
            report = monte_carlo_secrecy(scenario, beams, trials=spec.trials,
                                         seed=eval_seed)
            rows.append(SweepRow(
                axis=spec.axis, method=method, axis_value=float(value),
                mean_rate=float(report.sum_rate),
                ci_halfwidth=float(report.confidence_halfwidth),
                iterations=iterations,
                wall_ms=(time.perf_counter() - started) * 1e3,
                seed=design_seed))
        except Exception as exc:  # noqa: BLE001 - per-cell failures must not abort
            rows.append(SweepRow(
                axis=spec.axis, method=method, axis_value=float(value),
                mean_rate=float("nan"), ci_halfwidth=float("nan"), iterations=0,
                wall_ms=(time.perf_counter() - started) * 1e3,
                seed=design_seed, status=f"failed: {exc}"))
    return rows


def complexity_estimate(params: ComplexityParams) -> dict[str, float]:
    """Interior-point arithmetic-cost order for one subproblem, and its total.

    n_o counts the scalar decision variables: (K+3)M + K real scalars plus
    (M+1) Hermitian N x N blocks.  The per-iteration order multiplies the
    barrier-parameter factor sqrt(sum of cone sizes) by the usual assembly +
    factorization polynomial over the exponential-cone rows (size 2N+2
    blocks), the K*M epigraph rows, and the PSD blocks, times ln(1/accuracy).
    """
    n, m, k = params.num_antennas, params.num_users, params.num_eves
    n_o = (k + 3) * m + k + (m + 1) * n ** 2
    rows_exp = k * m + k + 2 * m + 1     # exponential/linearized rows, size 2N+2
    size_exp = 2 * n + 2
    barrier = math.sqrt(rows_exp * size_exp + k * m + (m + 1) * n)
    assembly = (n_o ** 2
                + n_o * (rows_exp * size_exp ** 2 + k * m ** 2 + (m + 1) * n ** 2)
                + rows_exp * size_exp ** 3 + k * m ** 3 + (m + 1) * n ** 3)
    per_iteration = barrier * n_o * assembly * math.log(1.0 / params.accuracy)
    return {
        "n_o": float(n_o),
        "per_iteration_flops_order": per_iteration,
        "total_order": per_iteration * params.iterations,
    }


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))   # repr round-trips doubles exactly
    return str(value)


def emit_results(rows: list[SweepRow], path) -> tuple[Path, Path]:
    """Write the result table and its plot-ready companion.

    The ``axis`` column holds the swept value (the x-coordinate of the
    figure analog); the swept quantity's name is recorded in the companion
    file.  The main CSV carries every column including wall time; the
    companion ``*_figure.csv`` drops timing and seeds so that two
    identically seeded sweeps produce byte-identical files.
    """
    if not rows:
        raise ValueError("result table is empty")
    path = Path(path)
    figure_path = path.with_name(path.stem + "_figure.csv")
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(MAIN_COLUMNS)
            for row in rows:
                writer.writerow([_fmt(row.axis_value), row.method, _fmt(row.mean_rate),
                                 _fmt(row.ci_halfwidth), row.iterations,
                                 _fmt(row.wall_ms), row.seed, row.status])
        with figure_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(FIGURE_COLUMNS)
            for row in rows:
                writer.writerow([row.axis, _fmt(row.axis_value), row.method,
                                 _fmt(row.mean_rate), _fmt(row.ci_halfwidth),
                                 row.status])
    except OSError as exc:
        raise OSError(f"could not write results near {path}: {exc}") from exc
    return path, figure_path


def read_results(path, axis_name: str = "") -> list[SweepRow]:
    """Parse a main results CSV back into rows (inverse of emit_results).

    The swept quantity's name is not stored in the main CSV; pass axis_name
    to restore it, otherwise rows come back with an empty axis field.
    """
    path = Path(path)
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != MAIN_COLUMNS:
            raise ValueError(f"unexpected header in {path}: {header}")
        for rec in reader:
            value, method, mean_rate, ci, iterations, wall_ms, seed, status = rec
            rows.append(SweepRow(axis=axis_name, method=method, axis_value=float(value),
                                 mean_rate=float(mean_rate), ci_halfwidth=float(ci),
                                 iterations=int(iterations), wall_ms=float(wall_ms),
                                 seed=int(seed), status=status))
    return rows
