"""Sweep harness: SweepSpec validation, axis application, determinism, CSV round trip,
and the interior-point cost model."""

import math

import numpy as np
import pytest

from dmsec.baselines import slnr_beamformers
from dmsec.model import dbm_to_watts, reference_scenario
from dmsec.sca import SCAOptions, sca_vmd
from dmsec.secrecy import monte_carlo_secrecy
from dmsec.sweeps import (
    FIGURE_COLUMNS,
    MAIN_COLUMNS,
    METHODS,
    SWEEP_AXES,
    ComplexityParams,
    SweepRow,
    SweepSpec,
    apply_axis,
    complexity_estimate,
    emit_results,
    read_results,
    run_sweep,
)
from dmsec.vonmises import expected_covariance


class TestSweepSpec:
    def test_valid_spec_normalizes_tuples(self):
        spec = SweepSpec(axis="transmit_power_dbm", values=[10.0, 20.0],
                         methods=["zf", "vmd"], trials=5, seed=1)
        assert spec.values == (10.0, 20.0)
        assert spec.methods == ("zf", "vmd")

    def test_rejects_unknown_axis(self):
        with pytest.raises(ValueError, match="axis"):
            SweepSpec(axis="bandwidth", values=(1,), methods=("zf",))

    def test_rejects_non_increasing_values(self):
        with pytest.raises(ValueError, match="increasing"):
            SweepSpec(axis="num_antennas", values=(8, 6), methods=("zf",))
        with pytest.raises(ValueError, match="increasing"):
            SweepSpec(axis="num_antennas", values=(6, 6), methods=("zf",))

    def test_rejects_empty_or_unknown_methods(self):
        with pytest.raises(ValueError, match="nonempty"):
            SweepSpec(axis="num_antennas", values=(6,), methods=())
        with pytest.raises(ValueError, match="unknown methods"):
            SweepSpec(axis="num_antennas", values=(6,), methods=("zf", "mystery"))

    def test_rejects_empty_values_and_bad_trials(self):
        with pytest.raises(ValueError, match="nonempty"):
            SweepSpec(axis="num_antennas", values=(), methods=("zf",))
        with pytest.raises(ValueError, match="trials"):
            SweepSpec(axis="num_antennas", values=(6,), methods=("zf",), trials=0)

    def test_known_axes_and_methods(self):
        assert SWEEP_AXES == ("transmit_power_dbm", "num_antennas",
                              "delta_theta_max_deg", "num_eavesdroppers")
        assert METHODS == ("vmd", "maee", "zf", "slnr")


class TestApplyAxis:
    def test_transmit_power(self, scenario):
        out = apply_axis(scenario, "transmit_power_dbm", 30.0)
        assert out.total_power == pytest.approx(dbm_to_watts(30.0), rel=1e-12)
        assert out.geometry == scenario.geometry

    def test_num_antennas_keeps_spacing_and_carrier(self, scenario):
        out = apply_axis(scenario, "num_antennas", 8)
        assert out.geometry.num_antennas == 8
        assert out.geometry.spacing == scenario.geometry.spacing
        assert out.geometry.carrier_frequency == scenario.geometry.carrier_frequency

    def test_delta_theta_keeps_mean_and_concentration(self, scenario):
        out = apply_axis(scenario, "delta_theta_max_deg", 10.0)
        assert out.error_model.max_deviation == pytest.approx(math.radians(10.0))
        assert out.error_model.mean == scenario.error_model.mean
        assert out.error_model.concentration == scenario.error_model.concentration

    def test_num_eavesdroppers_extends_angle_ladder(self, scenario):
        out = apply_axis(scenario, "num_eavesdroppers", 5)
        assert out.num_eves == 5
        np.testing.assert_allclose(out.eve_angles_est[:4], scenario.eve_angles_est)
        assert out.eve_angles_est[-1] == pytest.approx(7 * np.pi / 12)
        np.testing.assert_allclose(out.eve_distances, 50.0)

    def test_unknown_axis_raises(self, scenario):
        with pytest.raises(ValueError, match="unknown axis"):
            apply_axis(scenario, "carrier", 1.0)


class TestRunSweep:
    def test_row_grid_and_order(self, scenario):
        spec = SweepSpec(axis="transmit_power_dbm", values=(30.0, 40.0),
                         methods=("zf", "slnr"), trials=4, seed=2)
        rows = run_sweep(scenario, spec)
        assert [(r.axis_value, r.method) for r in rows] == [
            (30.0, "zf"), (30.0, "slnr"), (40.0, "zf"), (40.0, "slnr")]
        assert all(r.axis == "transmit_power_dbm" for r in rows)
        assert all(r.status == "ok" for r in rows)
        assert all(r.iterations == 0 for r in rows)  # closed-form baselines

    def test_single_cell_reproducible_from_seed_derivation(self, scenario):
        spec = SweepSpec(axis="transmit_power_dbm", values=(40.0,),
                         methods=("slnr",), trials=16, seed=5)
        row, = run_sweep(scenario, spec)

        child, = np.random.SeedSequence(5).spawn(1)
        design_seed, eval_seed = (int(s.generate_state(1)[0]) for s in child.spawn(2))
        variant = apply_axis(scenario, "transmit_power_dbm", 40.0)
        covs = [expected_covariance(variant, k) for k in range(variant.num_eves)]
        report = monte_carlo_secrecy(variant, slnr_beamformers(variant, covs),
                                     trials=16, seed=eval_seed)
        assert row.seed == design_seed
        assert row.mean_rate == report.sum_rate
        assert row.ci_halfwidth == report.confidence_halfwidth

    def test_sca_cell_records_iterations_and_seed(self, tiny_scenario):
        spec = SweepSpec(axis="transmit_power_dbm", values=(40.0,), methods=("vmd",),
                         trials=8, seed=9, sca_options=SCAOptions(max_iterations=25))
        row, = run_sweep(tiny_scenario, spec)
        assert row.status == "ok"

        child, = np.random.SeedSequence(9).spawn(1)
        design_seed, _ = (int(s.generate_state(1)[0]) for s in child.spawn(2))
        direct = sca_vmd(apply_axis(tiny_scenario, "transmit_power_dbm", 40.0),
                         SCAOptions(max_iterations=25, seed=design_seed))
        assert row.iterations == direct.iterations

    def test_failed_cell_is_recorded_not_raised(self, scenario):
        # two users need at least three antennas, so N=2 must fail per-cell
        spec = SweepSpec(axis="num_antennas", values=(2, 6), methods=("zf",),
                         trials=4, seed=3)
        rows = run_sweep(scenario, spec)
        assert len(rows) == 2
        assert rows[0].status.startswith("failed:")
        assert math.isnan(rows[0].mean_rate)
        assert rows[0].iterations == 0
        assert rows[1].status == "ok"
        assert math.isfinite(rows[1].mean_rate)

    def test_identical_seeds_identical_rows(self, scenario):
        spec = SweepSpec(axis="delta_theta_max_deg", values=(2.0, 6.0),
                         methods=("zf",), trials=8, seed=7)
        a = run_sweep(scenario, spec)
        b = run_sweep(scenario, spec)
        for ra, rb in zip(a, b):
            assert (ra.axis_value, ra.method, ra.mean_rate, ra.ci_halfwidth,
                    ra.iterations, ra.seed, ra.status) == (
                rb.axis_value, rb.method, rb.mean_rate, rb.ci_halfwidth,
                rb.iterations, rb.seed, rb.status)


class TestPersistence:
    def _rows(self, scenario):
        spec = SweepSpec(axis="num_antennas", values=(2, 6), methods=("zf",),
                         trials=4, seed=3)
        return run_sweep(scenario, spec)

    def test_round_trip_including_nan(self, scenario, tmp_path):
        rows = self._rows(scenario)
        main, figure = emit_results(rows, tmp_path / "antennas.csv")
        assert main.name == "antennas.csv"
        assert figure.name == "antennas_figure.csv"

        back = read_results(main, axis_name="num_antennas")
        assert len(back) == len(rows)
        for orig, rec in zip(rows, back):
            assert rec.axis == "num_antennas"
            assert rec.axis_value == orig.axis_value
            assert rec.method == orig.method
            assert (rec.mean_rate == orig.mean_rate
                    or (math.isnan(rec.mean_rate) and math.isnan(orig.mean_rate)))
            assert rec.iterations == orig.iterations
            assert rec.seed == orig.seed
            assert rec.status == orig.status

    def test_headers(self, scenario, tmp_path):
        main, figure = emit_results(self._rows(scenario), tmp_path / "t.csv")
        assert main.read_text().splitlines()[0] == ",".join(MAIN_COLUMNS)
        assert figure.read_text().splitlines()[0] == ",".join(FIGURE_COLUMNS)

    def test_figure_file_carries_axis_name_and_value(self, scenario, tmp_path):
        _, figure = emit_results(self._rows(scenario), tmp_path / "t.csv")
        first = figure.read_text().splitlines()[1].split(",")
        assert first[0] == "num_antennas"
        assert float(first[1]) == 2.0
        assert first[2] == "zf"

    def test_identically_seeded_sweeps_give_identical_figure_files(self, scenario, tmp_path):
        a = emit_results(self._rows(scenario), tmp_path / "a.csv")[1].read_bytes()
        b = emit_results(self._rows(scenario), tmp_path / "b.csv")[1].read_bytes()
        assert a == b

    def test_empty_table_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="empty"):
            emit_results([], tmp_path / "x.csv")

    def test_read_rejects_foreign_header(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            read_results(bad)

    def test_unwritable_path_raises_oserror(self, scenario, tmp_path):
        rows = self._rows(scenario)
        with pytest.raises(OSError, match="could not write"):
            emit_results(rows, tmp_path / "missing_dir" / "x.csv")


class TestComplexityEstimate:
    def test_scalar_count_frozen_example(self):
        # (K+3)M + K + (M+1)N^2 at N=4, M=2, K=1: 8 + 1 + 48 = 57
        out = complexity_estimate(ComplexityParams(num_antennas=4, num_users=2, num_eves=1))
        assert out["n_o"] == 57.0

    def test_iterations_scale_total_linearly(self):
        one = complexity_estimate(ComplexityParams(4, 2, 1, iterations=1))
        three = complexity_estimate(ComplexityParams(4, 2, 1, iterations=3))
        assert three["total_order"] == pytest.approx(3 * one["total_order"], rel=1e-12)
        assert three["per_iteration_flops_order"] == one["per_iteration_flops_order"]

    def test_monotone_in_every_dimension(self):
        grid_n, grid_m, grid_k = (2, 4, 8), (1, 2, 3), (1, 2, 4)
        for m in grid_m:
            for k in grid_k:
                costs = [complexity_estimate(ComplexityParams(n, m, k))
                         ["per_iteration_flops_order"] for n in grid_n if n > m]
                assert all(a < b for a, b in zip(costs, costs[1:]))
        for n in grid_n:
            for k in grid_k:
                costs = [complexity_estimate(ComplexityParams(n, m, k))
                         ["per_iteration_flops_order"] for m in grid_m if m < n]
                assert all(a < b for a, b in zip(costs, costs[1:]))
        for n in grid_n:
            for m in grid_m:
                if m >= n:
                    continue
                costs = [complexity_estimate(ComplexityParams(n, m, k))
                         ["per_iteration_flops_order"] for k in grid_k]
                assert all(a < b for a, b in zip(costs, costs[1:]))

    def test_sharper_accuracy_costs_more(self):
        loose = complexity_estimate(ComplexityParams(4, 2, 1, accuracy=1e-1))
        tight = complexity_estimate(ComplexityParams(4, 2, 1, accuracy=1e-4))
        assert tight["per_iteration_flops_order"] > loose["per_iteration_flops_order"]

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            ComplexityParams(0, 1, 1)
        with pytest.raises(ValueError):
            ComplexityParams(4, 2, 1, accuracy=1.0)
        with pytest.raises(ValueError):
            ComplexityParams(4, 2, 1, iterations=0)
