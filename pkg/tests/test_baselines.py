"""Zero-forcing and max-SLNR baselines: nulling, power split, optimality."""

import math

import numpy as np
import pytest

from dmsec.baselines import PowerSplit, slnr_beamformers, zf_beamformers
from dmsec.model import ScenarioError, reference_scenario
from dmsec.vonmises import expected_covariance


def _eve_covs(scenario):
    return [expected_covariance(scenario, k, "closed_form")
            for k in range(scenario.num_eves)]


def _slnr_value(scenario, eve_mats, vectors, i):
    """Leakage ratio for user i's vector, computed directly from its definition."""
    channels = [h.entries for h in scenario.user_channels()]
    n = scenario.geometry.num_antennas
    eve_sum = sum(eve_mats) if eve_mats else np.zeros((n, n), dtype=complex)
    leakage = (sum(np.outer(channels[m], channels[m].conj())
                   for m in range(scenario.num_users) if m != i)
               + eve_sum
               + scenario.noise_user * scenario.num_users / scenario.total_power * np.eye(n))
    w = vectors[i]
    return float(np.real(w.conj() @ np.outer(channels[i], channels[i].conj()) @ w)
                 / np.real(w.conj() @ leakage @ w))


class TestPowerSplit:
    def test_default_and_an_fraction(self):
        split = PowerSplit()
        assert split.signal_fraction == 0.9
        assert split.an_fraction == pytest.approx(0.1, rel=1e-12)

    def test_all_signal_is_allowed(self):
        assert PowerSplit(1.0).an_fraction == 0.0

    @pytest.mark.parametrize("bad", [0.0, -0.2, 1.2])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(ValueError):
            PowerSplit(bad)


class TestZeroForcing:
    def test_nulls_every_cross_channel(self, scenario):
        beams = zf_beamformers(scenario, _eve_covs(scenario))
        channels = [h.entries for h in scenario.user_channels()]
        for i, h in enumerate(channels):
            for m, w in enumerate(beams.signal_vectors):
                if m != i:
                    cross = abs(np.vdot(h, w))
                    assert cross <= 1e-10 * np.linalg.norm(h) * np.linalg.norm(w)

    def test_an_invisible_to_users(self, scenario):
        beams = zf_beamformers(scenario)
        for h in scenario.user_channels():
            leak = np.real(h.entries.conj() @ beams.an_matrix @ h.entries)
            assert abs(leak) <= 1e-12 * np.trace(beams.an_matrix).real

    def test_power_split_exact(self, scenario):
        split = PowerSplit(0.8)
        beams = zf_beamformers(scenario, split=split)
        signal_power = sum(np.trace(w).real for w in beams.signal_matrices)
        assert signal_power == pytest.approx(0.8 * scenario.total_power, abs=1e-8)
        assert np.trace(beams.an_matrix).real == pytest.approx(
            0.2 * scenario.total_power, abs=1e-8)
        beams.validate(scenario.total_power)

    def test_full_signal_split_has_zero_an(self, scenario):
        beams = zf_beamformers(scenario, split=PowerSplit(1.0))
        assert np.all(beams.an_matrix == 0)

    def test_single_user_reduces_to_matched_filter(self):
        scen = reference_scenario(user_angles=np.array([np.pi / 6]),
                                  user_distances=np.array([80.0]))
        beams = zf_beamformers(scen)
        h = scen.user_channel(0).entries
        w = beams.signal_vectors[0]
        cosine = abs(np.vdot(h, w)) / (np.linalg.norm(h) * np.linalg.norm(w))
        assert cosine == pytest.approx(1.0, abs=1e-12)

    def test_duplicate_user_directions_are_rejected(self):
        scen = reference_scenario(user_angles=np.array([np.pi / 6, np.pi / 6]),
                                  user_distances=np.array([80.0, 80.0]))
        with pytest.raises(ScenarioError, match="span|rank"):
            zf_beamformers(scen)

    def test_equal_per_user_power(self, scenario):
        beams = zf_beamformers(scenario)
        powers = [float(np.vdot(w, w).real) for w in beams.signal_vectors]
        assert powers[0] == pytest.approx(powers[1], rel=1e-12)


class TestSlnr:
    def test_beats_zero_forcing_on_its_own_objective(self, scenario):
        eve_mats = [c.matrix for c in _eve_covs(scenario)]
        slnr = slnr_beamformers(scenario, eve_mats)
        zf = zf_beamformers(scenario, eve_mats)
        for i in range(scenario.num_users):
            v_slnr = _slnr_value(scenario, eve_mats, slnr.signal_vectors, i)
            v_zf = _slnr_value(scenario, eve_mats, zf.signal_vectors, i)
            assert v_slnr >= v_zf * (1 - 1e-9)

    def test_matches_generalized_eigensolve_bound(self, scenario):
        # the leakage ratio is a generalized Rayleigh quotient, so no unit
        # vector can beat the dominant generalized eigenvalue
        eve_mats = [c.matrix for c in _eve_covs(scenario)]
        slnr = slnr_beamformers(scenario, eve_mats)
        rng = np.random.default_rng(17)
        n = scenario.geometry.num_antennas
        for i in range(scenario.num_users):
            best = _slnr_value(scenario, eve_mats, slnr.signal_vectors, i)
            for _ in range(25):
                probe = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                probes = list(slnr.signal_vectors)
                probes[i] = probe
                assert _slnr_value(scenario, eve_mats, probes, i) <= best * (1 + 1e-9)

    def test_no_eavesdropper_single_user_is_matched_filter(self):
        scen = reference_scenario(user_angles=np.array([np.pi / 6]),
                                  user_distances=np.array([80.0]))
        beams = slnr_beamformers(scen, eve_covariances=())
        h = scen.user_channel(0).entries
        w = beams.signal_vectors[0]
        cosine = abs(np.vdot(h, w)) / (np.linalg.norm(h) * np.linalg.norm(w))
        assert cosine == pytest.approx(1.0, abs=1e-9)

    def test_an_lives_in_user_null_space(self, scenario):
        beams = slnr_beamformers(scenario, _eve_covs(scenario))
        for h in scenario.user_channels():
            leak = np.real(h.entries.conj() @ beams.an_matrix @ h.entries)
            assert abs(leak) <= 1e-12 * np.trace(beams.an_matrix).real

    def test_an_prefers_eavesdropper_directions(self, scenario):
        # shaped AN puts more of its power on the eavesdropper covariance sum
        # than the isotropic null-space alternative does
        eve_mats = [c.matrix for c in _eve_covs(scenario)]
        shaped = slnr_beamformers(scenario, eve_mats).an_matrix
        isotropic = zf_beamformers(scenario, eve_mats).an_matrix
        eve_sum = sum(eve_mats)
        on_eves = lambda q: float(np.trace(eve_sum @ q).real)
        assert on_eves(shaped) > on_eves(isotropic)

    def test_power_split_exact(self, scenario):
        beams = slnr_beamformers(scenario, _eve_covs(scenario), split=PowerSplit(0.75))
        signal_power = sum(np.trace(w).real for w in beams.signal_matrices)
        assert signal_power == pytest.approx(0.75 * scenario.total_power, abs=1e-8)
        assert np.trace(beams.an_matrix).real == pytest.approx(
            0.25 * scenario.total_power, abs=1e-8)
        beams.validate(scenario.total_power)

    def test_rank_one_vectors_present(self, scenario):
        beams = slnr_beamformers(scenario, _eve_covs(scenario))
        assert beams.rank_one_exact == [True, True]
        for v, w in zip(beams.signal_vectors, beams.signal_matrices):
            np.testing.assert_allclose(np.outer(v, v.conj()), w, atol=1e-15)
