"""Channel-error norm bound: formula oracles, scaling laws, sampled containment."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmsec.errbound import (
    ErrorBound,
    channel_perturbation,
    element_phase_rates,
    epsilon_bound,
    scenario_error_bounds,
)
from dmsec.model import ArrayGeometry, channel, path_loss
from dmsec.vonmises import sample_truncated_vonmises

GEO6 = ArrayGeometry.half_wavelength(6, 3e9)


class TestElementPhaseRates:
    def test_frozen_half_wavelength_n6(self):
        # 2 pi (p - 3.5) (lambda/2) / lambda = pi (p - 3.5)
        expected = np.pi * np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
        np.testing.assert_allclose(element_phase_rates(GEO6), expected, rtol=1e-15)

    def test_antisymmetric_about_center(self):
        for n in (2, 3, 5, 8):
            rates = element_phase_rates(ArrayGeometry.half_wavelength(n, 3e9))
            np.testing.assert_allclose(rates, -rates[::-1], atol=1e-12)

    def test_odd_array_center_element_is_zero(self):
        rates = element_phase_rates(ArrayGeometry.half_wavelength(5, 3e9))
        assert rates[2] == 0.0


class TestEpsilonBound:
    def test_independent_formula_equal_magnitude_entries(self):
        # every |h_p| = sqrt(g/N), so the bound collapses to
        # dmax |sin theta| sqrt(g/N) * ||pi (p - 3.5)||_2 with the norm
        # sqrt(pi^2 (2.5^2 + 1.5^2 + 0.5^2) * 2) = pi sqrt(17.5)
        dmax = math.radians(6.0)
        theta = math.pi / 4
        gain = path_loss(50.0, 3e9)
        expected = dmax * abs(math.sin(theta)) * math.sqrt(gain / 6) * math.pi * math.sqrt(17.5)
        bound = epsilon_bound(theta, 50.0, GEO6, dmax)
        assert bound.epsilon == pytest.approx(expected, rel=1e-12)

    def test_zero_deviation_gives_zero(self):
        assert epsilon_bound(math.pi / 4, 50.0, GEO6, 0.0).epsilon == 0.0

    def test_broadside_angle_gives_zero(self):
        # sin(0) = 0: to first order the channel is stationary at broadside
        assert epsilon_bound(0.0, 50.0, GEO6, math.radians(6)).epsilon == 0.0

    def test_epsilon_is_norm_of_caps(self):
        bound = epsilon_bound(math.pi / 3, 50.0, GEO6, math.radians(6))
        assert np.all(bound.per_entry_caps >= 0)
        assert bound.epsilon == pytest.approx(float(np.linalg.norm(bound.per_entry_caps)),
                                              rel=1e-15)

    @given(scale=st.floats(0.1, 10.0))
    def test_linear_in_max_deviation(self, scale):
        base = epsilon_bound(math.pi / 4, 50.0, GEO6, 0.05)
        scaled = epsilon_bound(math.pi / 4, 50.0, GEO6, 0.05 * scale)
        assert scaled.epsilon == pytest.approx(base.epsilon * scale, rel=1e-12)

    def test_monotone_in_sine_of_angle(self):
        dmax = math.radians(6)
        values = [epsilon_bound(t, 50.0, GEO6, dmax).epsilon
                  for t in (0.1, 0.4, 0.9, math.pi / 2)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_halving_distance_doubles_bound(self):
        # free-space gain goes as 1/d^2, channel norm as 1/d
        near = epsilon_bound(math.pi / 4, 25.0, GEO6, 0.1)
        far = epsilon_bound(math.pi / 4, 50.0, GEO6, 0.1)
        assert near.epsilon == pytest.approx(2 * far.epsilon, rel=1e-12)

    def test_sign_of_angle_is_irrelevant(self):
        plus = epsilon_bound(math.pi / 5, 50.0, GEO6, 0.1)
        minus = epsilon_bound(-math.pi / 5, 50.0, GEO6, 0.1)
        assert plus.epsilon == pytest.approx(minus.epsilon, rel=1e-14)

    def test_rejects_negative_deviation(self):
        with pytest.raises(ValueError):
            epsilon_bound(math.pi / 4, 50.0, GEO6, -0.01)


class TestScenarioErrorBounds:
    def test_one_bound_per_eve_matching_direct_calls(self, scenario):
        bounds = scenario_error_bounds(scenario)
        assert len(bounds) == scenario.num_eves
        for k, bound in enumerate(bounds):
            assert isinstance(bound, ErrorBound)
            assert bound.eve_index == k
            direct = epsilon_bound(scenario.eve_angles_est[k], scenario.eve_distances[k],
                                   scenario.geometry, scenario.error_model.max_deviation)
            assert bound.epsilon == pytest.approx(direct.epsilon, rel=1e-15)

    def test_steeper_estimated_angles_get_larger_bounds(self, scenario):
        # reference eves sit at -15, 15, 45, 75 degrees: |sin| increases
        eps = [b.epsilon for b in scenario_error_bounds(scenario)]
        assert eps[0] == pytest.approx(eps[1], rel=1e-12)
        assert eps[1] < eps[2] < eps[3]


class TestChannelPerturbation:
    def test_zero_error_gives_zero_vector(self):
        pert = channel_perturbation(math.pi / 4, 0.0, GEO6, 50.0)
        assert np.all(pert == 0)

    def test_first_order_term_and_quadratic_remainder(self):
        # exact difference minus j alpha_p sin(theta) h_p dtheta leaves an
        # O(dtheta^2) remainder: halving dtheta divides the error by ~4
        theta, dist = math.pi / 4, 50.0
        h = channel(GEO6, theta, dist).entries
        rates = element_phase_rates(GEO6)
        errs = []
        for dt in (1e-3, 5e-4):
            first_order = 1j * rates * math.sin(theta) * h * dt
            errs.append(float(np.linalg.norm(
                channel_perturbation(theta, dt, GEO6, dist) - first_order)))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)

    def test_not_antisymmetric_in_error_sign(self):
        # the dropped second-order term is even in dtheta, so +/- deviations
        # perturb by different amounts away from broadside
        dt = math.radians(6)
        plus = np.linalg.norm(channel_perturbation(math.pi / 4, dt, GEO6, 50.0))
        minus = np.linalg.norm(channel_perturbation(math.pi / 4, -dt, GEO6, 50.0))
        assert abs(plus - minus) > 1e-3 * plus

    def test_sampled_errors_stay_within_slack_bound(self, scenario):
        # third estimated angle (45 degrees): draw angle errors from the
        # scenario's truncated von Mises model and compare the exact channel
        # difference to the first-order cap with the documented 1.1 slack
        k = 2
        theta = scenario.eve_angles_est[k]
        dist = scenario.eve_distances[k]
        bound = epsilon_bound(theta, dist, scenario.geometry,
                              scenario.error_model.max_deviation)
        rng = np.random.default_rng(20240915)
        draws = sample_truncated_vonmises(scenario.error_model, rng, size=4000)
        norms = [float(np.linalg.norm(channel_perturbation(theta, dt, scenario.geometry, dist)))
                 for dt in np.asarray(draws)]
        assert max(norms) <= 1.1 * bound.epsilon
        assert max(norms) >= 0.5 * bound.epsilon
