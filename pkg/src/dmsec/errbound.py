"""Norm bound on the eavesdropper channel error induced by an angle error.

First-order perturbation of the ULA channel: rotating the direction angle by
dtheta changes entry p by approximately j alpha_p sin(theta_hat) h_p dtheta,
with alpha_p = 2 pi (p - (N+1)/2) l / lambda the per-element phase rate.
Capping |dtheta| at dtheta_max gives a per-entry cap and, stacking entries,
a Euclidean bound epsilon_k on the whole channel error vector.  The bound
drops second-order terms, so exact perturbations can exceed it slightly
(tests allow a 1.1 slack factor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ArrayGeometry, Scenario, channel


@dataclass(frozen=True)
class ErrorBound:
    """Euclidean cap on an eavesdropper's channel estimation error."""

    eve_index: int
    epsilon: float
    per_entry_caps: np.ndarray  # length N, nonnegative


def element_phase_rates(geometry: ArrayGeometry) -> np.ndarray:
    """alpha_p = 2 pi (p - (N+1)/2) l / lambda for p = 1..N (antisymmetric about center)."""
    p = np.arange(1, geometry.num_antennas + 1, dtype=float)
    return 2 * np.pi * (p - (geometry.num_antennas + 1) / 2) * geometry.spacing / geometry.wavelength


def epsilon_bound(theta_hat: float, distance: float, geometry: ArrayGeometry,
                  max_deviation: float, eve_index: int = 0) -> ErrorBound:
    """First-order norm bound on the channel error for |dtheta| <= max_deviation."""
    if max_deviation < 0:
        raise ValueError(f"max_deviation must be >= 0, got {max_deviation}")
    h = channel(geometry, theta_hat, distance)
    caps = np.abs(element_phase_rates(geometry) * np.sin(theta_hat) * h.entries) * max_deviation
    return ErrorBound(eve_index=eve_index, epsilon=float(np.linalg.norm(caps)),
                      per_entry_caps=caps)


def scenario_error_bounds(scenario: Scenario) -> list[ErrorBound]:
    """One bound per eavesdropper, at the estimated angles."""
    return [epsilon_bound(scenario.eve_angles_est[k], scenario.eve_distances[k],
                          scenario.geometry, scenario.error_model.max_deviation, eve_index=k)
            for k in range(scenario.num_eves)]


def channel_perturbation(theta_hat: float, delta_theta: float,
                         geometry: ArrayGeometry, distance: float) -> np.ndarray:
    """Exact channel difference h(theta_hat + dtheta) - h(theta_hat) (no Taylor form)."""
    return (channel(geometry, theta_hat + delta_theta, distance).entries
            - channel(geometry, theta_hat, distance).entries)
