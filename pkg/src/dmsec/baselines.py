"""Reference beamformer designs: zero-forcing and SLNR.

Both split the power budget with a fixed fraction (default 0.9) between
confidential signals (equal per-user shares) and artificial noise, and both
return exact rank-one signal beamformers, so they serve as non-iterative
comparison points for the SCA designers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import Scenario, ScenarioError
from .secrecy import BeamformerSet
from .vonmises import ExpectedCovariance

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class PowerSplit:
    """Fraction of the budget spent on confidential signal vs artificial noise."""

    signal_fraction: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.signal_fraction <= 1.0:
            raise ValueError("signal_fraction must be in (0, 1]")

    @property
    def an_fraction(self) -> float:
        return 1.0 - self.signal_fraction


def _covariance_matrices(covariances) -> list[np.ndarray]:
    return [c.matrix if isinstance(c, ExpectedCovariance) else np.asarray(c)
            for c in covariances]


def _user_channel_matrix(scenario: Scenario) -> np.ndarray:
    return np.column_stack([h.entries for h in scenario.user_channels()])


def _user_null_projector(scenario: Scenario) -> np.ndarray:
    """Orthogonal projector onto the joint null space of all user channels."""
    h_all = _user_channel_matrix(scenario)
    u, s, _ = np.linalg.svd(h_all, full_matrices=True)
    rank = int(np.sum(s > _RANK_TOL * s[0]))
    if rank < scenario.num_users:
        raise ScenarioError("user channel matrix is rank deficient; "
                            "null-space AN is undefined")
    basis = u[:, rank:]
    return basis @ basis.conj().T


def _an_budget_matrix(scenario: Scenario, split: PowerSplit, shaped: np.ndarray | None,
                      ) -> np.ndarray:
    """Scale an AN shape to (1-beta) P_t; isotropic null-space default."""
    n = scenario.geometry.num_antennas
    an_power = split.an_fraction * scenario.total_power
    if an_power == 0.0:
        return np.zeros((n, n), dtype=complex)
    projector = _user_null_projector(scenario)
    if shaped is not None:
        shaped = projector @ shaped @ projector
        trace = float(np.trace(shaped).real)
        if trace > _RANK_TOL:
            return an_power * shaped / trace
    # isotropic over the null space
    return an_power * projector / float(np.trace(projector).real)


def zf_beamformers(scenario: Scenario, eve_covariances=(),
                   split: PowerSplit = PowerSplit()) -> BeamformerSet:
    """Zero-forcing signals plus isotropic null-space artificial noise.

    Each user's beam is its channel projected onto the null space of the
    other users' channels (so inter-user interference vanishes exactly), with
    equal per-user power.  ``eve_covariances`` is accepted for signature
    parity with the SLNR design but does not influence the construction.
    """
    del eve_covariances  # zero-forcing ignores eavesdropper statistics
    m = scenario.num_users
    per_user = split.signal_fraction * scenario.total_power / m
    channels = [h.entries for h in scenario.user_channels()]

    vectors = []
    for i, h_i in enumerate(channels):
        others = [channels[mm] for mm in range(m) if mm != i]
        residual = h_i.copy()
        if others:
            basis = scipy.linalg.orth(np.column_stack(others), rcond=_RANK_TOL)
            residual = h_i - basis @ (basis.conj().T @ h_i)
        norm = np.linalg.norm(residual)
        if norm <= _RANK_TOL * np.linalg.norm(h_i):
            raise ScenarioError(f"user {i} channel lies in the span of the others; "
                                "zero-forcing direction is undefined")
        vectors.append(math.sqrt(per_user) * residual / norm)

    an = _an_budget_matrix(scenario, split, shaped=None)
    return BeamformerSet.from_vectors(vectors, an)


def slnr_beamformers(scenario: Scenario, eve_covariances=(),
                     split: PowerSplit = PowerSplit()) -> BeamformerSet:
    """Max-SLNR signals plus artificial noise shaped toward the eavesdroppers.

    Each beam maximizes the ratio of the user's received power to the leakage
    into other users and (expected) eavesdropper channels plus scaled noise -
    the dominant generalized eigenvector of the corresponding matrix pencil.
    The AN covariance is the eavesdropper covariance sum projected onto the
    joint user null space (isotropic there if that projection vanishes).
    """
    m, n = scenario.num_users, scenario.geometry.num_antennas
    per_user = split.signal_fraction * scenario.total_power / m
    channels = [h.entries for h in scenario.user_channels()]
    eve_mats = _covariance_matrices(eve_covariances)
    eve_sum = sum(eve_mats) if eve_mats else np.zeros((n, n), dtype=complex)
    noise_load = scenario.noise_user * m / scenario.total_power

    vectors = []
    for i, h_i in enumerate(channels):
        signal = np.outer(h_i, h_i.conj())
        leakage = (sum(np.outer(channels[mm], channels[mm].conj())
                       for mm in range(m) if mm != i)
                   + eve_sum + noise_load * np.eye(n))
        eigvals, eigvecs = scipy.linalg.eigh(signal, leakage)
        direction = eigvecs[:, -1]
        vectors.append(math.sqrt(per_user) * direction / np.linalg.norm(direction))

    an = _an_budget_matrix(scenario, split, shaped=eve_sum if eve_mats else None)
    return BeamformerSet.from_vectors(vectors, an)
