"""Worst-case sum secrecy rate and its Monte Carlo evaluation.

Per-user secrecy against the strongest eavesdropper:

    R_i = log2(1 + SINR_user_i) - log2(1 + max_k SINR_eve_{i,k}),
    R_s = sum_i R_i,

with the (i, k) eavesdropper SINR measuring how well eavesdropper k decodes
stream i.  Negative per-user rates are reported as-is (no clipping); the
report flags them separately.  Beamformers are covariance matrices W_i / Q;
rank-one vector designs coincide with their outer products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import ChannelVector, Scenario
from .vonmises import sample_truncated_vonmises


@dataclass(frozen=True)
class BeamformerSet:
    """M signal covariances, one artificial-noise covariance, optional vectors."""

    signal_matrices: list[np.ndarray]        # M Hermitian PSD, N x N
    an_matrix: np.ndarray                    # Hermitian PSD, N x N
    signal_vectors: list[np.ndarray] | None = None  # after rank-one extraction
    rank_one_exact: list[bool] | None = None

    @property
    def num_users(self) -> int:
        return len(self.signal_matrices)

    def total_power(self) -> float:
        return float(sum(np.trace(w).real for w in self.signal_matrices)
                     + np.trace(self.an_matrix).real)

    def validate(self, power_budget: float) -> None:
        """Assert power and PSD invariants (small numerical slack)."""
        if self.total_power() > power_budget * (1 + 1e-6):
            raise ValueError(f"power budget violated: {self.total_power()} > {power_budget}")
        for name, mat in [("an_matrix", self.an_matrix)] + [
                (f"signal_matrices[{i}]", w) for i, w in enumerate(self.signal_matrices)]:
            trace = np.trace(mat).real
            if trace > 0 and np.linalg.eigvalsh(mat).min() < -1e-8 * trace:
                raise ValueError(f"{name} is not PSD within tolerance")

    @staticmethod
    def from_vectors(vectors: list[np.ndarray], an_matrix: np.ndarray) -> "BeamformerSet":
        return BeamformerSet(
            signal_matrices=[np.outer(w, w.conj()) for w in vectors],
            an_matrix=np.asarray(an_matrix, dtype=complex),
            signal_vectors=[np.asarray(w, dtype=complex) for w in vectors],
            rank_one_exact=[True] * len(vectors),
        )


@dataclass(frozen=True)
class SecrecyReport:
    """Rates in bits/s/Hz; eve_sinrs[i, k] is eavesdropper k's SINR on stream i."""

    per_user_rates: np.ndarray     # length M
    sum_rate: float
    user_sinrs: np.ndarray         # length M
    eve_sinrs: np.ndarray          # M x K
    trials: int = 1
    confidence_halfwidth: float | None = None  # 95% CI (Monte Carlo only)
    negative_rate_users: tuple = ()


def _entries(h) -> np.ndarray:
    return h.entries if isinstance(h, ChannelVector) else np.asarray(h, dtype=complex)


def _quad_form(h: np.ndarray, mat: np.ndarray) -> float:
    return float(np.real(h.conj() @ mat @ h))


def sinr_user(user_channels, beams: BeamformerSet, i: int, noise_user: float) -> float:
    """SINR of user i: own-stream power over inter-user + AN + noise power."""
    h = _entries(user_channels[i])
    signal = _quad_form(h, beams.signal_matrices[i])
    interference = sum(_quad_form(h, w) for m, w in enumerate(beams.signal_matrices) if m != i)
    interference += _quad_form(h, beams.an_matrix) + noise_user
    return signal / interference


def sinr_eve(eve_channel, beams: BeamformerSet, i: int, noise_eve: float) -> float:
    """SINR of an eavesdropper decoding stream i (other streams + AN are interference)."""
    h = _entries(eve_channel)
    signal = _quad_form(h, beams.signal_matrices[i])
    interference = sum(_quad_form(h, w) for m, w in enumerate(beams.signal_matrices) if m != i)
    interference += _quad_form(h, beams.an_matrix) + noise_eve
    return signal / interference


def sum_secrecy_rate(scenario: Scenario, true_eve_angles, beams: BeamformerSet) -> SecrecyReport:
    """Worst-case sum secrecy rate with eavesdroppers at the given true angles."""
    true_eve_angles = np.atleast_1d(np.asarray(true_eve_angles, dtype=float))
    if len(true_eve_angles) != scenario.num_eves:
        raise ValueError(f"expected {scenario.num_eves} true eve angles, got {len(true_eve_angles)}")
    user_chs = scenario.user_channels()
    eve_chs = [scenario.eve_channel(k, angle=true_eve_angles[k]) for k in range(scenario.num_eves)]

    m, k = scenario.num_users, scenario.num_eves
    user_sinrs = np.array([sinr_user(user_chs, beams, i, scenario.noise_user) for i in range(m)])
    eve_sinrs = np.array([[sinr_eve(eve_chs[kk], beams, i, scenario.noise_eve)
                           for kk in range(k)] for i in range(m)])
    rates = np.log2(1 + user_sinrs) - np.log2(1 + eve_sinrs.max(axis=1))
    return SecrecyReport(
        per_user_rates=rates,
        sum_rate=float(rates.sum()),
        user_sinrs=user_sinrs,
        eve_sinrs=eve_sinrs,
        negative_rate_users=tuple(np.flatnonzero(rates < 0).tolist()),
    )


def monte_carlo_secrecy(scenario: Scenario, beams: BeamformerSet, trials: int,
                        seed) -> SecrecyReport:
    """Average the worst-case rate over sampled angle errors (one draw per eve per trial).

    Deterministic given the seed; the 95% confidence halfwidth comes from the
    sample standard deviation of the per-trial sum rates.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    m, kk = scenario.num_users, scenario.num_eves
    n = scenario.geometry.num_antennas

    errors = sample_truncated_vonmises(scenario.error_model, rng, size=(trials, kk))
    # (trials, K, N) true eavesdropper channels
    eve_entries = np.empty((trials, kk, n), dtype=complex)
    for k in range(kk):
        for t in range(trials):
            eve_entries[t, k] = scenario.eve_channel(
                k, angle=scenario.eve_angles_est[k] + errors[t, k]).entries

    def eve_powers(mat: np.ndarray) -> np.ndarray:  # (trials, K)
        return np.einsum("tkn,nm,tkm->tk", eve_entries.conj(), mat, eve_entries).real

    sig_eve = np.stack([eve_powers(w) for w in beams.signal_matrices])  # (M, trials, K)
    an_eve = eve_powers(beams.an_matrix)
    tot_eve = sig_eve.sum(axis=0) + an_eve + scenario.noise_eve        # (trials, K)

    user_chs = scenario.user_channels()
    user_sinrs = np.array([sinr_user(user_chs, beams, i, scenario.noise_user)
                           for i in range(m)])

    per_trial_rates = np.empty((trials, m))
    mean_eve_sinrs = np.empty((m, kk))
    for i in range(m):
        eve_sinr_ik = sig_eve[i] / (tot_eve - sig_eve[i])               # (trials, K)
        mean_eve_sinrs[i] = eve_sinr_ik.mean(axis=0)
        per_trial_rates[:, i] = np.log2(1 + user_sinrs[i]) - np.log2(1 + eve_sinr_ik.max(axis=1))

    per_user = per_trial_rates.mean(axis=0)
    per_trial_sums = per_trial_rates.sum(axis=1)
    if trials > 1:
        halfwidth = 1.96 * float(per_trial_sums.std(ddof=1)) / np.sqrt(trials)
    else:
        halfwidth = float("inf")
    return SecrecyReport(
        per_user_rates=per_user,
        sum_rate=float(per_user.sum()),
        user_sinrs=user_sinrs,
        eve_sinrs=mean_eve_sinrs,
        trials=trials,
        confidence_halfwidth=halfwidth,
        negative_rate_users=tuple(np.flatnonzero(per_user < 0).tolist()),
    )
