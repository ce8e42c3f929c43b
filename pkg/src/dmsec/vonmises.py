"""Von Mises angle-error statistics and the expected eavesdropper covariance.

The direction error dtheta of eavesdropper k follows a von Mises density
truncated to [-dtheta_max, dtheta_max].  The robust designer needs the
expectation of the channel outer product,

    H_k(u, v) = (g_k / N) * E[ exp(j alpha_uv cos(theta_hat_k + dtheta)) ],
    alpha_uv  = 2 pi (v - u) l / lambda,

which this module provides two ways:

* ``closed_form`` — second-order phase expansion around theta_hat plus a
  truncated-Gaussian substitution for the von Mises weight, evaluated with
  erf/Gaussian moments.  The result splits into a cosine part (upsilon1) and
  a sine part (upsilon2): H = upsilon1 - j * upsilon2.  Note the integral is
  taken against the *un-normalized* truncated density, so the trace comes out
  scaled by the truncated mass rather than by 1.
* ``quadrature`` — direct adaptive quadrature of the exact integrand, the
  independent oracle.

The closed form is an approximation: its error grows with
|alpha_uv * sin(theta_hat)| * dtheta_max (far off-diagonal entries at steep
angles), which also means the matrix can pick up small negative eigenvalues
while the quadrature route stays PSD.  The Monte Carlo sampler, unlike the
integrals above, renormalizes the truncated density (a proper distribution is
required for sampling).

erf and the Bessel function I0 are computed in-module from series /
continued-fraction expansions so results do not depend on platform libm
behavior; scipy is used only as an independent oracle in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.integrate import quad

from .model import ArrayGeometry, Scenario, VonMisesParams

_SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# special functions (own implementations; scalar in, scalar out)
# ---------------------------------------------------------------------------

def erf(x: float) -> float:
    """Error function (2/sqrt(pi)) * integral_0^x e^{-t^2} dt.

    Maclaurin series for |x| <= 3, Lentz continued fraction for the
    complementary function on 3 < |x| < 6, saturated to +-1 beyond
    (erfc(6) ~ 2e-17 is below double precision relative to 1).
    """
    x = float(x)
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    if ax <= 3.0:
        # sum (-1)^n x^(2n+1) / (n! (2n+1))
        term = ax          # a_n = (-1)^n x^(2n+1) / n!
        total = ax
        n = 0
        while True:
            n += 1
            term *= -ax * ax / n
            contrib = term / (2 * n + 1)
            total += contrib
            # <=, not <: for subnormal x both sides underflow to exactly 0.0
            # and a strict comparison would never terminate the loop.
            if abs(contrib) <= 1e-17 * abs(total):
                break
        return math.copysign(2.0 / _SQRT_PI * total, x)
    if ax >= 6.0:
        return math.copysign(1.0, x)
    # erfc(ax) = e^{-ax^2}/sqrt(pi) * K, K = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...))))
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    a = 1.0  # a_1; thereafter a_n = (n-1)/2
    for n in range(1, 200):
        if n > 1:
            a = (n - 1) / 2.0
        d = ax + a * d
        if d == 0.0:
            d = tiny
        c = ax + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    erfc = math.exp(-ax * ax) / _SQRT_PI * f
    return math.copysign(1.0 - erfc, x)


def bessel_i0_scaled(kappa: float) -> float:
    """e^{-kappa} I0(kappa); stable for arbitrarily large concentration."""
    kappa = float(kappa)
    if kappa < 0:
        raise ValueError(f"concentration must be >= 0, got {kappa}")
    if kappa <= 40.0:
        # power series sum ((kappa/2)^(2m) / m!^2), then scale
        term = 1.0
        total = 1.0
        m = 0
        q = kappa * kappa / 4.0
        while True:
            m += 1
            term *= q / (m * m)
            total += term
            if term < 1e-17 * total:
                break
        return total * math.exp(-kappa)
    # asymptotic series: I0e(x) ~ (1/sqrt(2 pi x)) sum_k a_k x^{-k},
    # a_0 = 1, a_k / a_{k-1} = (2k-1)^2 / (8k)
    term = 1.0
    total = 1.0
    for k in range(1, 60):
        ratio = (2 * k - 1) ** 2 / (8.0 * k * kappa)
        if ratio >= 1.0:
            break  # asymptotic terms started growing; stop at the smallest
        term *= ratio
        total += term
        if term < 1e-17 * total:
            break
    return total / math.sqrt(2 * math.pi * kappa)


def bessel_i0(kappa: float) -> float:
    """Modified Bessel I0; overflows to inf above kappa ~ 709 (use the scaled form)."""
    return bessel_i0_scaled(kappa) * math.exp(kappa)


# ---------------------------------------------------------------------------
# density and sampling
# ---------------------------------------------------------------------------

def vonmises_pdf(theta, params: VonMisesParams):
    """Full-circle von Mises density e^{kappa cos(theta-mean)} / (2 pi I0(kappa)).

    Evaluated in the overflow-safe form e^{kappa(cos(...)-1)} / (2 pi I0e(kappa)).
    Accepts scalars or arrays.
    """
    kappa = params.concentration
    return np.exp(kappa * (np.cos(np.asarray(theta) - params.mean) - 1.0)) / (
        2 * np.pi * bessel_i0_scaled(kappa))


def sample_truncated_vonmises(params: VonMisesParams, rng: np.random.Generator, size=None):
    """Draw from the von Mises density renormalized to [-max_deviation, +max_deviation].

    Rejection from the full-circle sampler; deterministic given the generator
    state.  Returns a scalar when size is None, else an ndarray of that shape.
    """
    n = 1 if size is None else int(np.prod(size))
    out = np.empty(n)
    have = 0
    bound = params.max_deviation
    accept_rate = None
    for _ in range(1_000_000):  # rejection rounds; practically never exhausted
        need = n - have
        if need == 0:
            break
        guess = accept_rate if accept_rate else max(bound / np.pi, 1e-3)
        batch = max(2048, int(1.5 * need / guess))
        draws = rng.vonmises(params.mean, params.concentration, size=batch)
        kept = draws[np.abs(draws) <= bound]
        accept_rate = max(len(kept) / batch, 1e-6)
        take = min(len(kept), need)
        out[have:have + take] = kept[:take]
        have += take
    else:
        raise RuntimeError("truncated von Mises rejection sampler hit its round cap")
    if size is None:
        return float(out[0])
    return out.reshape(size)


# ---------------------------------------------------------------------------
# expected covariance: closed form and quadrature oracle
# ---------------------------------------------------------------------------

def _trunc_gauss_moments(params: VonMisesParams) -> tuple[float, float, float, float]:
    """Moments integral t^r e^{-kappa (t-mean)^2 / 2} dt over the truncation window, r=0..3."""
    kappa, mu, dmax = params.concentration, params.mean, params.max_deviation
    d1, d2 = dmax + mu, dmax - mu
    root = math.sqrt(kappa / 2)
    big_e = erf(root * d1) + erf(root * d2)
    sqp = math.sqrt(math.pi / (2 * kappa))
    e1 = math.exp(-kappa * d1 * d1 / 2)
    e2 = math.exp(-kappa * d2 * d2 / 2)
    m0 = sqp * big_e
    m1 = mu * sqp * big_e + (e1 - e2) / kappa
    m2 = ((1 + kappa * mu * mu) * sqp * big_e - d2 * e1 - d1 * e2) / kappa
    m3 = ((3 + kappa * mu * mu) * mu * sqp * big_e
          + (2 / kappa + d1 * d1 - 3 * mu * dmax) * e1
          - (2 / kappa + d2 * d2 + 3 * mu * dmax) * e2) / kappa
    return m0, m1, m2, m3


def _alpha(geometry: ArrayGeometry, u: int, v: int) -> float:
    """Inter-element phase rate 2 pi (v-u) l / lambda; only the index difference enters."""
    return 2 * np.pi * (v - u) * geometry.spacing / geometry.wavelength


def _hhat_entry(geometry: ArrayGeometry, alpha: float, theta_hat: float, gain: float) -> complex:
    """Entry of the zero-error outer product h(theta_hat) h(theta_hat)^H."""
    return gain / geometry.num_antennas * np.exp(1j * alpha * np.cos(theta_hat))


def _upsilon_brackets(alpha: float, theta_hat: float, params: VonMisesParams) -> tuple[float, float]:
    """Real weights multiplying the zero-error entry: (cosine part, sine part).

    Second-order expansion of the residual phase
    xi = alpha (cos(theta_hat) t^2 / 2 + sin(theta_hat) t) with cos(xi) kept to
    the t^3 term and sin(xi) ~ xi, integrated against the truncated-Gaussian
    substitute for the von Mises weight (un-normalized, see module docstring).
    """
    if params.concentration <= 0:
        raise ValueError("closed form requires concentration > 0 "
                         "(the Gaussian substitution degenerates at 0)")
    s, c = math.sin(theta_hat), math.cos(theta_hat)
    m0, m1, m2, m3 = _trunc_gauss_moments(params)
    pref = 1.0 / (2 * math.pi * bessel_i0_scaled(params.concentration))
    cos_part = pref * (m0 - (alpha * alpha * s * s / 2) * m2 - (alpha * alpha * s * c / 2) * m3)
    sin_part = pref * ((alpha * c / 2) * m2 + alpha * s * m1)
    return cos_part, sin_part


def upsilon1(u: int, v: int, theta_hat: float, params: VonMisesParams,
             geometry: ArrayGeometry, gain: float) -> complex:
    """Cosine component of the expected covariance entry (u, v)."""
    alpha = _alpha(geometry, u, v)
    cos_part, _ = _upsilon_brackets(alpha, theta_hat, params)
    return _hhat_entry(geometry, alpha, theta_hat, gain) * cos_part


def upsilon2(u: int, v: int, theta_hat: float, params: VonMisesParams,
             geometry: ArrayGeometry, gain: float) -> complex:
    """Sine component of the expected covariance entry (u, v)."""
    alpha = _alpha(geometry, u, v)
    _, sin_part = _upsilon_brackets(alpha, theta_hat, params)
    return _hhat_entry(geometry, alpha, theta_hat, gain) * sin_part


@dataclass(frozen=True)
class ExpectedCovariance:
    """N x N Hermitian expected outer product of an eavesdropper channel."""

    matrix: np.ndarray
    eve_index: int
    provenance: Literal["closed_form", "quadrature"]


def _profile_closed(alpha: float, theta_hat: float, params: VonMisesParams) -> complex:
    cos_part, sin_part = _upsilon_brackets(alpha, theta_hat, params)
    return np.exp(1j * alpha * np.cos(theta_hat)) * (cos_part - 1j * sin_part)


def _profile_quadrature(alpha: float, theta_hat: float, params: VonMisesParams) -> complex:
    dmax = params.max_deviation

    def density(t):
        return vonmises_pdf(t, params)

    re = quad(lambda t: np.cos(alpha * np.cos(theta_hat + t)) * density(t),
              -dmax, dmax, epsabs=1e-12, limit=300)[0]
    im = quad(lambda t: np.sin(alpha * np.cos(theta_hat + t)) * density(t),
              -dmax, dmax, epsabs=1e-12, limit=300)[0]
    return re + 1j * im


def expected_covariance(scenario: Scenario, k: int,
                        method: Literal["closed_form", "quadrature"] = "closed_form",
                        ) -> ExpectedCovariance:
    """Expected channel outer product for eavesdropper k (0-based index).

    Entries depend only on the antenna index difference, so the matrix is
    Toeplitz-Hermitian and is assembled from one profile of N values; this
    makes Hermitian symmetry exact in both methods.
    """
    geometry = scenario.geometry
    n = geometry.num_antennas
    theta_hat = scenario.eve_angles_est[k]
    g = scenario.eve_channel(k).gain
    params = scenario.error_model

    profile_fn = _profile_closed if method == "closed_form" else _profile_quadrature
    if method not in ("closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    profile = np.array([profile_fn(_alpha(geometry, 1, 1 + d), theta_hat, params)
                        for d in range(n)])
    matrix = np.empty((n, n), dtype=complex)
    for u in range(n):
        for v in range(n):
            d = v - u
            matrix[u, v] = profile[d] if d >= 0 else np.conj(profile[-d])
    return ExpectedCovariance(matrix=g / n * matrix, eve_index=k, provenance=method)
