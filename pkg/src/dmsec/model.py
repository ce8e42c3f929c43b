"""Array geometry, free-space channels, and scenario configuration.

A base station with an N-element uniform linear array serves M single-antenna
users in the presence of K single-antenna eavesdroppers.  All links are
line-of-sight with free-space path loss; a channel is a scaled steering
vector.  Eavesdropper angles are estimates; the error model lives in
:class:`VonMisesParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class ScenarioError(ValueError):
    """Raised when a scenario (or its config document) violates an invariant."""


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array: element count, spacing (m), carrier (Hz)."""

    num_antennas: int
    spacing: float
    carrier_frequency: float

    def __post_init__(self):
        if int(self.num_antennas) != self.num_antennas or self.num_antennas < 1:
            raise ScenarioError(f"num_antennas: must be a positive integer, got {self.num_antennas}")
        if self.spacing <= 0:
            raise ScenarioError(f"spacing: must be > 0 m, got {self.spacing}")
        if self.carrier_frequency <= 0:
            raise ScenarioError(f"carrier_frequency: must be > 0 Hz, got {self.carrier_frequency}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @classmethod
    def half_wavelength(cls, num_antennas: int, carrier_frequency: float = 3e9) -> "ArrayGeometry":
        lam = SPEED_OF_LIGHT / carrier_frequency
        return cls(num_antennas, lam / 2, carrier_frequency)


@dataclass(frozen=True)
class VonMisesParams:
    """Truncated von Mises model for the direction-angle estimation error.

    The error dtheta has (un-truncated) density e^{kappa cos(t-mean)}/(2 pi I0(kappa))
    and is confined to [-max_deviation, +max_deviation] radians.
    """

    mean: float = 0.0            # rad
    concentration: float = 100.0  # dimensionless, >= 0
    max_deviation: float = math.radians(6.0)  # rad, truncation half-width

    def __post_init__(self):
        if self.concentration < 0:
            raise ScenarioError(f"error_concentration: must be >= 0, got {self.concentration}")
        if not (0 < self.max_deviation <= math.pi):
            raise ScenarioError(
                f"error_max_deviation: must be in (0, pi] rad, got {self.max_deviation}")
        if abs(self.mean) >= self.max_deviation:
            raise ScenarioError(
                f"error_mean: |mean| must be < max_deviation "
                f"(got {self.mean} vs {self.max_deviation})")


@dataclass(frozen=True)
class ChannelVector:
    """Scaled steering vector: entries = sqrt(gain) * unit steering vector."""

    entries: np.ndarray   # complex, length N
    gain: float           # linear path-loss gain
    angle: float          # rad
    distance: float       # m


def steering_vector(geometry: ArrayGeometry, theta: float) -> np.ndarray:
    """Unit-norm ULA steering vector at direction angle theta (rad).

    Entry n (n = 1..N) is exp(j 2 pi psi(n)) / sqrt(N) with
    psi(n) = -((n - (N+1)/2) * spacing * cos(theta)) / wavelength,
    so the phase reference sits at the array center.
    """
    n = np.arange(1, geometry.num_antennas + 1, dtype=float)
    psi = -((n - (geometry.num_antennas + 1) / 2) * geometry.spacing * np.cos(theta)) / geometry.wavelength
    return np.exp(2j * np.pi * psi) / np.sqrt(geometry.num_antennas)


def path_loss(distance: float, frequency: float) -> float:
    """Free-space linear power gain (c / (4 pi d f))^2; always < 1 in the far field."""
    if distance <= 0:
        raise ScenarioError(f"distance: must be > 0 m, got {distance}")
    if frequency <= 0:
        raise ScenarioError(f"frequency: must be > 0 Hz, got {frequency}")
    return (SPEED_OF_LIGHT / (4 * np.pi * distance * frequency)) ** 2


def channel(geometry: ArrayGeometry, theta: float, distance: float) -> ChannelVector:
    """LOS channel: sqrt(path-loss gain) times the steering vector."""
    g = path_loss(distance, geometry.carrier_frequency)
    return ChannelVector(
        entries=np.sqrt(g) * steering_vector(geometry, theta),
        gain=g, angle=float(theta), distance=float(distance))


def default_user_angles(num_users: int) -> np.ndarray:
    """pi/6, pi/3, pi/2, ... (pi/6 ladder; the first two match the reference setup)."""
    return np.pi / 6 * np.arange(1, num_users + 1)


def default_eve_angles(num_eves: int) -> np.ndarray:
    """-pi/12, pi/12, pi/4, 5pi/12, 7pi/12, ... (arithmetic ladder, step pi/6)."""
    return -np.pi / 12 + np.pi / 6 * np.arange(num_eves)


def dbm_to_watts(dbm: float) -> float:
    return 10 ** ((dbm - 30) / 10)


def watts_to_dbm(watts: float) -> float:
    return 10 * math.log10(watts) + 30


@dataclass(frozen=True)
class Scenario:
    """Complete problem instance (immutable; use dataclasses.replace for variants)."""

    geometry: ArrayGeometry
    user_angles: np.ndarray      # rad, length M
    user_distances: np.ndarray   # m, length M
    eve_angles_est: np.ndarray   # rad, length K (estimated angles)
    eve_distances: np.ndarray    # m, length K
    total_power: float           # W
    noise_user: float            # W (sigma_D^2)
    noise_eve: float             # W (sigma_E^2)
    error_model: VonMisesParams = field(default_factory=VonMisesParams)

    def __post_init__(self):
        # normalize array-ish fields so replace()-built variants stay consistent
        for name in ("user_angles", "user_distances", "eve_angles_est", "eve_distances"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        if len(self.user_distances) != len(self.user_angles):
            raise ScenarioError(
                f"user_distances: length {len(self.user_distances)} != num users {len(self.user_angles)}")
        if len(self.eve_distances) != len(self.eve_angles_est):
            raise ScenarioError(
                f"eve_distances: length {len(self.eve_distances)} != num eves {len(self.eve_angles_est)}")
        if self.num_users >= self.geometry.num_antennas:
            raise ScenarioError(
                f"num_users: must satisfy M < N, got M={self.num_users}, N={self.geometry.num_antennas}")
        if self.num_eves < 1:
            raise ScenarioError("eve_angles: need at least one eavesdropper")
        if self.total_power <= 0:
            raise ScenarioError(f"total_power: must be > 0 W, got {self.total_power}")
        if self.noise_user <= 0 or self.noise_eve <= 0:
            raise ScenarioError("noise_user/noise_eve: must be > 0 W")

    @property
    def num_users(self) -> int:
        return len(self.user_angles)

    @property
    def num_eves(self) -> int:
        return len(self.eve_angles_est)

    def user_channel(self, i: int) -> ChannelVector:
        return channel(self.geometry, self.user_angles[i], self.user_distances[i])

    def user_channels(self) -> list[ChannelVector]:
        return [self.user_channel(i) for i in range(self.num_users)]

    def eve_channel(self, k: int, angle: float | None = None) -> ChannelVector:
        """Eavesdropper channel at the estimated angle, or at a supplied true angle."""
        theta = self.eve_angles_est[k] if angle is None else angle
        return channel(self.geometry, theta, self.eve_distances[k])

    def with_num_eves(self, num_eves: int) -> "Scenario":
        """Variant with the first `num_eves` rungs of the default angle ladder."""
        return replace(self, eve_angles_est=default_eve_angles(num_eves),
                       eve_distances=np.full(num_eves, float(self.eve_distances[0])))


def reference_scenario(**overrides) -> Scenario:
    """The reference simulation setup; keyword overrides replace whole fields."""
    geometry = overrides.pop("geometry", ArrayGeometry.half_wavelength(6, 3e9))
    base = dict(
        geometry=geometry,
        user_angles=np.array([np.pi / 6, np.pi / 3]),
        user_distances=np.array([80.0, 80.0]),
        eve_angles_est=np.array([-np.pi / 12, np.pi / 12, np.pi / 4, 5 * np.pi / 12]),
        eve_distances=np.full(4, 50.0),
        total_power=dbm_to_watts(40.0),   # 10 W
        noise_user=dbm_to_watts(-30.0),   # 1e-6 W
        noise_eve=dbm_to_watts(-30.0),
        error_model=VonMisesParams(mean=0.0, concentration=100.0,
                                   max_deviation=math.radians(6.0)),
    )
    base.update(overrides)
    return Scenario(**base)


# ---------------------------------------------------------------------------
# Config document parsing (flat "key = value" text; '#' starts a comment)
# ---------------------------------------------------------------------------

_POWER_UNITS = {"w": 1.0, "mw": 1e-3, "uw": 1e-6}
_FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_DIST_UNITS = {"m": 1.0, "km": 1e3, "cm": 1e-2, "mm": 1e-3}


def _split_quantity(token: str) -> tuple[float, str]:
    parts = token.strip().split()
    if len(parts) == 1:
        return float(parts[0]), ""
    if len(parts) == 2:
        return float(parts[0]), parts[1].lower()
    raise ScenarioError(f"cannot parse quantity {token!r}")


def _parse_power(token: str, key: str) -> float:
    value, unit = _split_quantity(token)
    if unit == "dbm":
        return dbm_to_watts(value)
    if unit in _POWER_UNITS:
        return value * _POWER_UNITS[unit]
    if unit == "":
        return value  # bare numbers are watts
    raise ScenarioError(f"{key}: unknown power unit {unit!r} (use dBm, W, mW)")


def _parse_angle(token: str, key: str) -> float:
    value, unit = _split_quantity(token)
    if unit in ("deg", "degree", "degrees"):
        return math.radians(value)
    if unit in ("", "rad"):
        return value
    raise ScenarioError(f"{key}: unknown angle unit {unit!r} (use deg or rad)")


def _parse_distance(token: str, key: str) -> float:
    value, unit = _split_quantity(token)
    if unit in _DIST_UNITS:
        return value * _DIST_UNITS[unit]
    if unit == "":
        return value  # meters
    raise ScenarioError(f"{key}: unknown distance unit {unit!r} (use m, km)")


def _parse_frequency(token: str, key: str) -> float:
    value, unit = _split_quantity(token)
    if unit in _FREQ_UNITS:
        return value * _FREQ_UNITS[unit]
    if unit == "":
        return value  # Hz
    raise ScenarioError(f"{key}: unknown frequency unit {unit!r} (use Hz, GHz)")


def _parse_number(token: str, key: str) -> float:
    value, unit = _split_quantity(token)
    if unit:
        raise ScenarioError(f"{key}: expected a bare number, got unit {unit!r}")
    return value


def _parse_int(token: str, key: str) -> int:
    value = _parse_number(token, key)
    if value != int(value):
        raise ScenarioError(f"{key}: expected an integer, got {token!r}")
    return int(value)


_KNOWN_KEYS = {
    "num_antennas", "spacing", "carrier_frequency",
    "num_users", "user_angles", "user_distances",
    "num_eavesdroppers", "eve_angles", "eve_distances",
    "total_power", "noise_user", "noise_eve",
    "error_mean", "error_concentration", "error_max_deviation",
}


def load_scenario(document: str) -> Scenario:
    """Build a Scenario from a flat key/value text document.

    Omitted keys fall back to the reference setup (six half-wavelength
    antennas at 3 GHz, two users at {pi/6, pi/3} x 80 m, four eavesdroppers on
    the default ladder x 50 m, 40 dBm transmit power, -30 dBm noise,
    von Mises error with mean 0, concentration 100, truncation 6 deg).
    Unknown keys are an error.
    """
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(document.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        if key in kv:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        kv[key] = value

    n = _parse_int(kv["num_antennas"], "num_antennas") if "num_antennas" in kv else 6
    f = _parse_frequency(kv["carrier_frequency"], "carrier_frequency") if "carrier_frequency" in kv else 3e9
    if "spacing" in kv:
        geometry = ArrayGeometry(n, _parse_distance(kv["spacing"], "spacing"), f)
    else:
        geometry = ArrayGeometry.half_wavelength(n, f)

    def _angle_list(key: str) -> np.ndarray:
        return np.array([_parse_angle(tok, key) for tok in kv[key].split(",")])

    def _distance_list(key: str, count: int) -> np.ndarray:
        vals = np.array([_parse_distance(tok, key) for tok in kv[key].split(",")])
        if len(vals) == 1:
            return np.full(count, vals[0])
        if len(vals) != count:
            raise ScenarioError(f"{key}: expected 1 or {count} values, got {len(vals)}")
        return vals

    if "user_angles" in kv:
        user_angles = _angle_list("user_angles")
        if "num_users" in kv and _parse_int(kv["num_users"], "num_users") != len(user_angles):
            raise ScenarioError("num_users: does not match the number of user_angles")
    elif "num_users" in kv:
        user_angles = default_user_angles(_parse_int(kv["num_users"], "num_users"))
    else:
        user_angles = default_user_angles(2)
    user_distances = (_distance_list("user_distances", len(user_angles))
                      if "user_distances" in kv else np.full(len(user_angles), 80.0))

    if "eve_angles" in kv:
        eve_angles = _angle_list("eve_angles")
        if "num_eavesdroppers" in kv and _parse_int(kv["num_eavesdroppers"], "num_eavesdroppers") != len(eve_angles):
            raise ScenarioError("num_eavesdroppers: does not match the number of eve_angles")
    elif "num_eavesdroppers" in kv:
        eve_angles = default_eve_angles(_parse_int(kv["num_eavesdroppers"], "num_eavesdroppers"))
    else:
        eve_angles = default_eve_angles(4)
    eve_distances = (_distance_list("eve_distances", len(eve_angles))
                     if "eve_distances" in kv else np.full(len(eve_angles), 50.0))

    error_model = VonMisesParams(
        mean=_parse_angle(kv["error_mean"], "error_mean") if "error_mean" in kv else 0.0,
        concentration=(_parse_number(kv["error_concentration"], "error_concentration")
                       if "error_concentration" in kv else 100.0),
        max_deviation=(_parse_angle(kv["error_max_deviation"], "error_max_deviation")
                       if "error_max_deviation" in kv else math.radians(6.0)),
    )

    return Scenario(
        geometry=geometry,
        user_angles=user_angles,
        user_distances=user_distances,
        eve_angles_est=eve_angles,
        eve_distances=eve_distances,
        total_power=_parse_power(kv["total_power"], "total_power") if "total_power" in kv else dbm_to_watts(40.0),
        noise_user=_parse_power(kv["noise_user"], "noise_user") if "noise_user" in kv else dbm_to_watts(-30.0),
        noise_eve=_parse_power(kv["noise_eve"], "noise_eve") if "noise_eve" in kv else dbm_to_watts(-30.0),
        error_model=error_model,
    )
