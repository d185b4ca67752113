"""Multi-user uplink channel synthesis.

Small-scale fading is i.i.d. Rayleigh; large-scale fading combines a
log-distance pathloss anchored at free-space loss with lognormal shadowing.
Large-scale gains are divided by the thermal noise power so that the AWGN
has unit variance and the transmit power is expressed in milliwatts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .exceptions import ConfigError, InvalidDimensionError

SPEED_OF_LIGHT = 299_792_458.0
THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class CellConfig:
    cell_radius_m: float = 2000.0
    min_distance_m: float = 100.0
    carrier_freq_hz: float = 2.4e9
    bandwidth_hz: float = 10e6
    shadowing_std_db: float = 8.7
    noise_figure_db: float = 5.0
    pathloss_exponent: float = 3.76
    reference_distance_m: float = 100.0

    def __post_init__(self):
        if not 0 < self.min_distance_m < self.cell_radius_m:
            raise ConfigError("min_distance_m", "need 0 < min_distance_m < cell_radius_m")
        if self.shadowing_std_db < 0:
            raise ConfigError("shadowing_std_db", "must be >= 0")
        if self.pathloss_exponent <= 0:
            raise ConfigError("pathloss_exponent", "must be > 0")
        if self.reference_distance_m <= 0:
            raise ConfigError("reference_distance_m", "must be > 0")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    @property
    def noise_power_dbm(self) -> float:
        return THERMAL_NOISE_DBM_HZ + 10 * math.log10(self.bandwidth_hz) + self.noise_figure_db

    def pathloss_db(self, distance_m):
        """Log-distance pathloss with free-space loss at the reference distance."""
        d0 = self.reference_distance_m
        pl0 = 20 * math.log10(4 * math.pi * d0 * self.carrier_freq_hz / SPEED_OF_LIGHT)
        return pl0 + 10 * self.pathloss_exponent * np.log10(np.asarray(distance_m) / d0)


@dataclass(frozen=True)
class ChannelMatrix:
    """N_r x N_u channel; row j holds ``f_j^H`` for antenna j."""

    entries: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.entries, dtype=complex)
        if H.ndim != 2 or H.size == 0:
            raise InvalidDimensionError(f"channel must be a nonempty 2-D matrix, got shape {H.shape}")
        if not np.all(np.isfinite(H)):
            raise InvalidDimensionError("channel entries must be finite")
        object.__setattr__(self, "entries", H)

    @property
    def n_antennas(self) -> int:
        return self.entries.shape[0]

    @property
    def n_users(self) -> int:
        return self.entries.shape[1]

    def rows(self, indices) -> np.ndarray:
        return self.entries[np.asarray(indices, dtype=int)]


def as_matrix(H) -> np.ndarray:
    """Return the underlying complex array of a ChannelMatrix or array-like."""
    if isinstance(H, ChannelMatrix):
        return H.entries
    return np.atleast_2d(np.asarray(H, dtype=complex))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def generate_small_scale(n_antennas: int, n_users: int, seed=None) -> np.ndarray:
    """i.i.d. CN(0, 1) entries of shape (n_antennas, n_users)."""
    if n_antennas < 1 or n_users < 1:
        raise InvalidDimensionError(f"dimensions must be >= 1, got ({n_antennas}, {n_users})")
    rng = _rng(seed)
    z = rng.standard_normal((n_antennas, n_users, 2))
    return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)


def place_users(n_users: int, cell: CellConfig, seed=None) -> np.ndarray:
    """Distances of users placed uniformly over the annulus area."""
    rng = _rng(seed)
    r0, R = cell.min_distance_m, cell.cell_radius_m
    u = rng.random(n_users)
    return np.sqrt(r0**2 + u * (R**2 - r0**2))


def large_scale_from_distance(distance_m, cell: CellConfig, shadowing_db=0.0) -> np.ndarray:
    """Noise-normalized linear gains for given distances and shadowing draws."""
    gain_db = -cell.pathloss_db(distance_m) - np.asarray(shadowing_db) - cell.noise_power_dbm
    return 10.0 ** (gain_db / 10.0)


def generate_large_scale(n_users: int, cell: CellConfig | None = None, seed=None) -> np.ndarray:
    if n_users < 1:
        raise InvalidDimensionError(f"n_users must be >= 1, got {n_users}")
    cell = cell or CellConfig()
    rng = _rng(seed)
    distance = place_users(n_users, cell, rng)
    shadowing = rng.normal(0.0, cell.shadowing_std_db, n_users)
    return large_scale_from_distance(distance, cell, shadowing)


def assemble_channel(small, large, allow_zero_gain: bool = True) -> ChannelMatrix:
    """Scale column i of ``small`` by ``sqrt(large[i])``."""
    small = np.atleast_2d(np.asarray(small, dtype=complex))
    large = np.atleast_1d(np.asarray(large, dtype=float))
    if large.ndim != 1 or small.shape[1] != large.shape[0]:
        raise InvalidDimensionError(
            f"{small.shape[1]} channel columns but {large.shape[0]} large-scale gains"
        )
    if np.any(large < 0):
        raise InvalidDimensionError("large-scale gains must be nonnegative")
    if not allow_zero_gain and np.any(large == 0):
        raise InvalidDimensionError("zero large-scale gain")
    return ChannelMatrix(small * np.sqrt(large)[None, :])


def generate_channel(n_antennas: int, n_users: int, cell: CellConfig | None = None, seed=None) -> ChannelMatrix:
    """Full draw: placement and shadowing, then fading, from one generator."""
    rng = _rng(seed)
    large = generate_large_scale(n_users, cell, rng)
    small = generate_small_scale(n_antennas, n_users, rng)
    return assemble_channel(small, large)


def read_channel_file(path) -> ChannelMatrix:
    """Read ``N_r N_u`` header then N_r lines of ``re+imj`` entries."""
    with open(path) as fh:
        lines = [ln for ln in (raw.strip() for raw in fh) if ln and not ln.startswith("#")]
    if not lines:
        raise InvalidDimensionError(f"{path}: empty channel file")
    try:
        n_r, n_u = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise InvalidDimensionError(f"{path}: header must be 'N_r N_u'") from None
    body = lines[1:]
    if len(body) != n_r:
        raise InvalidDimensionError(f"{path}: expected {n_r} rows, found {len(body)}")
    H = np.empty((n_r, n_u), dtype=complex)
    for i, line in enumerate(body):
        toks = line.split()
        if len(toks) != n_u:
            raise InvalidDimensionError(f"{path}: row {i} has {len(toks)} entries, expected {n_u}")
        try:
            H[i] = [complex(t) for t in toks]
        except ValueError as exc:
            raise InvalidDimensionError(f"{path}: row {i}: {exc}") from None
    return ChannelMatrix(H)


def write_channel_file(path, H) -> None:
    H = as_matrix(H)
    with open(path, "w") as fh:
        fh.write(f"{H.shape[0]} {H.shape[1]}\n")
        for row in H:
            fh.write(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row) + "\n")
