"""Additive quantization noise model (AQNM) for low-resolution ADCs.

Each real and imaginary component is quantized with ``bits`` bits. The model
replaces the quantizer by a gain ``alpha = 1 - beta`` plus uncorrelated
Gaussian noise whose covariance scales with the per-antenna input power.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidQuantizerError, InvalidResolutionError

INFINITE = math.inf

# Normalized MSE of the optimal scalar quantizer with Gaussian input.
_BETA_TABLE = {
    1: 0.3634,
    2: 0.1175,
    3: 0.03454,
    4: 0.009497,
    5: 0.002499,
}


def _check_bits(b):
    if b == INFINITE:
        return INFINITE
    if isinstance(b, bool) or not float(b).is_integer():
        raise InvalidResolutionError(f"resolution must be a positive integer or INFINITE, got {b!r}")
    b = int(b)
    if b < 1:
        raise InvalidResolutionError(f"resolution must be >= 1 bit, got {b}")
    return b


def beta_of_bits(b) -> float:
    """Distortion factor for ``b`` bits per real dimension.

    Tabulated for b <= 5, ``(pi*sqrt(3)/2) * 2**(-2b)`` above that, and 0
    for ``INFINITE``.
    """
    b = _check_bits(b)
    if b == INFINITE:
        return 0.0
    if b in _BETA_TABLE:
        return _BETA_TABLE[b]
    return math.pi * math.sqrt(3.0) / 2.0 * 2.0 ** (-2 * b)


def parse_bits(text):
    """Parse ``"3"`` or ``"inf"`` into a resolution value."""
    s = str(text).strip().lower()
    if s in ("inf", "infinite", "infinity"):
        return INFINITE
    try:
        value = float(s)
    except ValueError:
        raise InvalidResolutionError(f"cannot parse resolution {text!r}") from None
    return _check_bits(value)


def format_bits(b) -> str:
    return "inf" if b == INFINITE else str(int(b))


@dataclass(frozen=True)
class QuantizerModel:
    bits: float
    beta: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise InvalidQuantizerError(f"quantization gain must lie in (0, 1], got {self.alpha}")

    @classmethod
    def from_bits(cls, b) -> "QuantizerModel":
        b = _check_bits(b)
        beta = beta_of_bits(b)
        return cls(bits=b, beta=beta, alpha=1.0 - beta)

    @classmethod
    def perfect(cls) -> "QuantizerModel":
        return cls.from_bits(INFINITE)

    @property
    def is_perfect(self) -> bool:
        return self.alpha == 1.0


def quantization_covariance(H_K, rho: float, q: QuantizerModel) -> np.ndarray:
    """Quantization noise covariance ``alpha(1-alpha) diag(rho H H^H + I)``.

    Only the diagonal of ``rho H H^H`` enters, i.e. ``rho * ||f_i||^2`` per
    selected antenna. Returns a real diagonal K x K matrix.
    """
    H_K = np.atleast_2d(np.asarray(H_K))
    row_power = np.sum(np.abs(H_K) ** 2, axis=1)
    return np.diag(q.alpha * (1.0 - q.alpha) * (rho * row_power + 1.0))


def penalty_d(f, rho: float, q: QuantizerModel) -> float:
    """Per-antenna quantization penalty ``1 + rho (1 - alpha) ||f||^2``."""
    f = np.asarray(f)
    return float(1.0 + rho * (1.0 - q.alpha) * np.sum(np.abs(f) ** 2))


def penalties(H, rho: float, q: QuantizerModel) -> np.ndarray:
    """Vector of ``penalty_d`` over every row of ``H``."""
    H = np.atleast_2d(np.asarray(H))
    return 1.0 + rho * (1.0 - q.alpha) * np.sum(np.abs(H) ** 2, axis=1)
