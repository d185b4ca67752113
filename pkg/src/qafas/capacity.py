"""Achievable capacity of a selected subchannel under AQNM quantization."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, as_matrix
from .exceptions import InvalidQuantizerError, InvalidRequestError
from .quantization import QuantizerModel, penalties, quantization_covariance

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SubchannelView:
    """Rows ``indices`` (in selection order) of a parent channel."""

    parent: ChannelMatrix
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        n = self.parent.n_antennas
        if len(set(idx)) != len(idx):
            raise InvalidRequestError(f"duplicate antenna indices in {idx}")
        if any(i < 0 or i >= n for i in idx):
            raise InvalidRequestError(f"antenna index out of range [0, {n})")
        object.__setattr__(self, "indices", idx)

    @property
    def matrix(self) -> np.ndarray:
        return self.parent.entries[list(self.indices)].reshape(len(self.indices), self.parent.n_users)


def _rows(sub) -> np.ndarray:
    if isinstance(sub, SubchannelView):
        return sub.matrix
    H = np.asarray(sub, dtype=complex)
    if H.ndim == 1:
        H = H[None, :]
    return H


def _check_alpha(q: QuantizerModel):
    if q.alpha <= 0:
        raise InvalidQuantizerError("quantization gain alpha must be > 0")


def hermitian_logdet(A: np.ndarray) -> float:
    """Natural log-determinant of a Hermitian positive definite matrix."""
    L = np.linalg.cholesky(A)
    return 2.0 * float(np.sum(np.log(np.diag(L).real)))


def capacity_covariance_form(sub, rho: float, q: QuantizerModel) -> float:
    """``log2 |I + rho a^2 (a^2 I + R_qq)^-1 H H^H|`` evaluated directly, K x K."""
    _check_alpha(q)
    H = _rows(sub)
    if H.shape[0] == 0:
        return 0.0
    a2 = q.alpha**2
    R = quantization_covariance(H, rho, q)
    M = np.eye(H.shape[0]) + rho * a2 * np.linalg.solve(a2 * np.eye(H.shape[0]) + R, H @ H.conj().T)
    sign, logabs = np.linalg.slogdet(M)
    return max(0.0, float(logabs) / LN2)


def weighted_gram(H: np.ndarray, rho: float, q: QuantizerModel) -> np.ndarray:
    """``I + rho alpha H^H D^-1 H`` in the N_u x N_u dual form."""
    w = rho * q.alpha / penalties(H, rho, q)
    return np.eye(H.shape[1]) + (H.conj().T * w) @ H


def capacity_penalty_form(sub, rho: float, q: QuantizerModel, dual: bool = True) -> float:
    """``log2 |I + rho alpha D^-1 H H^H|`` with the diagonal penalty matrix D.

    ``dual=True`` factors the N_u x N_u matrix ``I + rho alpha H^H D^-1 H``;
    ``dual=False`` factors the K x K symmetrized form instead.
    """
    _check_alpha(q)
    H = _rows(sub)
    if H.shape[0] == 0:
        return 0.0
    if dual:
        A = weighted_gram(H, rho, q)
    else:
        s = np.sqrt(rho * q.alpha / penalties(H, rho, q))
        G = s[:, None] * H
        A = np.eye(H.shape[0]) + G @ G.conj().T
    return max(0.0, hermitian_logdet(A) / LN2)


def capacity(H, indices, rho: float, q: QuantizerModel) -> float:
    """Capacity of rows ``indices`` of ``H`` (penalty form)."""
    M = as_matrix(H)
    return capacity_penalty_form(M[np.asarray(list(indices), dtype=int)].reshape(-1, M.shape[1]), rho, q)


def prefix_capacities(H, order, rho: float, q: QuantizerModel) -> np.ndarray:
    """Capacity after each prefix of ``order``, by direct evaluation."""
    M = as_matrix(H)
    order = list(order)
    return np.array([capacity(M, order[: n + 1], rho, q) for n in range(len(order))])
