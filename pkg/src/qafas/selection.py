"""Greedy, random and exhaustive receive antenna selection.

The greedy routine keeps ``Q = (I + rho alpha H_n^H D_n^-1 H_n)^-1`` in the
N_u x N_u form and refreshes every candidate's gain ``c_j = f_j^H Q f_j``
with one rank-1 downdate per stage, for O(K N_u N_r) work overall.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import LN2, capacity_penalty_form, prefix_capacities
from .channel import as_matrix
from .exceptions import InvalidQuantizerError, InvalidRequestError, SearchTooLargeError
from .quantization import QuantizerModel, penalties

DEFAULT_EXHAUSTIVE_CAP = 10**6


@dataclass(frozen=True)
class SelectionResult:
    order: tuple
    stage_capacity: tuple = ()
    stage_ratio: tuple = ()

    @property
    def capacity(self) -> float:
        return self.stage_capacity[-1] if self.stage_capacity else 0.0


def greedy_objective(c_j, d_j):
    """Quantization-aware score ``c_j / d_j``."""
    return c_j / d_j


@dataclass
class GreedyState:
    """Mutable state of one greedy selection run.

    ``H`` rows are ``f_j^H``; hence ``f_j = conj(H[j])`` and
    ``f_j^H a = H[j] @ a``.
    """

    H: np.ndarray
    rho: float
    q: QuantizerModel
    Q: np.ndarray = field(init=False)
    c: np.ndarray = field(init=False)
    d: np.ndarray = field(init=False)
    remaining: np.ndarray = field(init=False)
    selected: list = field(init=False, default_factory=list)

    def __post_init__(self):
        if self.q.alpha <= 0:
            raise InvalidQuantizerError("quantization gain alpha must be > 0")
        if not self.rho > 0:
            raise InvalidRequestError(f"transmit power must be positive, got {self.rho}")
        self.H = as_matrix(self.H)
        n_users = self.H.shape[1]
        self.Q = np.eye(n_users, dtype=complex)
        self.c = np.sum(np.abs(self.H) ** 2, axis=1)
        self.d = penalties(self.H, self.rho, self.q)
        self.remaining = np.ones(self.H.shape[0], dtype=bool)
        self.selected = []

    def scores(self) -> np.ndarray:
        """Objective over all antennas; already-selected ones are -inf."""
        return np.where(self.remaining, greedy_objective(self.c, self.d), -np.inf)

    def step(self):
        """Select one antenna and update Q and c. Returns (J, ratio, increment)."""
        if not self.remaining.any():
            raise InvalidRequestError("no candidate antennas left")
        scores = self.scores()
        J = int(np.argmax(scores))  # first maximum: lowest index wins ties
        ratio = float(scores[J])
        self.remaining[J] = False
        self.selected.append(J)

        scale = 1.0 / math.sqrt(self.c[J] + self.d[J] / (self.rho * self.q.alpha))
        a = scale * (self.Q @ self.H[J].conj())
        self.Q -= np.outer(a, a.conj())
        self.c = np.maximum(self.c - np.abs(self.H @ a) ** 2, 0.0)
        increment = math.log1p(self.rho * self.q.alpha * ratio) / LN2
        return J, ratio, increment


def _check_k(k, n_antennas):
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= n_antennas:
        raise InvalidRequestError(f"K must satisfy 1 <= K <= {n_antennas}, got {k}")
    return int(k)


def select_qafas(H, K: int, rho: float, q: QuantizerModel) -> SelectionResult:
    """Quantization-aware fast antenna selection."""
    state = GreedyState(H, rho, q)
    K = _check_k(K, state.H.shape[0])
    order, ratios, trace = [], [], []
    total = 0.0
    for _ in range(K):
        J, ratio, inc = state.step()
        total += inc
        order.append(J)
        ratios.append(ratio)
        trace.append(total)
    return SelectionResult(tuple(order), tuple(trace), tuple(ratios))


def select_fas(H, K: int, rho: float) -> SelectionResult:
    """Conventional fast antenna selection: the perfect-quantizer case."""
    return select_qafas(H, K, rho, QuantizerModel.perfect())


def select_random(n_antennas: int, K: int, seed=None) -> SelectionResult:
    """Uniform K-subset without replacement. Capacity trace left empty."""
    K = _check_k(K, n_antennas)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    order = rng.choice(n_antennas, size=K, replace=False)
    return SelectionResult(tuple(int(i) for i in order))


def with_capacity(result: SelectionResult, H, rho: float, q: QuantizerModel) -> SelectionResult:
    """Fill the stage capacity trace of ``result`` by direct evaluation."""
    trace = prefix_capacities(H, result.order, rho, q)
    return SelectionResult(result.order, tuple(float(x) for x in trace), result.stage_ratio)


def _batched_capacity(outer, idx):
    # outer: (N_r, N_u, N_u) weighted rank-1 terms; idx: (M, K)
    n_u = outer.shape[1]
    A = np.eye(n_u) + outer[idx].sum(axis=1)
    L = np.linalg.cholesky(A)
    diag = np.diagonal(L, axis1=1, axis2=2).real
    return 2.0 * np.log(diag).sum(axis=1) / LN2


def select_exhaustive(H, K: int, rho: float, q: QuantizerModel,
                      cap: int = DEFAULT_EXHAUSTIVE_CAP, chunk: int = 4096) -> SelectionResult:
    """Best K-subset over all combinations, lexicographic tie-break.

    Returned order is ascending; the trace holds prefix capacities of it.
    """
    M = as_matrix(H)
    n_r = M.shape[0]
    K = _check_k(K, n_r)
    if q.alpha <= 0:
        raise InvalidQuantizerError("quantization gain alpha must be > 0")
    n_subsets = math.comb(n_r, K)
    if n_subsets > cap:
        raise SearchTooLargeError(n_r, K, n_subsets, cap)

    w = rho * q.alpha / penalties(M, rho, q)
    # row j contributes w_j f_j f_j^H with f_j = conj(M[j])
    outer = w[:, None, None] * np.einsum("ji,jk->jik", M.conj(), M)

    best_val, best = -np.inf, None
    combos = itertools.combinations(range(n_r), K)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=int)
        if block.size == 0:
            break
        vals = _batched_capacity(outer, block)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best = vals[i], tuple(int(x) for x in block[i])
    trace = prefix_capacities(M, best, rho, q)
    return SelectionResult(best, tuple(float(x) for x in trace))

