"""Seeded Monte Carlo capacity experiments.

Every trial draws one channel from its own seed substream and all
methods, K, resolutions and powers are evaluated on that same channel.
Random selection draws one subset per (trial, K) and reuses it across
resolutions and powers.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import groupby

import numpy as np

from .capacity import capacity_penalty_form
from .channel import CellConfig, generate_channel
from .exceptions import ConfigError, EmptyTableError, SearchTooLargeError
from .quantization import INFINITE, QuantizerModel, format_bits, parse_bits
from .selection import DEFAULT_EXHAUSTIVE_CAP, select_exhaustive, select_fas, select_qafas, select_random

METHODS = ("qafas", "fas", "random", "exhaustive")

RUN_HEADER = ["method", "K", "bits", "rho_dbm", "trial", "capacity_bps_hz"]
SUMMARY_HEADER = ["method", "K", "bits", "rho_dbm", "trials", "mean_capacity", "stderr"]


def dbm_to_linear(rho_dbm: float) -> float:
    """Transmit power in mW against unit-variance noise."""
    return 10.0 ** (rho_dbm / 10.0)


@dataclass(frozen=True)
class ExperimentConfig:
    n_antennas: int = 128
    n_users: int = 10
    k_values: tuple = (10, 20, 40)
    bits_values: tuple = (3,)
    rho_dbm_values: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    trials: int = 200
    master_seed: int = 0
    methods: tuple = ("qafas", "fas", "random")
    cell: CellConfig = field(default_factory=CellConfig)
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP

    def validate(self) -> "ExperimentConfig":
        if self.n_antennas < 1:
            raise ConfigError("n_antennas", "must be >= 1")
        if self.n_users < 1:
            raise ConfigError("n_users", "must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        if not self.k_values:
            raise ConfigError("k_values", "must be nonempty")
        for k in self.k_values:
            if not 1 <= k <= self.n_antennas:
                raise ConfigError("k_values", f"K={k} outside [1, {self.n_antennas}]")
        if not self.bits_values:
            raise ConfigError("bits_values", "must be nonempty")
        for b in self.bits_values:
            if b != INFINITE and (b < 1 or int(b) != b):
                raise ConfigError("bits_values", f"invalid resolution {b}")
        if not self.rho_dbm_values:
            raise ConfigError("rho_dbm_values", "must be nonempty")
        if not all(math.isfinite(r) for r in self.rho_dbm_values):
            raise ConfigError("rho_dbm_values", "must be finite")
        if not self.methods:
            raise ConfigError("methods", "must be nonempty")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError("methods", f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods", "duplicate method")
        if "exhaustive" in self.methods:
            for k in self.k_values:
                n = math.comb(self.n_antennas, k)
                if n > self.exhaustive_cap:
                    raise SearchTooLargeError(self.n_antennas, k, n, self.exhaustive_cap)
        return self


PROFILES = {
    "desk": {"n_antennas": 64, "trials": 200},
    "paper": {"n_antennas": 128, "trials": 200},
}


def profile_config(name: str = "desk", **overrides) -> ExperimentConfig:
    if name not in PROFILES:
        raise ConfigError("profile", f"unknown profile {name!r}")
    return replace(ExperimentConfig(), **{**PROFILES[name], **overrides})


_LIST_PARSERS = {
    "k_values": int,
    "bits_values": parse_bits,
    "rho_dbm_values": float,
    "methods": str,
}
_SCALAR_PARSERS = {
    "n_antennas": int,
    "n_users": int,
    "trials": int,
    "master_seed": int,
    "exhaustive_cap": int,
}


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse flat ``key = value`` lines; lists are comma-separated.

    CellConfig fields are accepted as top-level keys.
    """
    base = base or ExperimentConfig()
    top, cell = {}, {}
    cell_keys = set(CellConfig.field_names())
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split(sep, 1))
        key = key.removeprefix("cell.")
        try:
            if key in _LIST_PARSERS:
                items = [v.strip() for v in value.split(",") if v.strip()]
                top[key] = tuple(_LIST_PARSERS[key](v) for v in items)
            elif key in _SCALAR_PARSERS:
                top[key] = _SCALAR_PARSERS[key](value)
            elif key in cell_keys:
                cell[key] = float(value)
            else:
                raise ConfigError(key, "unknown configuration key")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(key, f"cannot parse {value!r}: {exc}") from None
    if cell:
        top["cell"] = replace(base.cell, **cell)
    return replace(base, **top)


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), base)


@dataclass(frozen=True, order=True)
class ExperimentRecord:
    method: str
    K: int
    bits: float
    rho_dbm: float
    trial: int
    capacity_bps_hz: float

    def key(self):
        return (self.method, self.K, self.bits, self.rho_dbm, self.trial)


def trial_seed(master_seed: int, trial: int, *stream) -> np.random.SeedSequence:
    """Substream for ``trial``; independent of how many trials are run."""
    return np.random.SeedSequence(master_seed, spawn_key=(trial, *stream))


def trial_channel(cfg: ExperimentConfig, trial: int):
    rng = np.random.default_rng(trial_seed(cfg.master_seed, trial, 0))
    return generate_channel(cfg.n_antennas, cfg.n_users, cfg.cell, rng)


def channel_digest(H) -> str:
    return hashlib.sha256(np.ascontiguousarray(H.entries).tobytes()).hexdigest()


def run_trial(cfg: ExperimentConfig, trial: int):
    """Evaluate every cell of the sweep on one channel draw.

    Returns ``(records, channel_digest)``.
    """
    H = trial_channel(cfg, trial)
    M = H.entries
    quantizers = {b: QuantizerModel.from_bits(b) for b in cfg.bits_values}
    records = []
    fas_cache = {}
    for K in cfg.k_values:
        random_order = None
        if "random" in cfg.methods:
            rng = np.random.default_rng(trial_seed(cfg.master_seed, trial, 1, K))
            random_order = list(select_random(cfg.n_antennas, K, rng).order)
        for b, q in quantizers.items():
            for rho_dbm in cfg.rho_dbm_values:
                rho = dbm_to_linear(rho_dbm)
                for method in cfg.methods:
                    if method == "qafas":
                        order = select_qafas(M, K, rho, q).order
                    elif method == "fas":
                        if (K, rho_dbm) not in fas_cache:
                            fas_cache[K, rho_dbm] = select_fas(M, K, rho).order
                        order = fas_cache[K, rho_dbm]
                    elif method == "random":
                        order = random_order
                    else:
                        order = select_exhaustive(M, K, rho, q, cap=cfg.exhaustive_cap).order
                    cap = capacity_penalty_form(M[list(order)], rho, q)
                    records.append(ExperimentRecord(method, K, b, float(rho_dbm), trial, cap))
    return records, channel_digest(H)


def _run_trial_records(args):
    cfg, trial = args
    return run_trial(cfg, trial)[0]


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[ExperimentRecord]:
    """All records of the sweep, sorted by (method, K, bits, rho_dbm, trial)."""
    cfg.validate()
    jobs = [(cfg, t) for t in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_trial_records, jobs))
    else:
        chunks = [_run_trial_records(job) for job in jobs]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=ExperimentRecord.key)
    return records


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def write_records_csv(records, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RUN_HEADER)
    for r in records:
        w.writerow([r.method, r.K, format_bits(r.bits), _fmt(r.rho_dbm), r.trial, _fmt(r.capacity_bps_hz)])


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()


def read_records_csv(fh) -> list[ExperimentRecord]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != RUN_HEADER:
        raise ConfigError("header", f"expected {','.join(RUN_HEADER)}, got {reader.fieldnames}")
    out = []
    for row in reader:
        out.append(ExperimentRecord(
            method=row["method"],
            K=int(row["K"]),
            bits=parse_bits(row["bits"]),
            rho_dbm=float(row["rho_dbm"]),
            trial=int(row["trial"]),
            capacity_bps_hz=float(row["capacity_bps_hz"]),
        ))
    return out


@dataclass(frozen=True)
class SummaryRow:
    method: str
    K: int
    bits: float
    rho_dbm: float
    trials: int
    mean_capacity: float
    stderr: float


def summarize(records) -> list[SummaryRow]:
    """Mean and standard error per (method, K, bits, rho_dbm) cell.

    Sums run in ascending trial order through ``math.fsum`` so the result
    does not depend on input order.
    """
    records = sorted(records, key=ExperimentRecord.key)
    if not records:
        raise EmptyTableError("no records to summarize")
    rows = []
    for cell, group in groupby(records, key=lambda r: r.key()[:4]):
        values = [r.capacity_bps_hz for r in group]
        n = len(values)
        mean = math.fsum(values) / n
        if n > 1:
            var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
            se = math.sqrt(var / n)
        else:
            se = 0.0
        rows.append(SummaryRow(*cell, trials=n, mean_capacity=mean, stderr=se))
    return rows


def write_summary_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r in rows:
        w.writerow([r.method, r.K, format_bits(r.bits), _fmt(r.rho_dbm), r.trials,
                    _fmt(r.mean_capacity), _fmt(r.stderr)])


def mean_table(rows) -> dict:
    """``{(method, K, bits, rho_dbm): mean}`` lookup for summary rows."""
    return {(r.method, r.K, r.bits, r.rho_dbm): r.mean_capacity for r in rows}

