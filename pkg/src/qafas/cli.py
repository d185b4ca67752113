"""Command line entry point: ``qafas run | summarize | select``."""
from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import replace

from .capacity import prefix_capacities
from .channel import read_channel_file
from .exceptions import QafasError, SearchTooLargeError
from .harness import (
    dbm_to_linear,
    load_config,
    profile_config,
    read_records_csv,
    run_experiment,
    summarize,
    write_records_csv,
    write_summary_csv,
)
from .quantization import QuantizerModel, parse_bits
from .selection import DEFAULT_EXHAUSTIVE_CAP, select_exhaustive, select_fas, select_qafas, select_random

EXIT_CONFIG = 2
EXIT_ORACLE_CAP = 3


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cmd_run(args):
    cfg = profile_config(args.profile)
    if args.config:
        cfg = load_config(args.config, cfg)
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    records = run_experiment(cfg.validate(), workers=args.workers)
    with _open_out(args.out) as fh:
        write_records_csv(records, fh)


def _cmd_summarize(args):
    if args.inp in (None, "-"):
        records = read_records_csv(sys.stdin)
    else:
        with open(args.inp, newline="") as fh:
            records = read_records_csv(fh)
    with _open_out(args.out) as fh:
        write_summary_csv(summarize(records), fh)


def _cmd_select(args):
    H = read_channel_file(args.channel)
    q = QuantizerModel.from_bits(parse_bits(args.bits))
    rho = dbm_to_linear(args.rho_dbm)
    if args.method == "qafas":
        res = select_qafas(H, args.k, rho, q)
    elif args.method == "fas":
        res = select_fas(H, args.k, rho)
    elif args.method == "random":
        res = select_random(H.n_antennas, args.k, args.seed)
    else:
        res = select_exhaustive(H, args.k, rho, q, cap=args.cap)
    # report capacity under the actual quantizer for every method
    trace = prefix_capacities(H, res.order, rho, q)
    with _open_out(args.out) as fh:
        fh.write("stage,antenna,capacity_bps_hz\n")
        for n, (j, c) in enumerate(zip(res.order, trace)):
            fh.write(f"{n},{j},{c:.10g}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qafas", description="Quantization-aware antenna selection experiments")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo sweep and write per-trial CSV")
    run.add_argument("--config", help="flat key = value config file")
    run.add_argument("--out", help="output CSV (default stdout)")
    run.add_argument("--seed", type=int, help="override master_seed")
    run.add_argument("--profile", choices=["desk", "paper"], default="desk")
    run.add_argument("--workers", type=int, default=1, help="parallel trial processes")
    run.set_defaults(func=_cmd_run)

    summ = sub.add_parser("summarize", help="per-cell mean and standard error")
    summ.add_argument("--in", dest="inp", help="run CSV (default stdin)")
    summ.add_argument("--out", help="output CSV (default stdout)")
    summ.set_defaults(func=_cmd_summarize)

    sel = sub.add_parser("select", help="one-shot selection on a channel file")
    sel.add_argument("channel", help="channel file: 'N_r N_u' header then rows of re+imj")
    sel.add_argument("--k", type=int, required=True)
    sel.add_argument("--bits", default="3", help="resolution in bits, or 'inf'")
    sel.add_argument("--rho-dbm", type=float, default=5.0)
    sel.add_argument("--method", choices=["qafas", "fas", "random", "exhaustive"], default="qafas")
    sel.add_argument("--seed", type=int, default=0, help="seed for random selection")
    sel.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP, help="exhaustive subset cap")
    sel.add_argument("--out", help="output CSV (default stdout)")
    sel.set_defaults(func=_cmd_select)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SearchTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_CAP
    except (QafasError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
