"""Command-line front end.

    sabmsm gen     --curve toy --size 8 --seed 1 --out v.txt
    sabmsm compute --vectors v.txt --algo pippenger --combine recursive
    sabmsm verify  --vectors v.txt
    sabmsm bench   --curve bn128 --sizes 256,4096 --algos naive,pippenger --csv b.csv
    sabmsm sim     --bams 1,2 --size 1048576 --csv s.csv

Exit codes: 0 success, 1 result mismatch, 2 usage error, 3 bad input file.
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from typing import List, Optional

from .curve import OpCounters, to_affine
from .curves import CURVES, get_curve
from .msm import MsmConfig, msm_naive, msm_pippenger
from .vectors import (
    BenchRow,
    VectorFormatError,
    format_point,
    generate_vectors,
    read_vectors,
    write_bench_csv,
    write_vectors,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_FORMAT = 0, 1, 2, 3

ALGOS = ("naive", "pippenger", "pippenger-recursive")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _size(text: str) -> int:
    # accepts 4096, 2^20, 1<<20, 64e6
    t = text.strip()
    try:
        if "^" in t:
            base, exp = t.split("^")
            return int(base) ** int(exp)
        if "<<" in t:
            base, exp = t.split("<<")
            return int(base) << int(exp)
        v = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size {text!r}") from None
    if v != int(v):
        raise argparse.ArgumentTypeError(f"bad size {text!r}")
    return int(v)


def _msm_config(args, strategy=None) -> MsmConfig:
    try:
        return MsmConfig(args.window, strategy or getattr(args, "combine", "running-sum"), args.inner_window, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(path):
    try:
        return read_vectors(path)
    except VectorFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None


def _run_algo(algo: str, vs, args, counters: OpCounters):
    curve = vs.curve
    if algo == "naive":
        return msm_naive(vs.scalars, vs.points, curve, counters)
    strategy = "recursive" if algo == "pippenger-recursive" else None
    return msm_pippenger(vs.scalars, vs.points, curve, _msm_config(args, strategy), counters)


# -- subcommands -------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.size < 1:
        raise UsageError("--size must be >= 1")
    vs = generate_vectors(args.curve, args.size, args.seed)
    if not args.no_result:
        curve = vs.curve
        vs.expected_result = to_affine(msm_pippenger(vs.scalars, vs.points, curve), curve)
    write_vectors(vs, args.out)
    print(f"wrote {vs.m} pairs for {vs.curve_name} to {args.out}")
    return EXIT_OK


def cmd_compute(args) -> int:
    vs = _load(args.vectors)
    c = OpCounters()
    algo = "pippenger-recursive" if args.algo == "pippenger" and args.combine == "recursive" else args.algo
    start = time.perf_counter()
    R = _run_algo(algo, vs, args, c)
    elapsed = time.perf_counter() - start
    line = "result " + format_point(to_affine(R, vs.curve), vs.curve)
    print(line)
    print(f"# algo={algo} m={vs.m} seconds={elapsed:.6f} mod_muls={c.mod_muls} mod_sqrs={c.mod_sqrs} "
          f"point_adds={c.point_adds} point_doubles={c.point_doubles} uda_ops={c.uda_ops}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(line + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    vs = _load(args.vectors)
    if vs.expected_result is None:
        raise InputError(f"{args.vectors}: no result line to verify against")
    curve = vs.curve
    status = EXIT_OK
    for strategy in ("running_sum", "recursive"):
        got = to_affine(msm_pippenger(vs.scalars, vs.points, curve, _msm_config(args, strategy)), curve)
        ok = got == vs.expected_result
        print(f"{strategy:12s} {'ok' if ok else 'MISMATCH'}")
        if not ok:
            status = EXIT_MISMATCH
    return status


def cmd_bench(args) -> int:
    for algo in args.algos:
        if algo not in ALGOS:
            raise UsageError(f"unknown algo {algo!r}; choose from {', '.join(ALGOS)}")
    rows = []
    for m in args.sizes:
        if m < 1:
            raise UsageError("sizes must be >= 1")
        vs = generate_vectors(args.curve, m, args.seed)
        for algo in args.algos:
            c = OpCounters()
            start = time.perf_counter()
            _run_algo(algo, vs, args, c)
            elapsed = time.perf_counter() - start
            row = BenchRow(vs.curve_name, algo, m, args.window, elapsed, c.mul_total,
                           c.point_adds, c.point_doubles)
            rows.append(row)
            print(f"{row.curve:10s} {algo:20s} m={m:<8d} {elapsed:9.3f}s  {row.mpps:.6f} M-MSM-PPS  "
                  f"mod_muls={row.mod_muls}")
    if args.csv:
        write_bench_csv(rows, args.csv)
    return EXIT_OK


def cmd_sim(args) -> int:
    from .sim import config_from_mapping, load_config, simulate, write_sim_csv

    try:
        base = load_config(args.config) if args.config else None
    except OSError as exc:
        raise InputError(str(exc)) from None
    except (ValueError, KeyError) as exc:
        raise InputError(f"{args.config}: {exc}") from None

    scalar = {"fmax_hz": args.fmax, "uda_latency": args.latency, "window_bits": args.window,
              "scalar_bits": args.scalar_bits, "inner_window_bits": args.inner_window,
              "seed": args.seed, "host_fixed_seconds": args.host_fixed}
    if args.curve:
        scalar["scalar_bits"] = get_curve(args.curve).scalar_bits
    lists = {"bam_count": args.bams, "msm_size": args.size, "hazard_policy": args.hazard}
    fixed = {k: str(v) for k, v in scalar.items() if v is not None}
    sweep_keys = [k for k, v in lists.items() if v]
    configs = []
    for combo in itertools.product(*(lists[k] for k in sweep_keys)):
        values = dict(fixed)
        values.update({k: str(v) for k, v in zip(sweep_keys, combo)})
        try:
            configs.append(config_from_mapping(values, base))
        except (ValueError, KeyError) as exc:
            raise UsageError(str(exc)) from None

    reports = []
    for cfg in configs:
        r = simulate(cfg)
        reports.append(r)
        print(f"S={cfg.bam_count} m={cfg.msm_size} {cfg.hazard_policy:5s} cycles={r.total_cycles} "
              f"seconds={r.total_seconds:.6f} util={r.uda_utilization:.4f} "
              f"throughput={r.throughput_mpps:.4f} M-MSM-PPS")
    if args.csv:
        write_sim_csv(configs, reports, args.csv)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sabmsm", description="Bucket-method MSM engine and accelerator model")
    sub = parser.add_subparsers(dest="command", required=True)
    curve_names = sorted(CURVES)

    def engine_flags(p):
        p.add_argument("--window", type=int, default=12, help="window width k")
        p.add_argument("--inner-window", type=int, default=4, help="inner window k' for recursive reduction")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for window jobs")

    p = sub.add_parser("gen", help="write a random vector file")
    p.add_argument("--curve", choices=curve_names, required=True)
    p.add_argument("--size", type=_size, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-result", action="store_true", help="omit the expected result line")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compute", help="evaluate the MSM in a vector file")
    p.add_argument("--vectors", required=True)
    p.add_argument("--algo", choices=("naive", "pippenger"), default="pippenger")
    p.add_argument("--combine", choices=("running-sum", "recursive"), default="running-sum")
    p.add_argument("--out")
    engine_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check a vector file's result line")
    p.add_argument("--vectors", required=True)
    engine_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time MSM runs and write CSV")
    p.add_argument("--curve", choices=curve_names, required=True)
    p.add_argument("--sizes", type=_csv_list(_size), required=True)
    p.add_argument("--algos", type=_csv_list(str), default=["naive", "pippenger"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv")
    engine_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sim", help="run the accelerator performance model")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--bams", type=_csv_list(int))
    p.add_argument("--size", type=_csv_list(_size))
    p.add_argument("--hazard", type=_csv_list(str))
    p.add_argument("--fmax", type=float)
    p.add_argument("--latency", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--inner-window", type=int)
    p.add_argument("--scalar-bits", type=int)
    p.add_argument("--curve", choices=curve_names, help="take scalar bits from a curve")
    p.add_argument("--host-fixed", type=float, help="fixed host overhead in seconds")
    p.add_argument("--seed", type=int)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_sim)
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
