"""Command-line front end.

Subcommands: pk, block-bep, esc-bounds, simulate, select. Output is CSV on
stdout (or --out): one "#" metadata line carrying the full configuration,
a header line, then data rows. Floats are written in shortest round-trip
form, so parsing a column back with float() reproduces the computed value
bit-for-bit. Exit codes: 0 success, 2 configuration error, 3 internal
consistency violation.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace

import numpy as np

from .blockcodes import p_burst, p_rand, p_rand_burst
from .channel import GEParams, sample_blocks
from .counts import erasure_count_pmf
from .errors import ConsistencyError, ParameterError
from .selection import sweep
from .streaming import DEFAULT_MAX_ENUM, EscParams, admissible_mask, build_bounds_report, exact_bep


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_eps_grid(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ParameterError(f"--eps-grid wants start,stop,points, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"--eps-grid wants start,stop,points, got {text!r}") from exc
    if not 0.0 < start <= 1.0 or not 0.0 < stop <= 1.0:
        raise ParameterError("--eps-grid endpoints must lie in (0, 1] (log spacing)")
    if points < 1:
        raise ParameterError("--eps-grid needs points >= 1")
    if points == 1:
        return [start]
    return [float(x) for x in np.geomspace(start, stop, points)]


def _eps_values(args) -> list[float]:
    if args.eps_grid is not None:
        return _parse_eps_grid(args.eps_grid)
    return [args.eps0]


def _channel(args, eps0: float) -> GEParams:
    return GEParams(alpha=args.alpha, beta=args.beta, eps0=eps0, eps1=args.eps1)


def _meta(args, command: str, pairs: list[tuple[str, object]]) -> str:
    fields = [f"{key}={_fmt(value)}" for key, value in pairs]
    return f"# gebep {command} " + " ".join(fields)


def _emit(out_path, meta: str, header: list[str], rows: list[list]) -> None:
    stream = open(out_path, "w", newline="") if out_path else sys.stdout
    try:
        stream.write(meta + "\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    finally:
        if out_path:
            stream.close()


def _block_n(args) -> int:
    if args.n is not None:
        return args.n
    return args.tau + 1 - args.a + args.b


def cmd_pk(args) -> None:
    ge = _channel(args, args.eps0)
    n = args.n if args.n is not None else 14
    if n < 1:
        raise ParameterError(f"block length n must be >= 1, got {n}")
    rows = [[n, k, erasure_count_pmf(ge, n, k)] for k in range(n + 1)]
    meta = _meta(args, "pk", [
        ("alpha", args.alpha), ("beta", args.beta), ("eps0", args.eps0),
        ("eps1", args.eps1), ("n", n),
    ])
    _emit(args.out, meta, ["n", "k", "p_nk"], rows)


def cmd_block_bep(args) -> None:
    n = args.n if args.n is not None else 14
    rows = []
    for eps in _eps_values(args):
        ge = _channel(args, eps)
        rows.append([
            eps,
            p_rand(ge, n, args.a),
            p_burst(ge, n, args.b),
            p_rand_burst(ge, n, args.a, args.b),
        ])
    meta = _meta(args, "block-bep", [
        ("alpha", args.alpha), ("beta", args.beta), ("eps1", args.eps1),
        ("eps_grid", args.eps_grid if args.eps_grid else args.eps0),
        ("a", args.a), ("b", args.b), ("n", n),
    ])
    _emit(args.out, meta, ["eps", "p_rand", "p_burst", "p_rand_burst"], rows)


def cmd_esc_bounds(args) -> None:
    n = _block_n(args)
    esc = EscParams(args.a, args.b, args.tau, n)
    with_exact = n <= args.max_enum
    rows = []
    for eps in _eps_values(args):
        ge = _channel(args, eps)
        report = build_bounds_report(ge, esc, with_exact=with_exact, max_enum=args.max_enum)
        row = [eps, report.lower_simple, report.lower_improved]
        if with_exact:
            row.append(report.exact)
        row += [report.upper_improved, report.upper_simple]
        rows.append(row)
    header = ["eps", "lower_simple", "lower_improved"]
    if with_exact:
        header.append("exact")
    header += ["upper_improved", "upper_simple"]
    meta = _meta(args, "esc-bounds", [
        ("alpha", args.alpha), ("beta", args.beta), ("eps1", args.eps1),
        ("eps_grid", args.eps_grid if args.eps_grid else args.eps0),
        ("a", args.a), ("b", args.b), ("tau", args.tau), ("n", n),
        ("max_enum", args.max_enum),
    ])
    _emit(args.out, meta, header, rows)


def cmd_simulate(args) -> None:
    n = _block_n(args)
    esc = EscParams(args.a, args.b, args.tau, n)
    rows = []
    for idx, eps in enumerate(_eps_values(args)):
        ge = _channel(args, eps)
        blocks = sample_blocks(ge, n, args.trials, args.seed + idx)
        failures = int((~admissible_mask(blocks, args.a, args.b, args.tau)).sum())
        estimate = failures / args.trials
        sigma = math.sqrt(estimate * (1.0 - estimate) / args.trials)
        analytic = exact_bep(ge, esc, max_enum=args.max_enum) if n <= args.max_enum else None
        rows.append([
            eps, args.trials, failures, estimate,
            max(0.0, estimate - 4.0 * sigma), min(1.0, estimate + 4.0 * sigma),
            analytic,
        ])
    meta = _meta(args, "simulate", [
        ("alpha", args.alpha), ("beta", args.beta), ("eps1", args.eps1),
        ("eps_grid", args.eps_grid if args.eps_grid else args.eps0),
        ("a", args.a), ("b", args.b), ("tau", args.tau), ("n", n),
        ("trials", args.trials), ("seed", args.seed), ("max_enum", args.max_enum),
    ])
    _emit(args.out, meta,
          ["eps", "trials", "failures", "estimate", "ci_low", "ci_high", "analytic_exact"],
          rows)


def cmd_select(args) -> None:
    base = _channel(args, args.eps0)
    p_th_values = args.pth if args.pth else [1e-4]
    entries = sweep(base, _eps_values(args), args.tau, p_th_values)
    rows = []
    for entry in entries:
        res = entry.result
        if res.feasible:
            rows.append([
                entry.eps, entry.p_th, entry.family,
                res.a, res.b, res.n, res.k, res.rate, res.bound_value, True,
            ])
        else:
            rows.append([
                entry.eps, entry.p_th, entry.family,
                None, None, None, None, None, res.bound_value, False,
            ])
    meta = _meta(args, "select", [
        ("alpha", args.alpha), ("beta", args.beta), ("eps1", args.eps1),
        ("eps_grid", args.eps_grid if args.eps_grid else args.eps0),
        ("tau", args.tau), ("pth", ",".join(_fmt(p) for p in p_th_values)),
    ])
    _emit(args.out, meta,
          ["eps", "p_th", "family", "a", "b", "n", "k", "rate", "bound_value", "feasible"],
          rows)


def build_parser() -> argparse.ArgumentParser:
    channel = argparse.ArgumentParser(add_help=False)
    channel.add_argument("--alpha", type=float, default=1e-4, help="good-to-bad switch probability (default 1e-4)")
    channel.add_argument("--beta", type=float, default=0.5, help="bad-to-good switch probability (default 0.5)")
    channel.add_argument("--eps0", type=float, default=0.01, help="erasure probability in the good state (default 0.01)")
    channel.add_argument("--eps1", type=float, default=1.0, help="erasure probability in the bad state (default 1.0)")
    channel.add_argument("--eps-grid", default=None, metavar="START,STOP,POINTS",
                         help="log-spaced grid applied to eps0 (eps1 stays fixed); overrides --eps0")
    channel.add_argument("--out", default=None, help="write CSV here instead of stdout")

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--a", type=int, default=3, help="random-erasure budget per window (default 3)")
    code.add_argument("--b", type=int, default=6, help="burst-span budget per window (default 6)")
    code.add_argument("--tau", type=int, default=10, help="decoding delay (window length tau+1, default 10)")
    code.add_argument("--n", type=int, default=None,
                      help="block length (default: tau+1-a+b for streaming commands, 14 for block commands)")

    guard = argparse.ArgumentParser(add_help=False)
    guard.add_argument("--max-enum", type=int, default=DEFAULT_MAX_ENUM,
                       help=f"exact-enumeration guard on n (default {DEFAULT_MAX_ENUM})")

    parser = argparse.ArgumentParser(
        prog="gebep",
        description="Block-erasure probabilities and streaming-code bounds over the Gilbert-Elliott channel",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pk", parents=[channel, code], help="erasure-count pmf P(n, k) for k = 0..n")
    p.set_defaults(func=cmd_pk)

    p = sub.add_parser("block-bep", parents=[channel, code],
                       help="block-code failure probabilities over the eps grid")
    p.set_defaults(func=cmd_block_bep)

    p = sub.add_parser("esc-bounds", parents=[channel, code, guard],
                       help="simple/improved/exact streaming BEP bounds over the eps grid")
    p.set_defaults(func=cmd_esc_bounds)

    p = sub.add_parser("simulate", parents=[channel, code, guard],
                       help="Monte Carlo block-failure estimate vs the exact value")
    p.add_argument("--trials", type=int, default=100000, help="blocks per grid point (default 100000)")
    p.add_argument("--seed", type=int, default=1, help="base RNG seed; row i uses seed+i (default 1)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("select", parents=[channel, code],
                       help="highest-rate feasible (a, b) per family over the grid")
    p.add_argument("--pth", type=float, action="append", default=None,
                   help="target failure probability; repeatable (default 1e-4)")
    p.set_defaults(func=cmd_select)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParameterError as exc:
        print(f"gebep: configuration error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"gebep: internal consistency violation: {exc}", file=sys.stderr)
        return 3
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
