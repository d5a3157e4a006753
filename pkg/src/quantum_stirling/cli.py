"""Command-line front end: ``cycle``, ``sweep``, ``zeta``, ``nsweep``, ``verify``.

Exit codes: 0 ok, 2 usage, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .cycle import DEFAULT_TAIL_TOL, ZetaForm, run_cycle
from .oracle import verify_suite
from .statistics import DomainError, GasSpec, MuPolicy, Species
from .sweep import (
    NSWEEP_HEADER,
    SWEEP_HEADER,
    ZETA_HEADER,
    SweepRow,
    SweepSpec,
    nsweep_table,
    render,
    run_sweep,
    sweep_rows_as_tuples,
    zeta_table,
)

EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 2, 3, 4


def _shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with option values; flags override it")
    parser.add_argument("--species", choices=[s.value for s in Species], default="fermi")
    parser.add_argument("--d", type=int, choices=(1, 2, 3), default=1)
    parser.add_argument("--N", type=int, default=20)
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--mu-policy", choices=[p.value for p in MuPolicy], default="paper")
    parser.add_argument("--zeta-form", choices=[z.value for z in ZetaForm], default="paired")
    parser.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="quantum-stirling",
        description="Stirling cycles of ideal quantum gases in a box with insertable barriers",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("cycle", help="evaluate one cycle")
    _shared(p)
    p.add_argument("--th", type=float, default=0.5)
    p.add_argument("--tc", type=float, default=0.25)
    subs["cycle"] = p

    p = sub.add_parser("sweep", help="mode map over a (Th, Tc) grid")
    _shared(p)
    for name in ("th", "tc"):
        p.add_argument(f"--{name}-min", type=float, default=0.01)
        p.add_argument(f"--{name}-max", type=float, default=1.0)
        p.add_argument(f"--{name}-steps", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    subs["sweep"] = p

    p = sub.add_parser("zeta", help="relative partition function and omega versus T")
    _shared(p)
    p.add_argument("--t-min", type=float, default=0.01)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--spacing", choices=("log", "linear"), default="log")
    subs["zeta"] = p

    p = sub.add_parser("nsweep", help="Carnot-scaled engine efficiency versus N and Th")
    _shared(p)
    p.add_argument("--ratio", type=float, default=0.5, help="Tc/Th")
    p.add_argument("--th-min", type=float, default=0.01)
    p.add_argument("--th-max", type=float, default=1.0)
    p.add_argument("--th-steps", type=int, default=100)
    p.add_argument("--n-list", default="10,20,40", help="comma separated particle numbers")
    subs["nsweep"] = p

    p = sub.add_parser("verify", help="run the brute-force oracle checks")
    p.add_argument("--out", default="verify_report.txt", help="text report; JSON goes next to it")
    subs["verify"] = p
    return parser, subs


def _apply_config(argv, parser, subs) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            values = json.loads(Path(known.config).read_text(encoding="utf-8"))
        except OSError as exc:
            parser.exit(EXIT_IO, f"quantum-stirling: cannot read config: {exc}\n")
        except json.JSONDecodeError as exc:
            parser.error(f"config is not valid JSON: {exc}")
        if not isinstance(values, dict):
            parser.error("config must be a JSON object")
        values = {k.replace("-", "_"): v for k, v in values.items()}
        for p in subs.values():
            valid = {a.dest for a in p._actions}
            p.set_defaults(**{k: v for k, v in values.items() if k in valid})
        # usage check against the chosen subcommand happens after parsing
        args = parser.parse_args(argv)
        valid = {a.dest for a in subs[args.command]._actions}
        unknown = sorted(set(values) - valid)
        if unknown:
            subs[args.command].error(f"unknown config keys: {', '.join(unknown)}")
        return args
    return parser.parse_args(argv)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _cmd_cycle(args, parser) -> int:
    if args.th < args.tc:
        parser.error("th must be ≥ tc")
    if args.tc <= 0:
        parser.error("tc must be positive")
    gas = GasSpec(args.species, args.N, args.mu_policy)
    result = run_cycle(gas, args.d, args.alpha, args.th, args.tc, args.tail_tol, args.zeta_form)
    for name in ("W", "Qh", "Qc"):
        print(f"{name}={getattr(result, name):.12g}")
    print(f"mode={result.mode.value}")
    for name in ("eta", "eta_scaled"):
        value = getattr(result, name)
        print(f"{name}=" + ("" if value is None else f"{value:.12g}"))
    if args.out:
        row = SweepRow.from_result(gas, args.d, result)
        _emit(render(SWEEP_HEADER, sweep_rows_as_tuples([row]), args.format), args.out)
    return 0


def _cmd_sweep(args, parser) -> int:
    try:
        spec = SweepSpec(
            species=args.species, d=args.d, N=args.N, alpha=args.alpha,
            th_min=args.th_min, th_max=args.th_max, th_steps=args.th_steps,
            tc_min=args.tc_min, tc_max=args.tc_max, tc_steps=args.tc_steps,
            mu_policy=args.mu_policy, tail_tol=args.tail_tol, zeta_form=args.zeta_form, fmt=args.format,
        )
    except ValueError as exc:
        parser.error(str(exc))
    rows = run_sweep(spec, workers=max(1, args.workers))
    _emit(render(SWEEP_HEADER, sweep_rows_as_tuples(rows), spec.fmt), args.out)
    return 0


def _cmd_zeta(args, parser) -> int:
    if not 0 < args.t_min < args.t_max or args.points < 2:
        parser.error("need 0 < t-min < t-max and points >= 2")
    gas = GasSpec(args.species, args.N, args.mu_policy)
    rows = zeta_table(gas, args.d, args.alpha, args.t_min, args.t_max, args.points, args.spacing,
                      args.tail_tol, args.zeta_form)
    _emit(render(ZETA_HEADER, rows, args.format), args.out)
    return 0


def _cmd_nsweep(args, parser) -> int:
    if not 0 < args.ratio < 1:
        parser.error("ratio must lie in (0, 1)")
    if not 0 < args.th_min <= args.th_max or args.th_steps < 1:
        parser.error("need 0 < th-min <= th-max and th-steps >= 1")
    try:
        n_values = [int(n) for n in str(args.n_list).split(",") if n.strip()]
    except ValueError:
        parser.error(f"bad --n-list {args.n_list!r}")
    th_values = np.linspace(args.th_min, args.th_max, args.th_steps) if args.th_steps > 1 else [args.th_min]
    rows = nsweep_table(Species(args.species), args.d, args.ratio, th_values, n_values, args.alpha,
                        MuPolicy(args.mu_policy), args.tail_tol, ZetaForm(args.zeta_form))
    _emit(render(NSWEEP_HEADER, rows, args.format), args.out)
    return 0


def _cmd_verify(args, parser) -> int:
    report = verify_suite(args.out)
    sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


COMMANDS = {
    "cycle": _cmd_cycle,
    "sweep": _cmd_sweep,
    "zeta": _cmd_zeta,
    "nsweep": _cmd_nsweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser, subs = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _apply_config(argv, parser, subs)
    try:
        return COMMANDS[args.command](args, subs[args.command])
    except DomainError as exc:
        print(f"quantum-stirling: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"quantum-stirling: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
