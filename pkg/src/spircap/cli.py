"""Command-line entry point.

Exit codes: 0 ok, 1 internal error, 2 invalid pattern, 3 insufficient shared
randomness, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .capacity import spir_capacity
from .errors import BudgetExceeded, FullSetPresent, PatternError, SchemeError
from .patterns import load_patterns
from .protocol import MessageStore, measure_rate, plan_scheme, run_session
from .rational import format_rational, parse_rational
from .selftest import run_selftest
from .verifier import DEFAULT_BUDGET, verify_all

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PATTERN = 2
EXIT_RHO = 3
EXIT_VERIFY = 4


class CliExit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _load(args):
    if not args.pattern:
        raise CliExit(EXIT_PATTERN, "--pattern FILE (or inline JSON) is required")
    try:
        pc, pe = load_patterns(args.pattern)
        return pc, pe, spir_capacity(pc, pe, args.rho)
    except FullSetPresent as exc:
        raise CliExit(EXIT_PATTERN, f"invalid pattern: {exc}") from None
    except (PatternError, OSError, json.JSONDecodeError) as exc:
        raise CliExit(EXIT_PATTERN, f"invalid pattern: {exc}") from None


def _plan(args):
    pc, pe, report = _load(args)
    threshold = report.rho_threshold
    if not args.force_threshold:
        if args.rho is None:
            raise CliExit(EXIT_RHO, f"no --rho given; at least {format_rational(threshold)} is needed (or --force-threshold)")
        if args.rho < threshold:
            raise CliExit(
                EXIT_RHO,
                f"rho = {format_rational(args.rho)} is below 1/(F*-1) = {format_rational(threshold)}: "
                "no scheme exists and the capacity is zero",
            )
    params = plan_scheme(report.y_star, report.f_star, args.k, report.joint_pattern)
    if args.counts:
        params = params.with_counts([int(c) for c in args.counts.split(",")])
    return pc, pe, report, params


def cmd_capacity(args) -> int:
    _, _, report = _load(args)
    _emit(args, report.to_dict(), report.summary_lines())
    return EXIT_OK


def cmd_scheme(args) -> int:
    _, _, report, params = _plan(args)
    s = params.summary()
    lines = [
        f"L_bar     {s['l_bar']}",
        f"L         {s['msg_len']}",
        f"k         {s['code_dim']}",
        f"q         {s['q']}",
        f"counts    ({', '.join(str(c) for c in s['per_server_counts'])})",
        f"rho used  {s['rho']}",
    ]
    _emit(args, s, lines)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _, _, report, params = _plan(args)
    w = MessageStore.random(params, args.seed)
    tr = run_session(params, w, args.theta, args.seed)
    text = json.dumps(tr.to_dict(), indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    elif args.format == "json":
        print(text)
    rate = measure_rate(params)
    print(f"rate {format_rational(rate)}")
    if not tr.correct:
        raise CliExit(EXIT_VERIFY, "decoded message differs from W_theta")
    return EXIT_OK


def cmd_verify(args) -> int:
    pc, pe, report, params = _plan(args)
    bundle = verify_all(params, pc, pe, trials=args.trials, seed=args.seed, budget=args.budget)
    lines = []
    for c in bundle.certificates:
        tag = "info" if c.informational else ("pass" if c.verdict else "FAIL")
        lines.append(f"{tag:4}  {c.constraint:16} {c.method}")
    lines += [f"skip  {s}" for s in bundle.skipped]
    _emit(args, bundle.to_dict(), lines)
    return EXIT_OK if bundle.passed else EXIT_VERIFY


def cmd_selftest(args) -> int:
    res = run_selftest(patterns=args.trials, seed=args.seed, max_n=3 if args.quick else 6)
    lines = [
        f"duality     {res.duality_cases - len(res.duality_failures)}/{res.duality_cases}",
        f"closed form {res.closed_form_cases - len(res.closed_form_failures)}/{res.closed_form_cases}",
        "pass" if res.passed else "FAIL",
    ]
    _emit(args, res.to_dict(), lines)
    return EXIT_OK if res.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spircap", description="Exact SPIR capacity and scheme simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default=1000):
        p.add_argument("--pattern", help="pattern JSON file or inline JSON object")
        p.add_argument("--rho", type=parse_rational, default=None, help="shared randomness ratio NUM/DEN")
        p.add_argument("--k", type=int, default=2, help="number of messages K (default 2)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max states for exhaustive checks")
        p.add_argument("--format", choices=("json", "table"), default="table")
        p.add_argument("--force-threshold", action="store_true", help="use rho = 1/(F*-1)")

    for name, fn, help_ in [
        ("capacity", cmd_capacity, "capacity report for a pattern file"),
        ("scheme", cmd_scheme, "plan the coded scheme"),
        ("simulate", cmd_simulate, "run one retrieval session"),
        ("verify", cmd_verify, "certify correctness and privacy"),
        ("selftest", cmd_selftest, "duality and closed-form sweeps"),
    ]:
        p = sub.add_parser(name, help=help_)
        common(p, 100 if name == "selftest" else 1000)
        p.set_defaults(func=fn)
        if name in ("simulate", "verify", "scheme"):
            p.add_argument("--counts", help="override per-server query counts, e.g. 1,1,1,1,4")
        if name == "simulate":
            p.add_argument("--theta", type=int, default=1)
            p.add_argument("--output", help="write the transcript JSON here")
        if name == "selftest":
            p.add_argument("--quick", action="store_true", help="only N <= 3")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except SchemeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY if args.command == "verify" else EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
