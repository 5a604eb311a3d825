"""Command-line interface.

Subcommands: ``diff`` (iterated differential of an expression), ``reduce``
(rewrite toward a normal form), ``member`` (ideal membership with witness),
``verify`` (run the identity check suites and emit a report).

Exit codes: 0 ok, 1 check failure / non-membership, 2 parse or config
error, 3 inconclusive (bounds or step budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import sys

from .calculus import Calculus
from .config import (
    ConfigError, SessionConfig, FORMATS, ORDERS, build_map, load_config,
)
from .differential import d_power
from .ideal import Ideal, ReduceBudgetExceeded, ReduceNotApplicable
from .parsing import (
    ParseError, parse_expression, format_tensor, format_tensor_latex,
    tensor_to_obj,
)
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcubed",
        description="Exact calculus in a graded differential algebra "
                    "with d^3 = 0 over a free noncommutative algebra.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON session configuration")
    common.add_argument("--preset", metavar="NAME",
                        help="structure-map preset "
                             "(commutative, scalar-twist, constant)")
    common.add_argument("-n", type=int, dest="n", metavar="N",
                        help="generator count (default from config, else 2)")
    common.add_argument("--twist", metavar="EXPR",
                        help="scalar for the scalar-twist preset (default q)")
    common.add_argument("--format", choices=FORMATS, dest="format",
                        help="output format (default text)")
    common.add_argument("--grade-bound", type=int, metavar="N")
    common.add_argument("--word-bound", type=int, metavar="N")
    common.add_argument("--size-cap", type=int, metavar="N",
                        help="spanning-set size cap for the membership oracle")
    common.add_argument("--max-steps", type=int, metavar="N",
                        help="rewrite step budget")
    common.add_argument("--order", choices=ORDERS,
                        help="rewrite normal-form orientation")
    common.add_argument("--seed", type=int, metavar="N",
                        help="seed for sampled checks")

    sub = parser.add_subparsers(dest="command", required=True)

    p_diff = sub.add_parser("diff", parents=[common],
                            help="apply the differential k times")
    p_diff.add_argument("expr", help="expression to differentiate")
    p_diff.add_argument("-k", type=int, choices=(1, 2, 3), default=1,
                        help="how many times to apply d (default 1)")
    p_diff.add_argument("--mod-ideal", action="store_true",
                        help="append the ideal-membership verdict")

    p_reduce = sub.add_parser("reduce", parents=[common],
                              help="rewrite an expression toward normal form")
    p_reduce.add_argument("expr")

    p_member = sub.add_parser("member", parents=[common],
                              help="decide ideal membership, with witness")
    p_member.add_argument("expr")

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the identity check suites")
    p_verify.add_argument("--suite", action="append", default=None,
                          metavar="NAME",
                          help=f"suite to run (repeatable): all, {', '.join(SUITES)}")
    p_verify.add_argument("--report", metavar="PATH",
                          help="write the JSON report to this file")
    p_verify.add_argument("--timings", action="store_true",
                          help="include wall-clock timings in the JSON report")
    p_verify.add_argument("--max-word-len", type=int, default=2,
                          help="exhaustive word length for sampled checks")
    return parser


def _session(args) -> SessionConfig:
    cfg = load_config(args.config) if args.config else SessionConfig()
    if args.preset is not None:
        cfg.preset = args.preset
        cfg.xi_entries = None
    if args.config is None and cfg.preset is None and cfg.xi_entries is None:
        cfg.preset = "commutative"
    if args.n is not None:
        cfg.n = args.n
    if args.twist is not None:
        cfg.twist = args.twist
    if args.format is not None:
        cfg.format = args.format
    if args.seed is not None:
        cfg.seed = args.seed
    if args.order is not None:
        cfg.reduce_order = args.order
    for flag, attr in (("grade_bound", "grade_bound"), ("word_bound", "word_bound"),
                       ("size_cap", "size_cap"), ("max_steps", "max_steps")):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg.bounds, attr, value)
    cfg.validate()
    return cfg


def _render(e, fmt: str) -> str:
    if fmt == "latex":
        return format_tensor_latex(e)
    if fmt == "json":
        return json.dumps(tensor_to_obj(e), sort_keys=True)
    return format_tensor(e)


def _witness_lines(witness, n):
    from .freealg import AlgebraElement
    from .tensoralg import TensorElement

    def monomial_text(dword, word):
        return format_tensor(TensorElement.monomial(
            n, dword, AlgebraElement.monomial(n, word)))

    lines = []
    for term in witness:
        left = monomial_text(term.left_dword, term.left_word)
        right = monomial_text(term.right_dword, term.right_word)
        ix = f"{term.i},{term.j}" if term.k is None else f"{term.i},{term.j},{term.k}"
        lines.append(f"  ({term.coeff}) * [{left}] {term.family}({ix}) [{right}]")
    return lines


def _membership_exit(verdict) -> int:
    if verdict.is_member:
        return EXIT_OK
    if verdict.status == "bound_exceeded":
        return EXIT_INCONCLUSIVE
    return EXIT_FAILURE


def cmd_diff(args, cfg: SessionConfig, ideal: Ideal) -> int:
    expr = parse_expression(args.expr, ideal.calc)
    result = d_power(ideal.calc, expr, args.k)
    print(_render(result, cfg.format))
    if not args.mod_ideal:
        return EXIT_OK
    verdict = ideal.membership(result, cfg.bounds.grade_bound,
                               cfg.bounds.word_bound)
    if verdict.is_member:
        print("member of I_q")
    elif verdict.status == "bound_exceeded":
        print(f"membership inconclusive: {verdict.detail}")
    else:
        print("not a member of I_q at the given bounds")
        print(f"residual: {format_tensor(verdict.residual)}")
    return _membership_exit(verdict)


def cmd_reduce(args, cfg: SessionConfig, ideal: Ideal) -> int:
    expr = parse_expression(args.expr, ideal.calc)
    try:
        result = ideal.reduce(expr, max_steps=cfg.bounds.max_steps,
                              order=cfg.reduce_order)
    except ReduceNotApplicable as err:
        print(f"reduce refused: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ReduceBudgetExceeded as err:
        print(f"reduce inconclusive: {err}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    print(_render(result, cfg.format))
    return EXIT_OK


def cmd_member(args, cfg: SessionConfig, ideal: Ideal) -> int:
    expr = parse_expression(args.expr, ideal.calc)
    verdict = ideal.membership(expr, cfg.bounds.grade_bound,
                               cfg.bounds.word_bound)
    if cfg.format == "json":
        obj = {"status": verdict.status}
        if verdict.witness is not None:
            obj["witness"] = [t.to_dict() for t in verdict.witness]
        if verdict.residual is not None:
            obj["residual"] = tensor_to_obj(verdict.residual)
        if verdict.detail:
            obj["detail"] = verdict.detail
        print(json.dumps(obj, sort_keys=True))
    else:
        print(f"status: {verdict.status}")
        if verdict.is_member:
            print("witness:" if verdict.witness else "witness: (zero element)")
            for line in _witness_lines(verdict.witness, ideal.n):
                print(line)
        elif verdict.residual is not None:
            print(f"residual: {format_tensor(verdict.residual)}")
        if verdict.detail:
            print(f"detail: {verdict.detail}")
    return _membership_exit(verdict)


def cmd_verify(args, cfg: SessionConfig, ideal: Ideal) -> int:
    suites = tuple(args.suite) if args.suite else ("all",)
    preset_name = cfg.preset or "custom"
    report = run_suite(ideal, suites, seed=cfg.seed,
                       max_word_len=args.max_word_len, preset=preset_name,
                       grade_bound=cfg.bounds.grade_bound,
                       word_bound=cfg.bounds.word_bound)
    if cfg.format == "json":
        print(json.dumps(report.to_dict(with_timing=args.timings),
                         sort_keys=True))
    else:
        print(report.to_text(), end="")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(with_timing=args.timings), handle,
                      sort_keys=True, indent=2)
            handle.write("\n")
    return report.exit_code


COMMANDS = {"diff": cmd_diff, "reduce": cmd_reduce,
            "member": cmd_member, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _session(args)
        bmap = build_map(cfg)
        ideal = Ideal(Calculus(bmap), size_cap=cfg.bounds.size_cap)
        return COMMANDS[args.command](args, cfg, ideal)
    except (ConfigError, ParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
