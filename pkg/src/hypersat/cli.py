"""Command-line entry point.

Subcommands expose the pipeline stages: ``check`` solves a formula end to
end (final line SAT/UNSAT/UNKNOWN; exit code 0/1/2), ``emit`` writes the
encoded problem to a file, ``oracle`` runs the bounded explicit-model
finder, ``bench`` produces verdict tables for the built-in families, and
``gen`` prints a generated family formula.  Usage and internal errors exit
with code >= 10 so they cannot be mistaken for verdicts.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import bench as B
from . import formula as F
from . import oracle as O
from . import solvers as S
from .automaton import NotSyntacticallySafeError
from .emit import FILE_EXTENSIONS, OutputFormat, emit
from .pipeline import build_problem, choose_encoding

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_UNKNOWN = 2
EXIT_MISMATCH = 3
EXIT_USAGE = 10
EXIT_INTERNAL = 11

_VERDICT_EXIT = {S.Verdict.SAT: EXIT_SAT, S.Verdict.UNSAT: EXIT_UNSAT,
                 S.Verdict.UNKNOWN: EXIT_UNKNOWN}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_formula_args(p):
    p.add_argument("--formula", "-f", help="inline formula text")
    p.add_argument("--file", help="read the formula from a file")


def _add_encoding_args(p):
    p.add_argument("--encoding", choices=["auto", "func", "pred", "lia"],
                   default="auto")
    p.add_argument("--assume-safe", action="store_true",
                   help="treat the body as a safety property even when the "
                        "syntactic check fails (unsound if wrong)")
    p.add_argument("--explicit-alphabet", action="store_true",
                   help="expand cube labels to full letters before encoding")


def _add_solver_args(p):
    p.add_argument("--solver", action="append", default=[],
                   help="solver name from the config (repeatable; portfolio)")
    p.add_argument("--timeout", type=float, default=S.DEFAULT_TIMEOUT)
    p.add_argument("--config", help="solver config file "
                                    f"(or ${S.CONFIG_ENV_VAR})")


def build_parser() -> _Parser:
    parser = _Parser(prog="hypersat",
                     description="HyperLTL satisfiability via first-order "
                                 "logic encodings")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="encode and solve a formula")
    _add_formula_args(check)
    _add_encoding_args(check)
    _add_solver_args(check)
    check.add_argument("--format", choices=["smtlib", "tptp"], default="smtlib",
                       help="format used with --emit-only")
    check.add_argument("--emit-only", action="store_true",
                       help="write the encoding instead of solving")
    check.add_argument("-o", "--output", help="output path for --emit-only")

    emit_p = sub.add_parser("emit", help="write the encoded problem to a file")
    _add_formula_args(emit_p)
    _add_encoding_args(emit_p)
    emit_p.add_argument("--format", choices=["smtlib", "tptp"],
                        default="smtlib")
    emit_p.add_argument("-o", "--output", required=True)

    oracle_p = sub.add_parser("oracle",
                              help="bounded explicit-model search")
    _add_formula_args(oracle_p)
    oracle_p.add_argument("--max-traces", type=int, default=2)
    oracle_p.add_argument("--max-stem", type=int, default=1)
    oracle_p.add_argument("--max-loop", type=int, default=2)

    bench_p = sub.add_parser("bench", help="run a benchmark family")
    bench_p.add_argument("--family", choices=sorted(B.FAMILIES) + ["all"],
                         default="all")
    _add_encoding_args(bench_p)
    _add_solver_args(bench_p)
    bench_p.add_argument("-o", "--output", help="CSV output path")
    bench_p.add_argument("--max-workers", type=int, default=4)

    gen_p = sub.add_parser("gen", help="print a generated family formula")
    gen_p.add_argument("family",
                       choices=["qn", "enforce-model", "unsat", "gni", "ni",
                                "gni-implies-ni", "ni-implies-gni",
                                "handcrafted", "random"])
    gen_p.add_argument("-c", type=int, default=1, help="qn bound")
    gen_p.add_argument("-n", type=int, default=1)
    gen_p.add_argument("-b", type=int, default=1, help="step bound")
    gen_p.add_argument("--case", help="handcrafted case id")
    gen_p.add_argument("--prefix", default="forall,exists",
                       help="comma-separated quantifiers for random")
    gen_p.add_argument("--size", type=int, default=8)
    gen_p.add_argument("--atoms", type=int, default=2)
    gen_p.add_argument("--safe-only", action="store_true")
    gen_p.add_argument("--seed", type=int, default=0)
    return parser


def _read_formula(args) -> F.HyperFormula:
    if args.formula is not None and args.file is not None:
        raise _UsageError("give either --formula or --file, not both")
    if args.formula is not None:
        text = args.formula
    elif args.file is not None:
        with open(args.file) as handle:
            text = handle.read()
    else:
        text = sys.stdin.read()
    return F.parse(text)


def _selected_solvers(args):
    cfgs = S.load_solver_configs(args.config)
    if args.solver:
        by_name = {c.name: c for c in cfgs}
        missing = [n for n in args.solver if n not in by_name]
        if missing:
            raise _UsageError(f"unknown solver(s): {', '.join(missing)}")
        cfgs = [by_name[n] for n in args.solver]
    return [dataclasses.replace(c, timeout_sec=args.timeout) for c in cfgs]


def _cmd_check(args) -> int:
    phi = _read_formula(args)
    kind = choose_encoding(phi, args.encoding, args.assume_safe)
    problem = build_problem(phi, kind, args.assume_safe,
                            args.explicit_alphabet)
    if args.emit_only:
        if not args.output:
            raise _UsageError("--emit-only requires -o/--output")
        fmt = OutputFormat(args.format)
        with open(args.output, "w") as handle:
            handle.write(emit(problem, fmt))
        print(f"wrote {kind.value} encoding to {args.output}")
        return EXIT_SAT
    cfgs = _selected_solvers(args)
    try:
        result = B._solve_problem(problem, cfgs)
        verdict = result.verdict
    except S.SolverNotFoundError as exc:
        print(f"warning: {exc}", file=sys.stderr)
        verdict = S.Verdict.UNKNOWN
    print(verdict.value.upper())
    return _VERDICT_EXIT[verdict]


def _cmd_emit(args) -> int:
    phi = _read_formula(args)
    kind = choose_encoding(phi, args.encoding, args.assume_safe)
    problem = build_problem(phi, kind, args.assume_safe,
                            args.explicit_alphabet)
    fmt = OutputFormat(args.format)
    with open(args.output, "w") as handle:
        handle.write(emit(problem, fmt))
    print(f"wrote {kind.value} encoding to {args.output}")
    return EXIT_SAT


def _cmd_oracle(args) -> int:
    phi = _read_formula(args)
    outcome = O.bounded_find_model(phi, args.max_traces, args.max_stem,
                                   args.max_loop)
    if isinstance(outcome, O.Found):
        print(O.format_witness(outcome.model))
        print("SAT")
        return EXIT_SAT
    print(f"NoModelUpTo(traces={outcome.max_traces}, "
          f"stem={outcome.max_stem}, loop={outcome.max_loop})")
    print("UNKNOWN")
    return EXIT_UNKNOWN


def _cmd_bench(args) -> int:
    if args.family == "all":
        cases = [c for name in sorted(B.FAMILIES)
                 for c in B.FAMILIES[name]()]
    else:
        cases = list(B.FAMILIES[args.family]())
    cfgs = _selected_solvers(args)
    csv_text, ok = B.run_table(cases, args.encoding, cfgs,
                               max_workers=args.max_workers,
                               assume_safe=args.assume_safe)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(csv_text)
        print(f"wrote {args.output}")
    else:
        print(csv_text, end="")
    if not ok:
        print("verdict mismatches detected", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_SAT


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "qn":
        phi = B.gen_qn(args.c, ("i",), ("o1", "o2"))
    elif fam == "enforce-model":
        phi = B.gen_enforce_model(args.n, args.b)
    elif fam == "unsat":
        phi = B.gen_unsat(args.n)
    elif fam == "gni":
        phi = B.gen_gni(args.b)
    elif fam == "ni":
        phi = B.gen_ni(args.b)
    elif fam == "gni-implies-ni":
        phi = B.gen_gni_ni(args.b)[2]
    elif fam == "ni-implies-gni":
        phi = B.gen_gni_ni(args.b)[3]
    elif fam == "handcrafted":
        cases = {c.id: c for c in B.gen_handcrafted(args.b)}
        if args.case not in cases:
            raise _UsageError(
                f"--case must be one of: {', '.join(sorted(cases))}")
        phi = cases[args.case].formula
    else:
        quants = [q.strip() for q in args.prefix.split(",") if q.strip()]
        phi = B.gen_random(quants, args.size, args.atoms, args.safe_only,
                           args.seed)
    print(F.pretty(phi))
    return EXIT_SAT


_COMMANDS = {"check": _cmd_check, "emit": _cmd_emit, "oracle": _cmd_oracle,
             "bench": _cmd_bench, "gen": _cmd_gen}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (F.FormulaError, NotSyntacticallySafeError, O.OracleError,
            S.SoundnessConflictError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
