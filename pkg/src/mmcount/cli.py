"""Command line interface.

Every subcommand prints one JSON object on stdout (``dlp-export`` prints
the program text instead) and a short human summary on stderr.  Any flag
can also be set through an environment variable named ``MMCOUNT_`` plus
the flag name in upper case with dashes as underscores, e.g.
``MMCOUNT_TIMEOUT_S=60``.

Exit codes: 0 success, 1 usage error, 2 unparsable input, 3 budget
exhausted before any result.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import METHOD_NAMES, BenchConfig, collect_instances, run_suite, write_csv, write_jsonl
from .formula import DimacsError, compute_cut, dlp_export, read_dimacs
from .hashcount import DEFAULT_DELTA, hashcount_lower_bound, independent_support
from .mingen import TransactionParseError, decode_generator, encode_mingen, read_transactions
from .minlb import DEFAULT_CUT_LIMIT, minlb
from .minmodel import BRUTE_FORCE_MAX_VARS, DEFAULT_CAP, TooLarge, brute_force_count, enumerate_minimal_models
from .projenum import ProjEnumConfig, proj_enum_count
from .results import LowerBoundResult
from .sat import Budget, BudgetExceeded, is_satisfiable

ENV_PREFIX = "MMCOUNT_"
EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("mmcount")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name: str, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    if cast is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--timeout-s", type=float, default=_env("timeout-s", 5000.0, float),
                   help="wall-clock budget in seconds (default 5000)")
    g.add_argument("--seed", type=int, default=_env("seed", 0, int))
    g.add_argument("--delta", type=float, default=_env("delta", DEFAULT_DELTA, float),
                   help="confidence parameter of the hashing bound (default 0.2)")
    g.add_argument("--cut-limit", type=int, default=_env("cut-limit", DEFAULT_CUT_LIMIT, int),
                   help="largest cut handled by projected enumeration (default 50)")
    g.add_argument("--cap", type=int, default=_env("cap", DEFAULT_CAP, int),
                   help="projections enumerated per component before giving up (default 1e6)")
    g.add_argument("--log-base", type=float, default=_env("log-base", 10.0, float))
    g.add_argument("--xor-over-all-vars", action="store_true",
                   default=_env("xor-over-all-vars", False, bool),
                   help="hash over all variables instead of an independent support")
    g.add_argument("--timing", action="store_true", default=_env("timing", False, bool),
                   help="include elapsed_s in the JSON output")
    g.add_argument("-v", "--verbose", action="store_true", default=_env("verbose", False, bool))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mmcount", description="Count or lower-bound minimal models of CNF formulas.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in [("minlb", "hybrid lower bound (enumeration or hashing)"),
                        ("projenum", "projected enumeration over a heuristic cut"),
                        ("hashcount", "hashing-based probabilistic lower bound"),
                        ("bruteforce", f"exhaustive count (at most {BRUTE_FORCE_MAX_VARS} variables)"),
                        ("indep-support", "independent support via definability checks"),
                        ("dlp-export", "print the disjunctive logic program")]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file", type=Path, help="DIMACS CNF file")

    sp = sub.add_parser("mingen-count", parents=[common], help="count minimal generators of transactions")
    sp.add_argument("file", type=Path, help="transaction file, one itemset per line")
    sp.add_argument("--enumerate", action="store_true", help="list the generators")

    sp = sub.add_parser("bench", parents=[common], help="run methods over a directory of instances")
    sp.add_argument("dir", type=Path)
    sp.add_argument("--methods", default=_env("methods", "projenum,hashcount,minlb"),
                    help=f"comma-separated subset of {','.join(METHOD_NAMES)}")
    sp.add_argument("--out", type=Path, default=_env("out", None), help="JSONL report path")
    sp.add_argument("--csv", type=Path, default=_env("csv", None), help="also write a CSV report")
    sp.add_argument("--figures", type=Path, default=_env("figures", None),
                    help="directory for figures (default: next to --out)")
    sp.add_argument("--no-figures", action="store_true")
    sp.add_argument("--workers", type=int, default=_env("workers", 1, int))
    return parser


def _emit(obj: dict, args) -> None:
    if not args.timing:
        obj.pop("elapsed_s", None)
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _result_obj(args, res: LowerBoundResult, instance: str) -> dict:
    obj = {"command": args.command, "instance": instance, "status": "ok", "seed": args.seed}
    obj.update(res.to_json(timing=True))
    return obj


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _describe(res: LowerBoundResult) -> str:
    if res.count is not None:
        what = f"{'exactly' if res.exact else 'at least'} {res.count}"
    else:
        what = f"at least 2^{res.bound_log2:.4f} (probability >= {res.confidence:.3f})"
    return f"{res.method}: {what} minimal models in {res.elapsed:.2f}s"


def _cmd_count(args) -> int:
    formula = read_dimacs(args.file)
    budget = Budget(args.timeout_s)
    inst = str(args.file)
    if args.command == "minlb":
        res = minlb(formula, args.delta, args.cut_limit, ProjEnumConfig(args.cap), args.seed, budget,
                    args.xor_over_all_vars)
    elif args.command == "projenum":
        res = proj_enum_count(formula, compute_cut(formula), ProjEnumConfig(args.cap), budget)
        if res.details.get("budget_hit") and res.details.get("passes") == 0:
            raise BudgetExceeded
    elif args.command == "hashcount":
        sat = is_satisfiable(formula, budget)
        if sat is None:
            raise BudgetExceeded
        if not sat:
            res = LowerBoundResult.from_count(0, True, "HashCount")
        else:
            xs = formula.all_vars if args.xor_over_all_vars else independent_support(formula, budget)
            res = hashcount_lower_bound(formula, xs, args.delta, args.seed, budget)
    else:
        try:
            n = brute_force_count(formula)
        except TooLarge as exc:
            raise UsageError(str(exc)) from None
        res = LowerBoundResult.from_count(n, True, "BruteForce")
    _say(_describe(res))
    _emit(_result_obj(args, res, inst), args)
    return EXIT_OK


def _cmd_indep_support(args) -> int:
    formula = read_dimacs(args.file)
    xs = sorted(independent_support(formula, Budget(args.timeout_s)))
    _say(f"independent support: {len(xs)} of {formula.num_vars} variables")
    _emit({"command": args.command, "instance": str(args.file), "status": "ok",
           "support": xs, "details": {"size": len(xs), "num_vars": formula.num_vars}}, args)
    return EXIT_OK


def _cmd_dlp(args) -> int:
    sys.stdout.write(dlp_export(read_dimacs(args.file)))
    return EXIT_OK


def _cmd_mingen(args) -> int:
    db = read_transactions(args.file)
    enc = encode_mingen(db)
    budget = Budget(args.timeout_s)
    stats = {"num_items": len(db.items), "num_transactions": len(db.transactions),
             "clauses": len(enc.formula.clauses), "literals": enc.num_literals}
    obj = {"command": args.command, "instance": str(args.file), "status": "ok", "seed": args.seed}
    if args.enumerate:
        gens = []
        try:
            for sigma in enumerate_minimal_models(enc.formula, budget):
                gens.append(sorted(decode_generator(sigma, enc)[0]))
        except BudgetExceeded:
            obj["status"] = "budget_exhausted"
        gens.sort(key=lambda g: (len(g), g))
        complete = obj["status"] == "ok"
        obj.update({"count": len(gens), "exact": complete, "confidence": 1.0,
                    "bound_log2": None if not gens else LowerBoundResult.from_count(
                        len(gens), False, "ProjEnum").bound_log2,
                    "generators": gens, "details": stats})
        if not complete:
            obj["status"] = "ok" if gens else "budget_exhausted"
        _say(f"{len(gens)} minimal generators")
        _emit(obj, args)
        return EXIT_OK if gens or complete else EXIT_BUDGET
    res = minlb(enc.formula, args.delta, args.cut_limit, ProjEnumConfig(args.cap), args.seed, budget,
                args.xor_over_all_vars)
    res.details.update(stats)
    _say(_describe(res))
    obj.update(res.to_json(timing=True))
    _emit(obj, args)
    return EXIT_OK


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHOD_NAMES]
    if bad:
        raise UsageError(f"unknown method(s): {', '.join(bad)}")
    if not args.dir.exists():
        raise UsageError(f"no such directory: {args.dir}")
    cfg = BenchConfig(timeout_s=args.timeout_s, log_base=args.log_base, seed=args.seed, delta=args.delta,
                      cut_limit=args.cut_limit, cap=args.cap, workers=args.workers,
                      xor_over_all_vars=args.xor_over_all_vars)
    report = run_suite(collect_instances(args.dir), methods, cfg)
    outputs = {}
    if args.out:
        write_jsonl(report, args.out)
        outputs["jsonl"] = str(args.out)
    if args.csv:
        write_csv(report, args.csv)
        outputs["csv"] = str(args.csv)
    fig_dir = args.figures or (args.out.parent / f"{args.out.stem}_figures" if args.out else None)
    if fig_dir and not args.no_figures and report.records:
        from .plotting import render_report
        outputs["figures"] = [str(p) for p in render_report(report, fig_dir)]
    for m, total in report.tqp_totals().items():
        _say(f"{m:>10}: TQP {total:.1f}")
    _emit({"command": "bench", "status": "ok", "summary": report.summary(),
           "details": {"outputs": outputs, "records": len(report.records)}}, args)
    return EXIT_OK


_COMMANDS = {"minlb": _cmd_count, "projenum": _cmd_count, "hashcount": _cmd_count,
             "bruteforce": _cmd_count, "indep-support": _cmd_indep_support, "dlp-export": _cmd_dlp,
             "mingen-count": _cmd_mingen, "bench": _cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        _say(f"mmcount {args.command}: {exc}")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        _say(f"mmcount {args.command}: {exc}")
        return EXIT_USAGE
    except (DimacsError, TransactionParseError, UnicodeDecodeError) as exc:
        _say(f"mmcount {args.command}: parse error: {exc}")
        return EXIT_PARSE
    except BudgetExceeded:
        _say(f"mmcount {args.command}: budget exhausted before any result")
        _emit({"command": args.command, "status": "budget_exhausted",
               "instance": str(getattr(args, "file", "")) or None}, args)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
