"""Command-line front end.

    tropmf5 PROBLEM [--algorithm naive|sigbased] [--carry reduced|raw]
                    [--mode exact|capped=L] [--degree-bound D|macaulay]
                    [--pivot-pool f5|full-macaulay] [--analyze-precision]
                    [--oracle] [--json PATH]
    tropmf5 --experiment CONFIG [--seed N] [--json PATH] [--csv PATH]

Exit status: 0 on success, 2 for invalid input or usage, 3 when the
computation runs out of p-adic precision.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import PrecisionError
from .experiment import ExperimentConfig, config_to_dict, rows_to_csv, rows_to_text, run_experiment
from .mf5 import run_driver
from .oracle import full_macaulay_dgb
from .poly import HomogeneousPoly
from .precision import sufficient_precision
from .problem import ParseError, ProblemFile, parse_problem
from .report import report_to_json, report_to_text
from .scalars import INF, ExactScalar

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PRECISION = 3

EXPERIMENT_SCHEMA = "tropmf5-experiment/1"


def _mode(text: str):
    if text == "exact":
        return ("exact", None)
    if text.startswith("capped="):
        try:
            L = int(text.split("=", 1)[1])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad precision in {text!r}") from None
        if L < 1:
            raise argparse.ArgumentTypeError("capped precision must be positive")
        return ("capped", L)
    raise argparse.ArgumentTypeError("expected 'exact' or 'capped=L'")


def _degree_bound(text: str):
    if text == "macaulay":
        return text
    try:
        D = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'macaulay'") from None
    if D < 0:
        raise argparse.ArgumentTypeError("degree bound must be non-negative")
    return D


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tropmf5",
        description="Tropical Gröbner bases of homogeneous systems over Q_p by Matrix-F5.",
    )
    ap.add_argument("problem", nargs="?", help="problem file ('-' reads standard input)")
    ap.add_argument("--algorithm", choices=["naive", "sigbased"], default="naive")
    ap.add_argument("--carry", choices=["reduced", "raw"], default=None,
                    help="naive driver: start each step from reduced or raw rows (default reduced)")
    ap.add_argument("--mode", type=_mode, default=None,
                    help="'exact' or 'capped=L'; overrides the problem file")
    ap.add_argument("--degree-bound", type=_degree_bound, default=None,
                    help="integer D or 'macaulay'; overrides the problem file")
    ap.add_argument("--pivot-pool", choices=["f5", "full-macaulay"], default=None,
                    help="naive driver: F5-filtered rows or the whole Macaulay matrix")
    ap.add_argument("--analyze-precision", action="store_true",
                    help="report the sufficient input precision and guaranteed loss")
    ap.add_argument("--oracle", action="store_true",
                    help="compare leading monomials with full Macaulay reduction")
    ap.add_argument("--seed", type=int, default=None, help="experiment master seed")
    ap.add_argument("--json", metavar="PATH", help="also write a JSON report")
    ap.add_argument("--csv", metavar="PATH", help="experiment: also write the table as CSV")
    ap.add_argument("--experiment", metavar="CONFIGPATH",
                    help="run a random-system experiment described by a JSON config")
    ap.add_argument("--jobs", type=int, default=None, help="experiment: worker processes")
    return ap


def exact_lift(pf: ProblemFile) -> list:
    """The problem's generators with every O(p^m) dropped, over the exact backend."""
    out = []
    for g in pf.generators:
        terms = {m: ExactScalar(v, pf.prime) for m, (v, _) in g.items() if v != 0}
        out.append(HomogeneousPoly(pf.n, sum(next(iter(g))), terms))
    return out


def _context(pf: ProblemFile, mode, D) -> dict:
    return {
        "p": str(pf.prime),
        "vars": ",".join(pf.names),
        "w": "[" + ",".join(map(str, pf.weight)) + "]",
        "tiebreak": pf.tiebreak,
        "D": str(D),
        "mode": "exact" if mode[0] == "exact" else f"capped={mode[1]}",
    }


def run_problem(pf: ProblemFile, args) -> tuple:
    """Returns (text report, json report)."""
    if args.algorithm == "sigbased" and (args.carry or args.pivot_pool):
        raise ValueError("--carry and --pivot-pool only apply to --algorithm naive")
    mode = args.mode or pf.mode
    if mode[0] == "exact" and pf.has_inexact_literals():
        raise ValueError("the problem has O(p^m) literals; use a capped mode")
    D = pf.resolve_degree_bound(args.degree_bound)
    order = pf.order()
    F = pf.system(mode)
    kw = {}
    if args.algorithm == "naive":
        kw = {"carry": args.carry or "reduced", "pivot_pool": args.pivot_pool or "f5"}
    report = run_driver(F, D, order, args.algorithm, **kw)

    ledger = None
    if args.analyze_precision:
        led = sufficient_precision(exact_lift(pf), D, order)
        ledger = led.to_dict()
        if mode[0] == "capped":
            ok = min(mode[1], min((c[1] for g in pf.generators for c in g.values()), default=INF)) > led.prec
            ledger["verdict"] = "sufficient" if ok else "not guaranteed"
    oracle = None
    if args.oracle:
        ref = full_macaulay_dgb(exact_lift(pf), D, order)
        agree = ref.lm_sets() == report.lm_sets()
        oracle = {"agreement": "true" if agree else "false"}

    ctx = _context(pf, mode, D)
    text = report_to_text(report, pf.names, context=ctx, ledger=ledger, oracle=oracle)
    js = report_to_json(report, pf.names, context=ctx, ledger=ledger, oracle=oracle)
    return text, js


def run_experiment_cli(args) -> str:
    cfg = ExperimentConfig.from_file(args.experiment)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.jobs is not None:
        cfg.jobs = args.jobs
    rows = run_experiment(cfg)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rows_to_csv(rows))
    if args.json:
        data = {
            "schema": EXPERIMENT_SCHEMA,
            "config": {k: v for k, v in config_to_dict(cfg).items() if k != "jobs"},
            "rows": [r.as_csv_row() | {"losses": [None if x is None else str(x) for x in r.losses]}
                     for r in rows],
        }
        data["rows"] = [{k: (str(v) if isinstance(v, int) else v) for k, v in r.items()}
                        for r in data["rows"]]
        with open(args.json, "w") as fh:
            json.dump(data, fh, indent=2, default=str)
            fh.write("\n")
    return rows_to_text(rows) + "\n"


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.experiment:
            sys.stdout.write(run_experiment_cli(args))
            return EXIT_OK
        if not args.problem:
            ap.error("a problem file or --experiment is required")
        if args.problem == "-":
            text = sys.stdin.read()
        else:
            with open(args.problem, encoding="utf-8") as fh:
                text = fh.read()
        pf = parse_problem(text)
        out, js = run_problem(pf, args)
    except PrecisionError as exc:
        print(f"error: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ParseError as exc:
        name = args.problem or args.experiment
        print(f"error: {name}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(out)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(js)
    return EXIT_OK
