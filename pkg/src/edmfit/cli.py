"""Command-line interface: stats, pmf, fit, reproduce, selfcheck.

Exit codes: 0 on success, 1 when a reproduction comparison fails, 2 on
any error (bad arguments, parse failures, numerical refusals).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import datasets, reproduce
from .distributions import Baseline, ModelSpec, baseline_pmf, pmf_values
from .errors import EdmError
from .gof import PoolingRule
from .inference import (
    FitConfig,
    empirical_stats,
    fit_baseline,
    fit_mle,
    select_model,
)
from .report import ModelRow, ReportDocument, StatsBlock, write_svg_histogram
from .series import ClassId, VarianceParams

_CLASS_CHOICES = ("abm", "lms", "lmns", "poisson", "nb")


def _precision_default() -> str:
    env = os.environ.get("EDM_PRECISION", "double").strip().lower()
    return env if env in ("double", "extended") else "double"


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", metavar="NAME", help="built-in dataset (set1..set6)")
    group.add_argument("--file", metavar="PATH", help="dataset file (count,frequency lines)")


def _load_dataset(args):
    if args.builtin:
        return datasets.get_builtin(args.builtin).data
    return datasets.load_dataset_file(args.file)


def _emit(doc: ReportDocument, json_path: str | None) -> None:
    print(doc.to_text())
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(doc.to_json())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edmfit",
        description=(
            "Construct ABM/LMS/LMNS count distributions from their variance "
            "functions, fit them to frequency data, and score the fits."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="empirical statistics of a dataset")
    _add_dataset_args(p_stats)
    p_stats.add_argument("--json", metavar="PATH", help="write machine-readable report")

    p_pmf = sub.add_parser("pmf", help="print pmf values for a parameterized model")
    p_pmf.add_argument("--class", dest="family", choices=_CLASS_CHOICES, required=True)
    p_pmf.add_argument("-r", type=int, help="variance-function power")
    p_pmf.add_argument("-p", type=float, help="dispersion parameter p")
    p_pmf.add_argument("-b", type=float, help="second dispersion parameter (lms)")
    p_pmf.add_argument("-m", type=float, required=True, help="mean")
    p_pmf.add_argument("-N", type=int, default=20, help="highest count to print")
    p_pmf.add_argument("--precision", choices=("double", "extended"),
                       default=_precision_default())
    p_pmf.add_argument("--svg", metavar="PATH", help="write a bar-chart histogram")
    p_pmf.add_argument("--json", metavar="PATH", help="write values as JSON")

    p_fit = sub.add_parser("fit", help="maximum-likelihood fit to a dataset")
    p_fit.add_argument("--class", dest="family", choices=_CLASS_CHOICES, required=True)
    mode = p_fit.add_mutually_exclusive_group()
    mode.add_argument("-r", type=int, help="fit a single variance-function power")
    mode.add_argument("--select", action="store_true",
                      help="scan powers and keep the highest chi-square p-value")
    _add_dataset_args(p_fit)
    p_fit.add_argument("--rmax", type=int, default=9, help="highest power for --select")
    p_fit.add_argument("--min-expected", type=float, default=None,
                       help="pooling threshold (default 1.0)")
    p_fit.add_argument("--cut", type=int, default=None,
                       help="pool all categories at or beyond this index")
    p_fit.add_argument("--eps", type=float, default=1e-10, help="pmf tail tolerance")
    p_fit.add_argument("--precision", choices=("double", "extended"),
                       default=_precision_default())
    p_fit.add_argument("--json", metavar="PATH", help="write machine-readable report")

    p_rep = sub.add_parser("reproduce", help="refit a published table and compare")
    p_rep.add_argument("table", type=int, help="table id, 1..6")
    p_rep.add_argument("--precision", choices=("double", "extended"),
                       default=_precision_default())
    p_rep.add_argument("--json", metavar="PATH", help="write machine-readable report")

    sub.add_parser("selfcheck", help="verify built-in dataset fingerprints")

    return parser


def _cmd_stats(args) -> int:
    data = _load_dataset(args)
    stats = empirical_stats(data)
    doc = ReportDocument(
        kind="stats",
        dataset=data.name,
        observed=data.frequencies,
        open_tail=data.open_tail,
        stats=StatsBlock.from_stats(stats),
    )
    _emit(doc, args.json)
    return 0


def _cmd_pmf(args) -> int:
    if args.family in ("poisson", "nb"):
        kind = Baseline.POISSON if args.family == "poisson" else Baseline.NEG_BINOMIAL
        table = baseline_pmf(kind, args.m, args.p, eps=1e-14, max_terms=100_000)
        probs = table.probs
        if len(probs) < args.N + 1:
            probs = np.concatenate([probs, np.zeros(args.N + 1 - len(probs))])
        probs = probs[: args.N + 1]
    else:
        family = ClassId(args.family)
        if args.r is None or args.p is None:
            raise EdmError("pmf for abm/lms/lmns needs -r and -p")
        spec = ModelSpec(VarianceParams(family, args.r, args.p, args.b), args.m)
        probs = pmf_values(spec, args.N, precision=args.precision)
    cum = np.cumsum(probs)
    print(f"{'n':>5s} {'f(n)':>14s} {'cumulative':>14s}")
    for n, (f, c) in enumerate(zip(probs, cum)):
        print(f"{n:>5d} {f:>14.8f} {c:>14.8f}")
    if args.svg:
        write_svg_histogram(probs, args.svg, title=f"{args.family} pmf")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"family": args.family, "probs": [float(x) for x in probs]},
                      fh, indent=2)
    return 0


def _fit_config(args, data_name: str | None) -> FitConfig:
    if args.cut is not None:
        rule = PoolingRule(explicit_cut=args.cut)
    elif args.min_expected is not None:
        rule = PoolingRule(min_expected=args.min_expected)
    elif args.builtin:
        # builtin datasets carry their published pooling pin
        builtin = datasets.get_builtin(args.builtin)
        rule = (PoolingRule(explicit_cut=builtin.explicit_cut)
                if builtin.explicit_cut is not None else PoolingRule())
    else:
        rule = PoolingRule()
    return FitConfig(r_max=args.rmax, pooling=rule, precision=args.precision)


def _cmd_fit(args) -> int:
    data = _load_dataset(args)
    cfg = _fit_config(args, data.name)
    stats = empirical_stats(data)
    if args.family in ("poisson", "nb"):
        kind = Baseline.POISSON if args.family == "poisson" else Baseline.NEG_BINOMIAL
        fit = fit_baseline(kind, data, cfg)
        label = args.family
    else:
        family = ClassId(args.family)
        if args.select:
            fit = select_model(family, data, cfg)
            label = f"{args.family}(r={fit.spec.params.r}, selected)"
        else:
            if args.r is None:
                raise EdmError("fit needs -r or --select")
            fit = fit_mle(family, args.r, data, cfg)
            label = f"{args.family}(r={args.r})"
    doc = ReportDocument(
        kind="fit",
        dataset=data.name,
        observed=data.frequencies,
        open_tail=data.open_tail,
        stats=StatsBlock.from_stats(stats),
        models=(ModelRow.from_fit(label, fit),),
        pooling=f"cells: {fit.gof.cells}",
    )
    _emit(doc, args.json)
    return 0


def _cmd_reproduce(args) -> int:
    doc = reproduce.run_reproduction(args.table, precision=args.precision)
    _emit(doc, args.json)
    return 0 if doc.passed else 1


def _cmd_selfcheck(args) -> int:
    bad = datasets.verify_builtins()
    if bad:
        print(f"FAIL: builtin dataset fingerprints drifted: {', '.join(bad)}")
        return 2
    print(f"ok: {len(datasets.BUILTINS)} builtin datasets match their fingerprints")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "stats": _cmd_stats,
        "pmf": _cmd_pmf,
        "fit": _cmd_fit,
        "reproduce": _cmd_reproduce,
        "selfcheck": _cmd_selfcheck,
    }
    try:
        return handlers[args.command](args)
    except EdmError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
