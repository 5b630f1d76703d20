"""Command-line entry point: ``boolrestrict <verify|junta-exp|aa-exp|analyze|tree>``."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings

from .experiments import aa_experiment, junta_experiment
from .families import generate, parse_family
from .querytree import greedy_influence_tree, serialize, tree_error
from .spectral import (
    FourierExpansion,
    as_expansion,
    influences,
    parse_function_spec,
    total_influence,
    variance,
)
from .verify import SUITES, run_verification

SEED_ENV = "BOOLRESTRICT_SEED"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {SEED_ENV}={raw!r} is not an integer")


def _load_function(args) -> tuple[FourierExpansion, str, int]:
    """Function from --file (function-spec text) or --family; returns (f, label, degree)."""
    if getattr(args, "file", None):
        with open(args.file) as fh:
            f = as_expansion(parse_function_spec(fh.read()))
        return f, os.path.basename(args.file), f.degree
    if not getattr(args, "family", None):
        raise ValueError("give --family or --file")
    spec = parse_family(args.family)
    f, degree = generate(spec)
    return f, str(spec), degree


def _emit(report, fmt: str) -> None:
    sys.stdout.write(report.to_json() + "\n" if fmt == "json" else report.to_csv())


def cmd_verify(args) -> int:
    scopes = [s.strip() for s in args.scope.split(",")] if args.scope else None
    results = run_verification(scopes, seed=args.seed, inject_fault=args.inject_fault)
    if args.out == "json":
        print(json.dumps([r.__dict__ for r in results], indent=2))
    elif args.out == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["suite", "passed", "checks", "detail"])
        for r in results:
            writer.writerow([r.name, int(r.passed), r.checks, r.detail])
    else:
        for r in results:
            print(r.line())
    return 0 if all(r.passed for r in results) else 1


def cmd_junta(args) -> int:
    f, label, degree = _load_function(args)
    report = junta_experiment(
        f, args.d or max(degree, 1), family=label, survival_c=args.survival_c, theta=args.theta,
        eps=args.eps, trials=args.trials, seed=args.seed, p=args.p,
        workers=args.workers, exact=not args.no_exact,
    )
    _emit(report, args.out)
    return 0


def cmd_aa(args) -> int:
    f, label, degree = _load_function(args)
    report = aa_experiment(
        f, args.d or max(degree, 1), family=label, survival_c=args.survival_c, tau=args.tau,
        tau_exponent=args.tau_exponent, trials=args.trials, seed=args.seed, p=args.p,
        workers=args.workers, exact=not args.no_exact,
    )
    _emit(report, args.out)
    return 0


def cmd_analyze(args) -> int:
    f, label, _ = _load_function(args)
    inf = influences(f)
    info = {
        "function": label,
        "n": f.n,
        "degree": f.degree,
        "mean": f.mean,
        "variance": variance(f),
        "total_influence": total_influence(f),
        "influences": inf.tolist(),
        "spectrum": {f"{m:#x}": c for m, c in f.coeffs.items()},
    }
    if args.out == "json":
        print(json.dumps(info, indent=2))
        return 0
    for key in ("function", "n", "degree", "mean", "variance", "total_influence"):
        print(f"{key}: {info[key]!r}" if isinstance(info[key], float) else f"{key}: {info[key]}")
    print("influences: " + " ".join(f"{v!r}" for v in inf.tolist()))
    print("spectrum:")
    for m, c in f.coeffs.items():
        print(f"  {m:#x} {c!r}")
    return 0


def cmd_tree(args) -> int:
    f, _, _ = _load_function(args)
    tree = greedy_influence_tree(f, args.threshold, args.budget)
    print(serialize(tree))
    print(f"error: {tree_error(f, tree)!r}")
    return 0


def _common_function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="family spec, e.g. tribes:w=2,t=2")
    p.add_argument("--file", help="function-spec file (truthtable or fourier form)")


def _experiment_args(p: argparse.ArgumentParser, seed: int) -> None:
    _common_function_args(p)
    p.add_argument("--d", type=int, default=None, help="degree bound (default: declared degree)")
    p.add_argument("--survival-c", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None, help="override the survival probability")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--no-exact", action="store_true", help="skip exhaustive cross-checks")


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    parser = argparse.ArgumentParser(prog="boolrestrict", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run enumeration-vs-closed-form suites")
    v.add_argument("--scope", default=None, help=f"comma list from: {', '.join(SUITES)}")
    v.add_argument("--seed", type=int, default=seed)
    v.add_argument("--out", choices=("text", "csv", "json"), default="text")
    v.add_argument("--inject-fault", action="store_true", help="corrupt a fixture (self-test)")
    v.set_defaults(func=cmd_verify)

    j = sub.add_parser("junta-exp", help="junta structure of random restrictions")
    _experiment_args(j, seed)
    j.add_argument("--theta", type=float, default=1e-3)
    j.add_argument("--eps", type=float, default=1e-2)
    j.set_defaults(func=cmd_junta)

    a = sub.add_parser("aa-exp", help="influential coordinates after random restriction")
    _experiment_args(a, seed)
    a.add_argument("--tau", type=float, default=None, help="default Var[f]^2 / d^tau-exponent")
    a.add_argument("--tau-exponent", type=float, default=4.0)
    a.set_defaults(func=cmd_aa)

    an = sub.add_parser("analyze", help="spectrum, influences, variance and degree")
    _common_function_args(an)
    an.add_argument("--out", choices=("text", "json"), default="text")
    an.set_defaults(func=cmd_analyze)

    t = sub.add_parser("tree", help="greedy highest-influence decision tree")
    _common_function_args(t)
    t.add_argument("--threshold", type=float, default=0.0)
    t.add_argument("--budget", type=int, default=3)
    t.set_defaults(func=cmd_tree)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) <= 0:
        parser.error("--trials must be positive")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    with warnings.catch_warnings():
        warnings.simplefilter("default")
        warnings.showwarning = _show_warning
        try:
            return args.func(args)
        except (ValueError, KeyError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
