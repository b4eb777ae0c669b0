"""Command-line interface.

    entropylab verify {operator,functional,crossbackend} [--trials N] ...
    entropylab conjugate IN.csv OUT.csv [--dual-min --dual-max --dual-n]
    entropylab entropy --a A.json --b B.json --p P [--via ROUTE]
    entropylab convergence [--csv PATH]

Exit codes: 0 pass, 1 suite failures, 2 usage or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .grids import GridFunctional, GridSpec, conjugate_fast, default_dual_grid
from .matrices import load_matrix, SymMatrix
from .operator_entropy import (parametric_entropy, parametric_entropy_via_identity,
                               relative_entropy_integral)
from .operator_means import geometric_mean
from .records import SuiteConfig
from .suites import run_suite, convergence_rows, sandwich_rows, SUITES
from . import plotting


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--report", type=Path, default=None,
                        help="write a JSON report (plus a .png figure)")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; flags override its keys")
    parser.add_argument("--no-figures", action="store_true",
                        help="skip matplotlib rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropylab",
        description="verify operator/functional entropy identities")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a randomized suite")
    p_verify.add_argument("suite", choices=SUITES)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--grid-n", type=int, default=None)
    _add_common(p_verify)

    p_conj = sub.add_parser("conjugate",
                            help="Fenchel conjugate of a grid CSV")
    p_conj.add_argument("infile", type=Path)
    p_conj.add_argument("outfile", type=Path)
    p_conj.add_argument("--dual-min", type=float, default=None)
    p_conj.add_argument("--dual-max", type=float, default=None)
    p_conj.add_argument("--dual-n", type=int, default=None)
    _add_common(p_conj)

    p_ent = sub.add_parser("entropy",
                           help="parametric relative operator entropy")
    p_ent.add_argument("--a", type=Path, required=True)
    p_ent.add_argument("--b", type=Path, required=True)
    p_ent.add_argument("--p", type=float, required=True)
    p_ent.add_argument("--via", choices=("spectral", "identity", "integral"),
                       default="spectral")
    p_ent.add_argument("--out", type=Path, default=None)
    _add_common(p_ent)

    p_conv = sub.add_parser("convergence",
                            help="quadrature node sweep study")
    p_conv.add_argument("--csv", type=Path, default=Path("convergence.csv"))
    _add_common(p_conv)
    return parser


def _make_config(args, suite: str | None = None) -> SuiteConfig:
    overrides = {"suite": suite, "seed": args.seed,
                 "trials": getattr(args, "trials", None),
                 "n": getattr(args, "grid_n", None)}
    if args.config is not None:
        return SuiteConfig.from_file(args.config, **overrides)
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    return SuiteConfig(**kwargs)


def cmd_verify(args) -> int:
    cfg = _make_config(args, suite=args.suite)
    report = run_suite(cfg)
    for name in sorted(report.checks):
        agg = report.checks[name]
        status = "PASS" if agg.failures == 0 else "FAIL"
        print(f"{status} {name}: {agg.count} instances, "
              f"{agg.failures} failures, worst margin {agg.min_margin:.3e}")
    if args.report is not None:
        report.save(args.report)
        if not args.no_figures:
            plotting.render_report_figure(
                report, args.report.with_suffix(".png"))
        print(f"report written to {args.report}")
    return 0 if report.failures == 0 else 1


def cmd_conjugate(args) -> int:
    f = GridFunctional.load_csv(args.infile)
    if None not in (args.dual_min, args.dual_max, args.dual_n):
        dual = GridSpec(args.dual_min, args.dual_max, args.dual_n)
    else:
        dual = default_dual_grid(f)
    fstar = conjugate_fast(f, dual)
    fstar.save_csv(args.outfile)
    if not args.no_figures:
        plotting.render_conjugate_figure(
            f, fstar, args.outfile.with_suffix(".png"))
    print(f"conjugate written to {args.outfile} "
          f"(dual grid [{dual.x_min:g}, {dual.x_max:g}], n={dual.n})")
    return 0


def cmd_entropy(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    p = args.p
    if args.via == "spectral":
        result = parametric_entropy(a, b, p)
    elif args.via == "identity":
        result = parametric_entropy_via_identity(a, b, p)[0]
    elif p == 0.0:
        result = relative_entropy_integral(a, b)
    elif p == 1.0:
        result = SymMatrix(-relative_entropy_integral(b, a).entries)
    else:
        g = geometric_mean(a, b, p)
        result = SymMatrix(-relative_entropy_integral(g, a).entries / p)
    payload = {"p": p, "via": args.via,
               "entropy": {"dim": result.dim,
                           "rows": result.entries.tolist()}}
    text = json.dumps(payload, indent=2)
    if args.out is not None:
        Path(args.out).write_text(text + "\n")
        print(f"entropy written to {args.out}")
    else:
        print(text)
    return 0


def cmd_convergence(args) -> int:
    rows = convergence_rows()
    fields = ["nodes", "geometric_mean_error", "relative_entropy_error",
              "weight_sum_minus_one"]
    plotting.write_rows_csv(args.csv, fields, rows)
    if not args.no_figures:
        plotting.render_convergence_figure(rows, args.csv.with_suffix(".png"))
        sandwich = sandwich_rows()
        spath = args.csv.with_name(args.csv.stem + "_sandwich.csv")
        plotting.write_rows_csv(
            spath, ["p", "lower", "value", "upper", "lower_margin",
                    "upper_margin"], sandwich)
        plotting.render_sandwich_figure(sandwich, spath.with_suffix(".png"))
    for row in rows:
        print(row)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": cmd_verify, "conjugate": cmd_conjugate,
                "entropy": cmd_entropy, "convergence": cmd_convergence}
    try:
        return handlers[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
