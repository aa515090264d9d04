#!/usr/bin/env python3
"""
Shintani - Command Line

Subcommands:
    field       validated summary of a field file
    period      one cylinder period (optionally against the Abel-limit oracle)
    lvalue      truncated sum expressions S_0..S_n
    derivative  L'(0, chi omega_F) through the multiple Gamma function
    gamma       one value of the multiple Gamma function
    identity    curious / zero-sum / fg / lemma33 checks
    verify      run a manifest of verification suites

Exit status: 0 on success, 1 when a check fails, 2 on a library error.
"""

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from termcolor import cprint

from shintani.cli.manifest import load_manifest
from shintani.cli.reports import print_summary, to_jsonable, write_json
from shintani.cli.suites import run_suite
from shintani.config import Config
from shintani.errors import InputFileError, ParameterViolation, ShintaniError
from shintani.field.characters import PsiCharacter, character_table
from shintani.field.cones import parallelotope_points
from shintani.field.loader import describe, load_field
from shintani.lseries.derivative import derivative0, global_derivative0
from shintani.lseries.gamma import GammaQuery, gamma_multiple
from shintani.lseries.identities import curious_grid, fg_grid, zero_sum_identity
from shintani.lseries.sums import LSeriesConfig, L_px_value0, truncation_series
from shintani.measures.oracle import oracle_period
from shintani.measures.periods import MeasureSpec, PeriodQuery, lemma33_check, period


def _banner(title: str) -> None:
    cprint("=" * 60, "cyan")
    cprint(title, "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise InputFileError(f"not a list of rationals: {text!r}") from e


def _integers(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise InputFileError(f"not a list of integers: {text!r}") from e


def _exponent(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InputFileError(f"not a rational exponent: {text!r}") from e


def _finish(payload: dict, json_path: Optional[str]) -> None:
    if json_path:
        out = write_json(payload, json_path)
        cprint(f"  Report written to {out}", "green")


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_field(args: argparse.Namespace) -> int:
    bundle = load_field(args.file)
    _banner(f"FIELD {bundle.field.name}")
    summary = describe(bundle)
    if args.cn:
        cn = bundle.cn(args.cn)
        summary["characters"] = [character_table(chi) for chi in bundle.characters(cn)]
    for key, value in summary.items():
        cprint(f"  {key}: {value}", "green")
    _finish(summary, args.json)
    cprint("\n✅ Field check complete!", "green", attrs=["bold"])
    return 0


def cmd_period(args: argparse.Namespace) -> int:
    bundle = load_field(args.field)
    cn = bundle.cn(args.cn)
    cone = bundle.decomposition.cone(args.cone) if args.cone else bundle.decomposition.cones[0]
    if args.x:
        x = bundle.field.element(_rationals(args.x))
    else:
        x = parallelotope_points(cone, bundle.decomposition.ideals[0])[0]
    if args.kind == "zeta":
        spec = MeasureSpec.zeta(cone, cn, x, args.p)
    else:
        spec = MeasureSpec.dirichlet(cone, bundle.character(cn, args.char), x, args.p)
    query = PeriodQuery(_integers(args.l) if args.l else (0,) * cone.k, args.n)

    _banner(f"PERIOD ({args.kind}) ON {bundle.field.name}")
    value = period(spec, query)
    cprint(f"  mu({x} + {list(query.l)}.v + {args.p}^{args.n} O) = {value}", "green")
    payload = {"kind": args.kind, "x": x.to_json(), "l": list(query.l), "n": args.n, "value": value}
    status = 0
    if args.oracle:
        expected = oracle_period(spec, query)
        payload["oracle"] = expected
        if expected == value:
            cprint("  Oracle agrees", "green")
        else:
            cprint(f"  Oracle disagrees: {expected}", "red")
            status = 1
    _finish(to_jsonable(payload), args.json)
    if status == 0:
        cprint("\n✅ Period complete!", "green", attrs=["bold"])
    return status


def _lseries_config(args: argparse.Namespace, precision: int) -> LSeriesConfig:
    bundle = load_field(args.field)
    cn = bundle.cn(args.cn)
    chi = bundle.character(cn, args.char) if args.char is not None else None
    return LSeriesConfig(
        bundle.decomposition,
        cn,
        args.p,
        precision=precision,
        chi=chi,
        psi=PsiCharacter.trivial(args.p),
        omega_power=getattr(args, "omega_power", -1),
        gamma_precision=getattr(args, "gamma_precision", None),
    )


def cmd_lvalue(args: argparse.Namespace) -> int:
    cfg = _lseries_config(args, args.precision)
    mode = "zeta" if cfg.is_zeta else f"chi{args.char}"
    s = _exponent(args.s)
    _banner(f"SUM EXPRESSION {cfg.decomposition.field.name} N={cfg.N} p={cfg.p} q={cfg.q} ({mode})")
    reports = truncation_series(cfg, s, args.level)
    for report in reports:
        cprint(f"  S_{report.level} = {report.value}", "green")
        cprint(f"      distance {report.distance}, {report.terms} terms, {report.elapsed_ms:.0f} ms", "yellow")
    payload = {
        "instance": {"field": cfg.decomposition.field.name, "cn": cfg.cn.name, "p": cfg.p, "q": cfg.q,
                     "mode": mode, "s": str(s), "precision": cfg.precision},
        "series": [r.to_json() for r in reports],
    }
    _finish(payload, args.json)
    cprint("\n✅ Sum expression complete!", "green", attrs=["bold"])
    return 0


def cmd_derivative(args: argparse.Namespace) -> int:
    cfg = _lseries_config(args, args.precision)
    _banner(f"DERIVATIVE AT 0, {cfg.decomposition.field.name} N={cfg.N} p={cfg.p} chi{args.char}")
    pieces = []
    for cone in cfg.decomposition.cones:
        for x in parallelotope_points(cone, cfg.lattice):
            if args.pieces:
                value0 = L_px_value0(cfg, cone, x)
                d0 = derivative0(cfg, cone, x)
                cprint(f"  {cone.label}, x = {x}: L(0) = {value0}, L'(0) = {d0}", "green")
                pieces.append({"cone": cone.label, "x": x.to_json(), "value0": value0, "derivative0": d0})
    total = global_derivative0(cfg)
    cprint(f"  L'_F,p(0) = {total}", "green", attrs=["bold"])
    _finish(to_jsonable({"pieces": pieces, "global": total}), args.json)
    cprint("\n✅ Derivative complete!", "green", attrs=["bold"])
    return 0


def cmd_gamma(args: argparse.Namespace) -> int:
    bundle = load_field(args.field)
    cone = bundle.decomposition.cone(args.cone) if args.cone else bundle.decomposition.cones[0]
    query = GammaQuery(tuple(_rationals(args.y)), args.p, args.precision)
    _banner(f"MULTIPLE GAMMA ON {bundle.field.name}, p = {args.p}")
    value = gamma_multiple(query, cone, bundle.decomposition.ring)
    cprint(f"  Gamma({', '.join(str(c) for c in query.y)}) = {value}", "green")
    _finish(to_jsonable({"y": [str(c) for c in query.y], "p": args.p, "value": value}), args.json)
    cprint("\n✅ Gamma complete!", "green", attrs=["bold"])
    return 0


def cmd_identity(args: argparse.Namespace) -> int:
    _banner(f"IDENTITY {args.which.upper()}")
    payload: dict
    if args.which == "curious":
        records = curious_grid(args.max_n)
        failed = [r for r in records if not r["passed"]]
        for r in records[:10]:
            cprint(f"  N = {r['N']}: roots {r['roots']}, value {r['values']}", "green")
        payload = {"records": records}
    elif args.which == "zero-sum":
        bundle = load_field(args.field)
        cn = bundle.cn(args.cn)
        value = zero_sum_identity(bundle.decomposition, cn)
        cprint(f"  sum = {value}", "green" if value == 0 else "red")
        failed = [] if value == 0 else [str(value)]
        payload = {"field": bundle.field.name, "cn": cn.name, "value": str(value)}
    elif args.which == "fg":
        records = fg_grid(args.max_q)
        failed = [r for r in records if not r["passed"]]
        cprint(f"  {len(records)} parameter sets, {len(failed)} failed", "green" if not failed else "red")
        payload = {"records": records}
    else:
        failed = []
        if args.residues:
            settings = [_integers(args.residues)]
        else:
            settings = [tuple([1] * k) for k in range(1, args.max_k + 1)]
        for residues in settings:
            k = len(residues)
            for N in (3, 5, 7):
                if any(r % N == 0 for r in residues):
                    raise ParameterViolation(f"residues {residues} must be units modulo {N}")
                for i in range(k + 1):
                    for y in range(N):
                        if not lemma33_check(i, k, N, residues, y):
                            failed.append({"k": k, "N": N, "residues": list(residues), "i": i, "y": y})
        cprint(f"  {len(failed)} failures", "green" if not failed else "red")
        payload = {"failed": failed}
    _finish(payload, args.json)
    if failed:
        cprint(f"  {len(failed)} identity checks failed", "red")
        return 1
    cprint("\n✅ Identity check complete!", "green", attrs=["bold"])
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest).select(args.suite, args.max_q)
    _banner(f"VERIFY {manifest.name} (seed {manifest.seed})")
    report = run_suite(manifest)
    output = args.json or manifest.output
    if output:
        out = write_json(report.to_json(), output)
        cprint(f"  Report written to {out}", "green")
    print_summary(report, args.csv or manifest.csv)
    if not report.passed:
        cprint(f"\n{len(report.failed)} checks failed", "red", attrs=["bold"])
        return 1
    cprint("\n✅ Verification complete!", "green", attrs=["bold"])
    return 0


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shintani", description="p-adic Hecke L-functions via Shintani cones")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="Validate and summarize a field file")
    p.add_argument("file", help="Field file or name under data/fields")
    p.add_argument("--cn", help="Also list the characters of this CN map")
    p.add_argument("--json", help="Write the summary as JSON")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("period", help="Period of a zeta or Dirichlet measure on one cylinder")
    p.add_argument("field")
    p.add_argument("--kind", choices=["zeta", "dirichlet"], default="zeta")
    p.add_argument("--cn", help="CN map name")
    p.add_argument("--char", type=int, default=1, help="Character index (default: 1)")
    p.add_argument("--cone", help="Cone label (default: first cone)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--x", help="Base point coordinates, comma separated (default: first parallelotope point)")
    p.add_argument("--l", help="Cylinder offsets, comma separated (default: zeros)")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="Compare against the Abel-limit oracle")
    p.add_argument("--json")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("lvalue", help="Truncated sum expressions S_0..S_n")
    p.add_argument("field")
    p.add_argument("--cn")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--char", type=int, help="Character index (zeta mode when omitted)")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--s", default="0", help="Exponent in Z_p as a rational (default: 0)")
    p.add_argument("--precision", type=int, default=Config.DEFAULT_PRECISION)
    p.add_argument("--omega-power", type=int, default=-1, help="Power of omega_F in zeta mode (default: -1)")
    p.add_argument("--json")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("derivative", help="Derivative at s = 0 through the multiple Gamma function")
    p.add_argument("field")
    p.add_argument("--cn")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--char", type=int, required=True)
    p.add_argument("--precision", type=int, default=Config.DEFAULT_PRECISION)
    p.add_argument("--gamma-precision", type=int, help=f"Digits of Gamma_V (default: min(precision, {Config.GAMMA_PRECISION}))")
    p.add_argument("--pieces", action="store_true", help="Also print each (V, x) contribution")
    p.add_argument("--json")
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("gamma", help="Multiple p-adic Gamma at a point given in cone coordinates")
    p.add_argument("field")
    p.add_argument("--cone")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--y", required=True, help="Cone coordinates, comma separated")
    p.add_argument("--precision", type=int, default=Config.GAMMA_PRECISION)
    p.add_argument("--json")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("identity", help="Combinatorial identity checks")
    p.add_argument("which", choices=["curious", "zero-sum", "fg", "lemma33"])
    p.add_argument("--field", default="qsqrt5")
    p.add_argument("--cn", default="sqrt5")
    p.add_argument("--max-n", type=int, default=300)
    p.add_argument("--max-q", type=int, default=1024)
    p.add_argument("--max-k", type=int, default=3)
    p.add_argument("--residues", help="lemma33: residues of rho(v_i), comma separated (default: all ones up to --max-k)")
    p.add_argument("--json")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("verify", help="Run the verification suites of a manifest")
    p.add_argument("manifest", help="Manifest file or name under data/manifests")
    p.add_argument("--suite", action="append", help="Restrict to this suite (repeatable)")
    p.add_argument("--max-q", type=int, help="Override the FG grid bound")
    p.add_argument("--csv", help="Write the per-suite summary as CSV")
    p.add_argument("--json", help="Report path (default: the manifest's output)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShintaniError as e:
        cprint(f"Error: {e}", "red")
        return 2


if __name__ == "__main__":
    sys.exit(main())
