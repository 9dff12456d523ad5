"""Command line interface.

Exit codes: 0 success, 1 verification failure (an exact theorem check did
not hold), 2 usage or input errors.  All reports are deterministic: same
input, byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from torifan import harness, invariants, jsonio
from torifan.catalog import load_catalog
from torifan.errors import ParseError, TorifanError, VerificationError
from torifan.okounkov import FlagSpec, default_flag


def _write(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _divisor_from_args(variety, args):
    if getattr(args, "divisor", None):
        return jsonio.load_divisor(args.divisor, variety)
    return variety.anticanonical()


def _parse_flag(variety, text):
    """--flag CONE or --flag CONE:r0,r1,... (a permutation of the cone)."""
    head, sep, tail = text.partition(":")
    try:
        cone_index = int(head)
    except ValueError:
        raise ParseError(f"bad flag spec {text!r}: cone index must be an integer")
    if not 0 <= cone_index < len(variety.max_cones):
        raise ParseError(f"cone index {cone_index} out of range")
    if not sep:
        return default_flag(variety, cone_index)
    try:
        order = tuple(int(part) for part in tail.split(","))
    except ValueError:
        raise ParseError(f"bad flag spec {text!r}: ray order must be integers")
    return FlagSpec(variety, cone_index, order)


def _report_dict(rep):
    return {
        "variety": rep.variety,
        "n": rep.dim,
        "coeffs": [jsonio.format_rational(c) for c in rep.coeffs],
        "vol": jsonio.format_rational(rep.vol),
        "seshadri": jsonio.format_rational(rep.eps),
        "delta": jsonio.format_rational(rep.delta),
        "delta_witness_ray": rep.delta_witness_ray,
        "beta": jsonio.format_rational(rep.beta),
        "score": jsonio.format_rational(rep.score),
        "score_decimal": jsonio.decimal_string(rep.score),
        "bound": jsonio.format_rational(rep.bound),
        "gap": jsonio.format_rational(rep.bound - rep.score),
        "is_extremal": rep.is_extremal,
    }


def _cmd_validate(args):
    variety = jsonio.load_fan(args.fan)
    payload = {
        "name": variety.name,
        "dim": variety.dim,
        "rays": [list(r) for r in variety.rays],
        "max_cones": [list(c) for c in variety.max_cones],
        "n_walls": len(variety.walls),
        "anticanonical_ample": variety.anticanonical().is_ample(),
        "valid": True,
    }
    _write(jsonio.dumps(payload), args.out)
    return 0


def _cmd_invariants(args):
    variety = jsonio.load_fan(args.fan)
    divisor = _divisor_from_args(variety, args)
    rep = invariants.score(divisor)
    if args.format == "csv":
        rows = [
            (
                rep.variety,
                rep.dim,
                jsonio.format_rational(rep.vol),
                jsonio.format_rational(rep.eps),
                jsonio.format_rational(rep.delta),
                jsonio.format_rational(rep.beta),
                jsonio.format_rational(rep.score),
                jsonio.decimal_string(rep.score),
                jsonio.format_rational(rep.bound - rep.score),
            )
        ]
        text = harness.render_csv(
            (
                "variety",
                "n",
                "vol",
                "seshadri",
                "delta",
                "beta",
                "score",
                "score_decimal",
                "gap",
            ),
            rows,
        )
    else:
        text = jsonio.dumps(_report_dict(rep))
    _write(text, args.out)
    return 0


def _cmd_sweep(args):
    from torifan.sweep import sweep_ample_cone

    variety = jsonio.load_fan(args.fan)
    cap = args.samples_cap if args.include_samples else 0
    result = sweep_ample_cone(
        variety, args.resolution, collect_cap=cap, engine=args.engine
    )
    if args.format == "csv":
        rows = [
            (
                result.variety_name,
                result.dim,
                result.resolution,
                result.engine,
                result.candidates,
                result.ample_samples,
                jsonio.format_rational(result.max_score),
                jsonio.decimal_string(result.max_score),
                jsonio.format_rational(result.gap),
                " ".join(str(c) for c in result.argmax_coeffs),
            )
        ]
        text = harness.render_csv(
            (
                "variety",
                "n",
                "resolution",
                "engine",
                "candidates",
                "ample_samples",
                "max_score",
                "max_score_decimal",
                "gap",
                "argmax",
            ),
            rows,
        )
    else:
        payload = {
            "variety": result.variety_name,
            "n": result.dim,
            "resolution": result.resolution,
            "engine": result.engine,
            "candidates": result.candidates,
            "ample_samples": result.ample_samples,
            "extremal_samples": result.extremal_samples,
            "max_score": jsonio.format_rational(result.max_score),
            "max_score_decimal": jsonio.decimal_string(result.max_score),
            "argmax": list(result.argmax_coeffs),
            "gap": jsonio.format_rational(result.gap),
            "bound": result.bound,
        }
        if args.include_samples:
            payload["sample_reports_complete"] = result.sample_reports_complete
            payload["sample_reports"] = [
                _report_dict(rep) for rep in result.sample_reports
            ]
        text = jsonio.dumps(payload)
    _write(text, args.out)
    return 0


def _cmd_blowup(args):
    variety = jsonio.load_fan(args.fan)
    divisor = _divisor_from_args(variety, args)
    report = harness.blowup_command(
        variety, args.cone, divisor, samples=args.samples
    )
    if args.format == "json":
        text = jsonio.dumps(report.json_dict())
    else:
        text = report.csv_text()
    _write(text, args.out)
    return 0


def _cmd_okounkov(args):
    variety = jsonio.load_fan(args.fan)
    divisor = _divisor_from_args(variety, args)
    flag = _parse_flag(variety, args.flag) if args.flag else None
    translations = [Fraction(t) for t in args.check_translation]
    report = harness.okounkov_command(
        variety, divisor, flag=flag, translations=translations,
        samples=args.samples,
    )
    if args.format == "csv":
        text = report.csv_text()
    else:
        text = jsonio.dumps(report.json_dict())
    _write(text, args.out)
    return 0


def _cmd_verify(args):
    catalog = load_catalog(args.catalog)
    report = harness.verify_theorem(catalog, args.resolution, engine=args.engine)
    if args.format == "json":
        text = jsonio.dumps(report.json_dict())
    else:
        text = report.csv_text()
    _write(text, args.out)
    return 0


def _cmd_gap(args):
    catalog = load_catalog(args.catalog)
    report = harness.gap_report(
        catalog, args.resolution, dimension=args.dimension, engine=args.engine
    )
    if args.format == "json":
        text = jsonio.dumps(report.json_dict())
    else:
        text = report.csv_text()
    _write(text, args.out)
    return 0


def _add_divisor_options(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--divisor", help="divisor coefficient JSON file")
    group.add_argument(
        "--anticanonical",
        action="store_true",
        help="use the anticanonical divisor (default)",
    )


def _add_common(sub, default_format):
    sub.add_argument("--out", help="write output to this path instead of stdout")
    sub.add_argument(
        "--format", choices=("csv", "json"), default=default_format
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torifan",
        description="exact verification toolkit for toric Fano inequalities",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="validate a fan file")
    p.add_argument("fan")
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_validate)

    p = subs.add_parser("invariants", help="exact invariants of one class")
    p.add_argument("fan")
    _add_divisor_options(p)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_invariants)

    p = subs.add_parser("sweep", help="score sweep over the ample cone")
    p.add_argument("fan")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--engine", choices=("auto", "pure", "cython"), default=None)
    p.add_argument("--include-samples", action="store_true")
    p.add_argument("--samples-cap", type=int, default=512)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_sweep)

    p = subs.add_parser("blowup", help="Fujita profile at a fixed point")
    p.add_argument("fan")
    p.add_argument("--cone", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    _add_divisor_options(p)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_blowup)

    p = subs.add_parser("okounkov", help="Okounkov body of a big class")
    p.add_argument("fan")
    p.add_argument(
        "--flag",
        help="CONE or CONE:r0,r1,... choosing the flag at a fixed point",
    )
    p.add_argument(
        "--check-translation",
        action="append",
        default=[],
        metavar="T",
        help="verify the truncation-translation identity at t = T",
    )
    p.add_argument("--samples", type=int, default=32)
    _add_divisor_options(p)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_okounkov)

    p = subs.add_parser(
        "verify-theorem", help="sweep the catalog against the (n+1)^n bound"
    )
    p.add_argument("--catalog", help="directory of fan JSON files")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--engine", choices=("auto", "pure", "cython"), default=None)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_verify)

    p = subs.add_parser(
        "gap-report", help="empirical score gap of non-P^n entries"
    )
    p.add_argument("--catalog", help="directory of fan JSON files")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--dimension", type=int, default=None)
    p.add_argument("--engine", choices=("auto", "pure", "cython"), default=None)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_gap)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (TorifanError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
