"""Command-line entry point.

Subcommands: ``verify`` (the full pipeline for one example), ``enumerate``
(the Cohen-Macaulay family table, optionally cross-checked against the
brute-force oracle), ``classify`` (tame/wild from a curve descriptor) and
``inspect`` (dump an algebra table).  Exit codes: 0 success, 1 verification
or oracle failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Optional

from . import blowup, bundles, structalg
from .catalog import get_model
from .excurve import CurveDescriptor, CurveError, classify_tameness
from .scalars import is_prime, random_prime
from .verify import (ConfigurationError, build_prime_context,
                     build_symbolic_context, run_verification)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _threads_cap() -> int:
    """Optional parallelism cap; everything here runs sequentially, which
    satisfies any cap, but the value is validated for early feedback."""
    raw = os.environ.get("CMATLAS_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigurationError(f"CMATLAS_THREADS={raw!r} is not an integer")
    if cap < 1:
        raise ConfigurationError("CMATLAS_THREADS must be at least 1")
    return cap


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _parse_field(text: str) -> tuple[str, Optional[int]]:
    if text == "symbolic":
        return "symbolic", None
    if text.startswith("q:"):
        try:
            prime = int(text[2:])
        except ValueError:
            raise ConfigurationError(f"bad prime in --field {text!r}")
        if not is_prime(prime):
            raise ConfigurationError(f"{prime} is not prime")
        return "prime", prime
    raise ConfigurationError(f"--field must be 'symbolic' or 'q:<prime>', got {text!r}")


def _parse_lambda(text: Optional[str], prime: Optional[int]) -> Optional[int]:
    if text is None:
        return None
    if prime is None:
        raise ConfigurationError("--lambda is only meaningful with --field q:<prime>")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"--lambda {text!r} is not a rational number")
    if value.denominator % prime == 0:
        raise ConfigurationError(f"--lambda {text!r} has no residue modulo {prime}")
    return value.numerator * pow(value.denominator, prime - 2, prime) % prime


def cmd_verify(args) -> int:
    mode, prime = _parse_field(args.field)
    lam = _parse_lambda(getattr(args, "lam", None), prime)
    reports = []
    if args.all:
        reports.append(run_verification(args.example, "symbolic",
                                        seed=args.seed,
                                        specializations=args.specializations))
        rng = random.Random(args.seed)
        for _ in range(3):
            p = prime if prime is not None else random_prime(rng, 10 ** 3, 10 ** 5)
            reports.append(run_verification(
                args.example, "prime", prime=p, lam=lam,
                seed=rng.randrange(2 ** 30), specializations=0))
    else:
        reports.append(run_verification(args.example, mode, prime=prime,
                                        lam=lam, seed=args.seed,
                                        specializations=args.specializations))
    if args.format == "json":
        payload = (reports[0].to_json() if len(reports) == 1
                   else {"reports": [r.to_json() for r in reports]})
        _emit(_json_text(payload), args.out)
    else:
        _emit("\n\n".join(r.format_text() for r in reports) + "\n", args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILURE


def cmd_enumerate(args) -> int:
    if not 1 <= args.rank <= 64:
        raise ConfigurationError("--rank must be between 1 and 64")
    classes = bundles.enumerate_cm(args.rank)
    counts = bundles.family_counts(classes)
    oracle_result = None
    if args.oracle:
        max_degree = args.max_degree or args.rank + 1
        generic = bundles.PicPoint.generator("q")
        found = bundles.brute_force_full(args.rank, max_degree)
        predicted = bundles.predicted_full_indecomposable(
            args.rank, max_degree, (bundles.INFINITY, generic),
            bundles.PicPoint.generator("p"))
        oracle_result = {
            "max_total_rank": args.rank,
            "max_degree": max_degree,
            "brute_force_classes": len(found),
            "predicted_classes": len(predicted),
            "match": found == predicted,
        }
    if args.format == "json":
        payload = {
            "rank": args.rank,
            "classes": bundles.enumeration_rows(classes),
            "counts": counts,
        }
        if oracle_result is not None:
            payload["oracle"] = oracle_result
        _emit(_json_text(payload), args.out)
    else:
        text = bundles.format_enumeration(args.rank, classes)
        if oracle_result is not None:
            verdict = "pass" if oracle_result["match"] else "MISMATCH"
            text += (f"\noracle (total rank <= {oracle_result['max_total_rank']},"
                     f" |degree| <= {oracle_result['max_degree']}): "
                     f"{oracle_result['brute_force_classes']} classes, {verdict}")
        _emit(text + "\n", args.out)
    if oracle_result is not None and not oracle_result["match"]:
        return EXIT_FAILURE
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        descriptor = CurveDescriptor.parse(args.curve)
    except (CurveError, ValueError) as error:
        raise ConfigurationError(str(error))
    verdict = classify_tameness(descriptor)
    if args.format == "json":
        _emit(_json_text({"curve": str(descriptor), "verdict": verdict}), args.out)
    else:
        _emit(verdict + "\n", args.out)
    return EXIT_OK


def cmd_inspect(args) -> int:
    model = get_model(args.example)
    ctx = build_symbolic_context(model)
    algebra = structalg.build_example_algebra(model.key, ctx)
    if args.chart:
        chart1, chart2 = blowup.standard_charts(algebra.ring)
        chart = chart1 if args.chart == "U1" else chart2
        recipe = model.chart1 if args.chart == "U1" else model.chart2
        pulled = blowup.pullback_relations(algebra, chart)
        if recipe.adjoined:
            chart_alg = blowup.adjoin_generators(pulled, chart,
                                                 list(recipe.adjoined))
        else:
            basis = blowup.find_chart_basis(pulled, chart, list(recipe.searched))
            chart_alg = blowup.adjoin_generators(pulled, chart, basis)
        dump = chart_alg.algebra.dump()
        dump["chart"] = chart.name
        dump["embedding"] = {
            label: {old: str(c) for old, c in
                    zip(chart_alg.original_basis, row) if not c.is_zero()}
            for label, row in zip(chart_alg.algebra.basis, chart_alg.embedding)}
    else:
        dump = algebra.dump()
    if args.format == "json":
        _emit(_json_text(dump), args.out)
    else:
        lines = [f"basis: {', '.join(dump['basis'])} (unit {dump['unit']})"]
        for key, row in dump["table"].items():
            value = " + ".join(f"({c})*{b}" for b, c in row.items()) or "0"
            lines.append(f"  {key} = {value}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmatlas",
        description="desk-scale verification of two non-commutative surface "
                    "singularities and their Cohen-Macaulay module atlas")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the verification pipeline")
    p_verify.add_argument("example", choices=("ex1", "ex2"))
    p_verify.add_argument("--field", default="symbolic",
                          help="symbolic (default) or q:<prime>")
    p_verify.add_argument("--lambda", dest="lam", default=None,
                          help="rational parameter binding for prime mode")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--specializations", type=int, default=20,
                          help="random prime-field cross-checks in symbolic mode")
    p_verify.add_argument("--all", action="store_true",
                          help="symbolic run plus three specialized runs")
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_enum = sub.add_parser("enumerate",
                            help="Cohen-Macaulay families of a fixed rank")
    p_enum.add_argument("--rank", type=int, required=True)
    p_enum.add_argument("--oracle", action="store_true",
                        help="cross-check against the brute-force search")
    p_enum.add_argument("--max-degree", type=int, default=None)
    p_enum.add_argument("--format", choices=("text", "json"), default="text")
    p_enum.add_argument("--out", default=None)
    p_enum.set_defaults(func=cmd_enumerate)

    p_classify = sub.add_parser("classify", help="tame/wild from a curve type")
    p_classify.add_argument("curve",
                            help="smooth-elliptic | kodaira:<k> | other:<tag>")
    p_classify.add_argument("--format", choices=("text", "json"), default="text")
    p_classify.add_argument("--out", default=None)
    p_classify.set_defaults(func=cmd_classify)

    p_inspect = sub.add_parser("inspect", help="dump an algebra table")
    p_inspect.add_argument("example", choices=("ex1", "ex2"))
    p_inspect.add_argument("--chart", choices=("U1", "U2"), default=None)
    p_inspect.add_argument("--format", choices=("text", "json"), default="json")
    p_inspect.add_argument("--out", default=None)
    p_inspect.set_defaults(func=cmd_inspect)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads_cap()
        return args.func(args)
    except ConfigurationError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
