"""Command line front end.

Exit status: 0 on success, 1 when a check fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .complemented import GroundSet, IndicatorFn, apartness_axioms, law_violations
from .completion import Representation, check_pis_completion, finite, geometric, integral_rep, norm1
from .premeasure import PreMeasureSpace, check_pms, dirac, lemma_report, table_measure, weighted_counting
from .reals import ModulatedReal, pair, unpair
from .report import CheckConfig, Report, verdict
from .simple import SimpleFunction, check_pis_simple, integral, pis_basic_lemmas

SUITES = ("pms", "pis-simple", "pis-complete", "algebra", "all")


class InputError(ValueError):
    """Malformed command line input (exit status 2)."""


def _rational(text) -> Fraction:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise InputError(f"expected a rational as a string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def parse_space(doc) -> PreMeasureSpace:
    """Build a space from ``{"ground_set": [...], "measure": {...}}``.

    Measures: ``{"type": "dirac", "point": label}``,
    ``{"type": "weighted", "weights": {label: "p/q"}}`` and
    ``{"type": "table", "values": {bitstring: "p/q"}}``.
    """
    if not isinstance(doc, dict) or "ground_set" not in doc or "measure" not in doc:
        raise InputError("space needs 'ground_set' and 'measure'")
    labels = doc["ground_set"]
    if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
        raise InputError("ground_set must be a non-empty list of strings")
    try:
        ground = GroundSet.of(labels)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    m = doc["measure"]
    if not isinstance(m, dict):
        raise InputError("measure must be an object")
    kind = m.get("type")
    try:
        if kind == "dirac":
            return dirac(ground, m["point"])
        if kind == "weighted":
            weights = m["weights"]
            if not isinstance(weights, dict):
                raise InputError("weights must be an object")
            return weighted_counting(ground, {k: _rational(v) for k, v in weights.items()})
        if kind == "table":
            values = m["values"]
            if not isinstance(values, dict):
                raise InputError("values must be an object")
            return table_measure(ground, {k: _rational(v) for k, v in values.items()})
    except KeyError as exc:
        raise InputError(f"unknown or missing key {exc}") from exc
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown measure type {kind!r}")


def parse_simple(space: PreMeasureSpace, doc) -> SimpleFunction:
    """``[["3/2", "101"], ["-1", "011"]]``: bit k is the value at ground element k."""
    if not isinstance(doc, list):
        raise InputError("a simple function is a list of [coefficient, bitstring] pairs")
    terms = []
    for item in doc:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], str):
            raise InputError(f"bad term {item!r}")
        try:
            index = IndicatorFn.from_bits(space.ground, item[1])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        terms.append((_rational(item[0]), index))
    return SimpleFunction.of(space, terms)


def parse_rep(space: PreMeasureSpace, doc) -> Representation:
    """``{"support": [sf, ...]}`` or ``{"geometric": {"base": sf, "ratio": "1/2"}}``."""
    if isinstance(doc, dict) and set(doc) == {"support"}:
        if not isinstance(doc["support"], list):
            raise InputError("support must be a list of simple functions")
        return finite(space, [parse_simple(space, sf) for sf in doc["support"]])
    if isinstance(doc, dict) and set(doc) == {"geometric"}:
        g = doc["geometric"]
        if not isinstance(g, dict) or set(g) != {"base", "ratio"}:
            raise InputError("geometric needs 'base' and 'ratio'")
        try:
            return geometric(parse_simple(space, g["base"]), _rational(g["ratio"]))
        except InputError:
            raise
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("a representation is {'support': [...]} or {'geometric': {...}}")


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def load_space(path: str) -> PreMeasureSpace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_space(_load_json(text, path))


_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def format_real(x: ModulatedReal, p: int) -> str:
    """Exact values print as ``p/q``; others as ``a ± 2⁻ᵖ`` with ``a`` a multiple of ``2**-p``."""
    if x.exact is not None:
        return str(x.exact)
    a = x.approx_to(p + 2)
    scale = 1 << p
    rounded = Fraction(round(a * scale), scale)
    return f"{rounded} ± 2" + f"-{p}".translate(_SUPERSCRIPT)


def algebra_report(space: PreMeasureSpace) -> Report:
    ground = space.ground
    return Report(
        "algebra",
        [verdict("laws", law_violations(ground)), verdict("apartness", apartness_axioms(ground))],
    )


def run_suite(space: PreMeasureSpace, suite: str, config: CheckConfig) -> Report:
    if suite == "pms":
        return Report.merge("pms", [check_pms(space, config), lemma_report(space, config)])
    if suite == "pis-simple":
        return Report.merge("pis-simple", [check_pis_simple(space, config), pis_basic_lemmas(space, config)])
    if suite == "pis-complete":
        return check_pis_completion(space, config)
    if suite == "algebra":
        return algebra_report(space)
    return Report.merge("all", [run_suite(space, s, config) for s in SUITES[:-1]])


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="constructive-measure", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run axiom checks on a space")
    c.add_argument("space", help="JSON space description")
    c.add_argument("--suite", choices=SUITES, default="all")
    c.add_argument("--precision", type=int, default=16)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-ground", type=int, default=4)
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--out", help="also write the JSON report here")

    i = sub.add_parser("integrate", help="integrate a simple function or representation")
    i.add_argument("space")
    g = i.add_mutually_exclusive_group(required=True)
    g.add_argument("--simple", help="simple-function literal")
    g.add_argument("--rep", help="representation literal")
    i.add_argument("--precision", type=int, default=16)

    n = sub.add_parser("norm", help="1-norm of a representation")
    n.add_argument("space")
    n.add_argument("--rep", required=True)
    n.add_argument("--precision", type=int, default=16)

    pr = sub.add_parser("pair", help="1-based Cantor pairing")
    pr.add_argument("values", nargs="*", type=int)
    pr.add_argument("--inverse", type=int, metavar="M")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return _dispatch(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _check_precision(p: int) -> None:
    if p < 0:
        raise InputError("precision must be non-negative")


def _dispatch(args) -> int:
    if args.command == "pair":
        if args.inverse is not None:
            if args.values:
                raise InputError("pair takes either two integers or --inverse")
            if args.inverse < 1:
                raise InputError("--inverse takes a positive integer")
            print("({}, {})".format(*unpair(args.inverse)))
            return 0
        if len(args.values) != 2 or min(args.values) < 1:
            raise InputError("pair takes two positive integers")
        print(pair(*args.values))
        return 0

    space = load_space(args.space)
    if args.command == "check":
        _check_precision(args.precision)
        if len(space.ground) > args.max_ground:
            raise InputError(f"ground set has {len(space.ground)} elements, more than --max-ground {args.max_ground}")
        config = CheckConfig(seed=args.seed, precision=args.precision, samples=args.samples)
        report = run_suite(space, args.suite, config)
        text = report.to_json()
        print(text)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        for e in report.failures():
            print(f"FAIL {e.id}: counterexample {json.dumps(e.counterexample, sort_keys=True)}", file=sys.stderr)
        return 0 if report.ok else 1

    _check_precision(args.precision)
    if args.command == "integrate":
        if args.simple is not None:
            print(integral(parse_simple(space, _load_json(args.simple, "--simple"))))
            return 0
        rep = parse_rep(space, _load_json(args.rep, "--rep"))
        print(format_real(integral_rep(rep), args.precision))
        return 0
    if args.command == "norm":
        rep = parse_rep(space, _load_json(args.rep, "--rep"))
        print(format_real(norm1(rep), args.precision))
        return 0
    raise InputError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
