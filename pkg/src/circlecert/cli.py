"""Command-line interface.

Exit codes: 0 pass, 1 verified failure or inconsistency, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .certify import INCONSISTENT, Certificate, CertifyError, certify
from .eqcalc import ModelError, integrate, load_class, load_model, validate_model, vanishing_class
from .exactalg import parse_rational
from .fixdata import (
    CheckResult,
    DataError,
    betti_profile,
    is_index_increasing,
    load_dataset,
    localization_consistency,
    poincare_duality_check,
)
from .generators import GeneratorError, Mutation, corrupt, gen_cpn, gen_product, synthetic_n5

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _check_json(c: CheckResult) -> dict[str, Any]:
    return {"name": c.name, "ok": c.ok, "failures": list(c.failures)}


def _emit(args, report: dict[str, Any], text_lines: Sequence[str]) -> None:
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        sys.stdout.write("".join(line + "\n" for line in text_lines))


def cmd_validate(args) -> int:
    d = load_dataset(args.data)
    checks = [
        localization_consistency(d),
        poincare_duality_check(betti_profile(d)),
        is_index_increasing(d),
    ]
    if args.model:
        checks.append(validate_model(d, load_model(args.model, d)))
    warnings = []
    b = betti_profile(d)
    if b[0] != 1:
        warnings.append(f"b_0 = {b[0]}: dataset does not describe a connected manifold")
    code = EXIT_OK if all(checks) else EXIT_FAIL
    lines = [f"betti numbers: {list(b.values)}"]
    for c in checks:
        lines.append(f"{'PASS' if c.ok else 'FAIL'} {c.name}")
        lines.extend(f"  {f}" for f in c.failures)
    lines.extend(f"WARNING {w}" for w in warnings)
    report = {
        "command": "validate",
        "betti": list(b.values),
        "checks": [_check_json(c) for c in checks],
        "warnings": warnings,
        "exit_code": code,
    }
    _emit(args, report, lines)
    return code


def _certificate_text(c: Certificate) -> list[str]:
    lines = [f"verdict: {c.verdict}"]
    if c.verdict == INCONSISTENT:
        lines.append(f"violation: b_{2 * c.k} > b_{2 * c.k + 2}")
        lines.append(f"vanishing target P: {', '.join(sorted(c.target.points))}")
        lines.append(
            "alpha: " + ", ".join(f"{i}={a}" for i, a in c.alpha.to_json()["restrictions"].items())
        )
        for j, (g, s) in enumerate(zip(c.partition.groups, c.ledger.subtotals), start=1):
            lines.append(f"I_{j} = {{{', '.join(g)}}}: S_{j} = {s}")
        lines.append("separators: " + ", ".join(str(r) for r in c.partition.separators))
        lines.append(f"integral of beta = {c.ledger.total} * u^-1, must be 0")
    lines.append(c.explanation)
    return lines


def cmd_certify(args) -> int:
    d = load_dataset(args.data)
    model = load_model(args.model, d)
    try:
        c = certify(d, model, check_mechanism=args.mechanism)
    except CertifyError as e:
        report = {"command": "certify", "error": str(e), "exit_code": EXIT_INPUT}
        _emit(args, report, [f"refused: {e}"])
        return EXIT_INPUT
    code = EXIT_FAIL if c.verdict == INCONSISTENT else EXIT_OK
    report = {"command": "certify", "certificate": c.to_json(), "exit_code": code}
    _emit(args, report, _certificate_text(c))
    return code


def cmd_betti(args) -> int:
    b = list(betti_profile(load_dataset(args.data)).values)
    _emit(args, {"command": "betti", "betti": b}, [str(b)])
    return EXIT_OK


def cmd_integrate(args) -> int:
    d = load_dataset(args.data)
    res = integrate(d, load_class(args.class_path, d))
    report = {"command": "integrate", "scalar": str(res.scalar), "u_exponent": res.u_exponent}
    _emit(args, report, [str(res)])
    return EXIT_OK


def cmd_find_class(args) -> int:
    d = load_dataset(args.data)
    model = load_model(args.model, d)
    if args.degree % 2 or args.degree < 0:
        raise UsageError("--degree must be even and nonnegative")
    k = args.degree // 2
    if k >= d.half_dim:
        raise UsageError(f"bases are only stored below degree {2 * d.half_dim}")
    targets = [t for v in args.vanish for t in v.split(",") if t]
    for t in targets:
        if t not in d.ids:
            raise UsageError(f"unknown fixed point id {t!r}")
    alpha = vanishing_class(model, k, targets)
    if alpha is None:
        report = {"command": "find-class", "class": None}
        _emit(args, report, [f"no nonzero degree-{args.degree} class vanishes on {targets}"])
        return EXIT_FAIL
    report = {"command": "find-class", "class": alpha.to_json()}
    text = ", ".join(f"{i}={a}" for i, a in alpha.to_json()["restrictions"].items())
    _emit(args, report, [f"degree {alpha.degree}: {text}"])
    return EXIT_OK


def _write_outputs(args, d, model) -> int:
    if args.out is None:
        if model is not None:
            raise UsageError("--with-model needs --out")
        sys.stdout.write(dumps(d.to_json()))
        return EXIT_OK
    out = Path(args.out)
    out.write_text(dumps(d.to_json()))
    written = [str(out)]
    if model is not None:
        mpath = out.with_name(out.name.removesuffix(".json") + ".model.json")
        mpath.write_text(dumps(model.to_json()))
        written.append(str(mpath))
    sys.stderr.write("wrote " + ", ".join(written) + "\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "cpn":
        d, model = gen_cpn(_int_list(args.weights))
    elif args.kind == "product":
        if len(args.factor) != 2:
            raise UsageError("product needs exactly two --factor weight lists")
        d, model = gen_product(
            gen_cpn(_int_list(args.factor[0])),
            gen_cpn(_int_list(args.factor[1])),
            parse_rational(args.scale),
        )
        inc = is_index_increasing(d)
        if not inc:
            sys.stderr.write(f"note: product is not index-increasing: {inc.failures[0]}\n")
    elif args.kind == "synthetic":
        d, model = synthetic_n5()
    else:
        d = corrupt(
            load_dataset(args.data),
            Mutation(
                args.point,
                args.weight_index,
                args.new_weight,
                None if args.moment is None else parse_rational(args.moment),
            ),
        )
        model = None
    return _write_outputs(args, d, model if getattr(args, "with_model", False) else None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="circlecert",
        description="Exact localization checks and unimodality certificates for circle-action fixed point data.",
    )
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[fmt], help="run all data and model checks")
    s.add_argument("data")
    s.add_argument("--model")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("certify", parents=[fmt], help="certify unimodality or refute the data")
    s.add_argument("data")
    s.add_argument("--model", required=True)
    s.add_argument("--mechanism", action="store_true",
                   help="for unimodal profiles also check injectivity on every target set")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("betti", parents=[fmt], help="print even Betti numbers")
    s.add_argument("data")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("integrate", parents=[fmt], help="integrate a class by localization")
    s.add_argument("data")
    s.add_argument("--class", dest="class_path", required=True)
    s.set_defaults(func=cmd_integrate)

    s = sub.add_parser("find-class", parents=[fmt], help="find a class vanishing on given points")
    s.add_argument("data")
    s.add_argument("--model", required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--vanish", action="append", default=[], help="point id(s), repeatable or comma-separated")
    s.set_defaults(func=cmd_find_class)

    g = sub.add_parser("gen", help="generate fixture datasets")
    gsub = g.add_subparsers(dest="kind", required=True)
    s = gsub.add_parser("cpn", help="CP^n with a weighted circle action")
    s.add_argument("--weights", required=True, help="distinct integers a_0,...,a_n")
    s.add_argument("--with-model", action="store_true")
    s.add_argument("--out")
    s = gsub.add_parser("product", help="product of two CP^n's")
    s.add_argument("--factor", action="append", default=[], help="weights of one factor; give twice")
    s.add_argument("--scale", default="1", help="positive rational multiplying the second moment map")
    s.add_argument("--with-model", action="store_true")
    s.add_argument("--out")
    s = gsub.add_parser("synthetic", help="the non-unimodal n=5 fixture")
    s.add_argument("--with-model", action="store_true")
    s.add_argument("--out")
    s = gsub.add_parser("corrupt", help="alter one weight or moment of a dataset")
    s.add_argument("data")
    s.add_argument("--point", required=True)
    s.add_argument("--weight-index", type=int)
    s.add_argument("--new-weight", type=int)
    s.add_argument("--moment")
    s.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except (DataError, ModelError, GeneratorError, UsageError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
