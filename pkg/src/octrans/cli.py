"""Command-line front end: transforms, convolutions and verification suites.

Inputs are JSON documents (algebras, distributions); outputs are JSON by
default or aligned text with --format text.  Exit codes: 0 on success, 1 on
input errors, 2 when a verification suite reports failures.  The maximal
truncation order is capped by the OCTRANS_MAX_ORDER environment variable
(default 6).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import (AlgebraError, algebra_from_json, algebra_to_json)
from .ncpart import NCError
from .envelope import HopfError
from .prob import (OVDistribution, ProbError, TransformPair,
                   conditional_cumulants, conditional_h, conditional_t,
                   cumulants, distribution_from_cumulants,
                   distribution_from_moments, h_transform,
                   multiplicative_convolve, subordination, t_transform)
from .series import (SeriesError, components_from_json, series_to_json)
from . import suites

MONOTONE_NOTE = ("note: monotone kinds return the transform of the product "
                 "b.a -- the second operand multiplies from the left")


class CliError(Exception):
    pass


def _max_order():
    try:
        return int(os.environ.get("OCTRANS_MAX_ORDER", "6"))
    except ValueError:
        raise CliError("OCTRANS_MAX_ORDER must be an integer")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise CliError("%s: malformed JSON at line %d" % (path, exc.lineno))


def read_distribution(path, order=None) -> OVDistribution:
    """Parse and validate a distribution document.

    Exactly one of moments/cumulants per state; means must equal 1_B;
    orders are capped by OCTRANS_MAX_ORDER.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise CliError("%s: distribution document must be an object" % path)
    try:
        alg = algebra_from_json(doc.get("algebra", "scalar"))
    except AlgebraError as exc:
        raise CliError("%s: invalid algebra: %s" % (path, exc))
    doc_order = doc.get("order")
    if doc_order is None:
        raise CliError("%s: missing order" % path)
    cap = _max_order()
    if doc_order > cap:
        raise CliError("%s: order %d exceeds OCTRANS_MAX_ORDER=%d"
                       % (path, doc_order, cap))
    has_cum = "cumulants" in doc
    has_mom = "phi_moments" in doc or "psi_moments" in doc
    if has_cum and has_mom:
        raise CliError("%s: give either moments or cumulants, not both"
                       % path)
    try:
        if has_cum:
            cum = doc["cumulants"]
            if "psi" not in cum:
                raise CliError("%s: cumulants need at least the psi state"
                               % path)
            k = components_from_json(cum["psi"], alg, doc_order)
            kc = components_from_json(cum["phi"], alg, doc_order) \
                if "phi" in cum else None
            dist = distribution_from_cumulants(k, kc)
        else:
            if "phi_moments" not in doc:
                raise CliError("%s: missing phi_moments" % path)
            phi = components_from_json(doc["phi_moments"], alg, doc_order)
            psi = components_from_json(doc["psi_moments"], alg, doc_order) \
                if "psi_moments" in doc else None
            dist = distribution_from_moments(phi, psi)
    except (SeriesError, NCError, AlgebraError, ProbError) as exc:
        raise CliError("%s: %s" % (path, exc))
    if order is not None:
        if order > dist.order:
            raise CliError("%s: requested order %d exceeds stored order %d"
                           % (path, order, dist.order))
        dist = OVDistribution(dist.algebra, order,
                              dist.phi_moments.truncate(order),
                              dist.psi_moments.truncate(order)
                              if dist.psi_moments is not None else None,
                              dist.source)
    return dist


def _pair_doc(pair: TransformPair):
    return {"role": pair.role, "main": series_to_json(pair.main),
            "conditional": series_to_json(pair.conditional)}


def _series_text(doc, indent="  "):
    lines = []
    for n, comp in enumerate(doc["components"]):
        lines.append("%sn=%d: %s" % (indent, n, " ".join(comp)))
    return "\n".join(lines)


def _render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return _render_text(doc) + "\n"


def _render_text(doc, depth=0):
    pad = "  " * depth
    if isinstance(doc, dict):
        if "components" in doc and "order" in doc:
            return _series_text(doc, pad + "  ")
        out = []
        for key in sorted(doc):
            val = doc[key]
            if isinstance(val, (dict, list)):
                out.append("%s%s:" % (pad, key))
                out.append(_render_text(val, depth + 1))
            else:
                out.append("%s%s: %s" % (pad, key, val))
        return "\n".join(out)
    if isinstance(doc, list):
        return "\n".join(_render_text(v, depth) for v in doc)
    return "%s%s" % (pad, doc)


def _report_text(report):
    lines = []
    for res in report["results"]:
        mark = {"pass": "PASS", "skip": "SKIP"}.get(res["status"], "FAIL")
        wit = ""
        if res.get("witnesses"):
            wit = "  [%s]" % "; ".join(res["witnesses"])
        lines.append("%s  %s%s" % (mark, res["property"], wit))
    lines.append("%d checks, suite %s: %s"
                 % (report["checks"], report["suite"],
                    "pass" if report["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _transform_pair(dist: OVDistribution, want: str) -> dict:
    k = cumulants(dist, cross_check=False)
    if dist.is_conditional():
        kpair = conditional_cumulants(dist)
        if want == "K":
            return _pair_doc(kpair)
        tpair = conditional_t(kpair)
        if want == "T":
            return _pair_doc(tpair)
        return _pair_doc(conditional_h(tpair))
    if want == "K":
        return {"role": "K", "main": series_to_json(k)}
    if want == "T":
        return {"role": "T", "main": series_to_json(t_transform(k))}
    return {"role": "H", "main": series_to_json(h_transform(k))}


def _cmd_transforms(args, want):
    dist = read_distribution(args.dist, args.order)
    return _transform_pair(dist, want)


def _cmd_moments(args):
    dist = read_distribution(args.dist, args.order)
    doc = {"algebra": algebra_to_json(dist.algebra), "order": dist.order,
           "psi_moments": series_to_json(dist.psi)["components"]}
    if dist.is_conditional():
        doc["phi_moments"] = series_to_json(dist.phi)["components"]
    return doc


def _cmd_convolve(args):
    if args.kind is None:
        raise CliError("convolve requires --kind "
                       "(free, cfree, monotone, cmonotone)")
    if args.kind in ("monotone", "cmonotone"):
        print(MONOTONE_NOTE, file=sys.stderr)
    da = read_distribution(args.a, args.order)
    db = read_distribution(args.b, args.order)
    if da.algebra != db.algebra:
        raise CliError("operand algebras differ")

    def raw_pair(dist, want):
        doc = _transform_pair(dist, want)
        main = components_from_json(doc["main"]["components"], dist.algebra,
                                    doc["main"]["order"])
        cond = main
        if "conditional" in doc:
            cond = components_from_json(doc["conditional"]["components"],
                                        dist.algebra,
                                        doc["conditional"]["order"])
        return TransformPair(want, main, cond)

    raw_a = raw_pair(da, "T" if args.kind in ("free", "cfree") else "H")
    raw_b = raw_pair(db, "T" if args.kind in ("free", "cfree") else "H")
    order = min(raw_a.main.order, raw_b.main.order)

    def pair_of(raw):
        return TransformPair(raw.role, raw.main.truncate(order),
                             raw.conditional.truncate(order))

    if args.kind == "free":
        out = multiplicative_convolve("free", pair_of(raw_a).main,
                                      pair_of(raw_b).main)
        doc = {"kind": "free", "product": "a.b",
               "transform": {"role": "T", "main": series_to_json(out)}}
    elif args.kind == "cfree":
        pair = multiplicative_convolve("cfree", pair_of(raw_a),
                                       pair_of(raw_b))
        doc = {"kind": "cfree", "product": "a.b",
               "transform": _pair_doc(pair)}
    elif args.kind == "monotone":
        out = multiplicative_convolve("monotone", pair_of(raw_a).main,
                                      pair_of(raw_b).main)
        doc = {"kind": "monotone", "product": "b.a",
               "transform": {"role": "H", "main": series_to_json(out)}}
    else:
        pair = multiplicative_convolve("cmonotone", pair_of(raw_a),
                                       pair_of(raw_b))
        doc = {"kind": "cmonotone", "product": "b.a",
               "transform": _pair_doc(pair)}
    return doc


def _cmd_subordination(args):
    da = read_distribution(args.a, args.order)
    db = read_distribution(args.b, args.order)
    if da.algebra != db.algebra:
        raise CliError("operand algebras differ")
    ka = cumulants(da, cross_check=False)
    kb = cumulants(db, cross_check=False)
    order = min(ka.order, kb.order)
    sub = subordination(ka.truncate(order), kb.truncate(order), check=True)
    return {"k_left": series_to_json(sub.k_left),
            "k_right": series_to_json(sub.k_right),
            "h_left": series_to_json(sub.h_left),
            "h_right": series_to_json(sub.h_right)}


def _cmd_validate_algebra(args):
    doc = _load_json(args.algebra_file)
    try:
        alg = algebra_from_json(doc)
    except AlgebraError as exc:
        witness = getattr(exc, "witness", None)
        out = {"valid": False, "error": str(exc)}
        if witness is not None:
            out["witness"] = list(witness) if isinstance(witness, tuple) \
                else witness
        return out, 1
    return {"valid": True, "dim": alg.dim}, 0


def _cmd_verify(args):
    name = args.suite
    if name in suites.SUITES:
        shapes = None
        if args.algebra or args.order:
            alg = algebra_from_json(_load_json(args.algebra)) \
                if args.algebra else None
            from .algebra import upper_triangular_algebra
            alg = alg if alg is not None else upper_triangular_algebra()
            order = args.order if args.order else 3
            shapes = ((alg, order),)
            report = suites.run_suite(name, shapes=shapes, per_shape=3)
        else:
            report = suites.run_suite(name)
    else:
        if not args.instance:
            raise CliError("property checks need --instance "
                           "(end-operad-1-3, end-operad-2-2, gl2-triangular)")
        try:
            report = suites.run_named_check(name, args.instance)
        except ValueError as exc:
            raise CliError(str(exc))
    return report


def build_parser():
    parser = argparse.ArgumentParser(
        prog="octrans",
        description="exact truncated operator calculus for operator-valued "
                    "multiplicative convolutions")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--order", type=int, default=None,
                       help="truncate inputs to this order")
        p.add_argument("--output", default=None, help="write result to file")
        p.add_argument("--format", choices=("json", "text"), default="json")

    for verb in ("cumulants", "moments", "t-transform", "h-transform"):
        p = sub.add_parser(verb)
        p.add_argument("dist", help="distribution JSON file")
        common(p)

    p = sub.add_parser("convolve")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind",
                   choices=("free", "cfree", "monotone", "cmonotone"))
    common(p)

    p = sub.add_parser("subordination")
    p.add_argument("a")
    p.add_argument("b")
    common(p)

    p = sub.add_parser("verify")
    p.add_argument("suite",
                   help="all, hopf, probability, fliess, or a property "
                        "(sts, matching, classical-sts, ybe)")
    p.add_argument("--instance", default=None)
    p.add_argument("--algebra", default=None,
                   help="algebra JSON file for parameterized suites")
    common(p)

    p = sub.add_parser("validate-algebra")
    p.add_argument("algebra_file")
    common(p)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = 0
        if args.verb == "cumulants":
            doc = _cmd_transforms(args, "K")
        elif args.verb == "moments":
            doc = _cmd_moments(args)
        elif args.verb == "t-transform":
            doc = _cmd_transforms(args, "T")
        elif args.verb == "h-transform":
            doc = _cmd_transforms(args, "H")
        elif args.verb == "convolve":
            doc = _cmd_convolve(args)
        elif args.verb == "subordination":
            doc = _cmd_subordination(args)
        elif args.verb == "validate-algebra":
            doc, code = _cmd_validate_algebra(args)
        elif args.verb == "verify":
            doc = _cmd_verify(args)
            if args.format == "text":
                _emit(_report_text(doc), args.output)
                return 0 if doc["passed"] else 2
            code = 0 if doc["passed"] else 2
        else:  # pragma: no cover - argparse guards this
            raise CliError("unknown verb %r" % args.verb)
        _emit(_render(doc, args.format), args.output)
        return code
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (AlgebraError, SeriesError, NCError, ProbError, HopfError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
