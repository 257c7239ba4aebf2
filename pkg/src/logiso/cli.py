"""Command-line interface: decisions and constructions as JSON on stdout.

Exit codes: 0 for a Yes decision or a finished computation, 1 for a No
decision (the verdict is still printed), 2 for malformed input or an
undecidable request.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .errors import LogIsoError, SchemaError
from .isomap import (
    ComponentMap,
    StarIso,
    build_iso,
    pairing_from_json,
    pairing_to_json,
    verify_prop2,
    verify_transport,
)
from .logspace import (
    Divergent,
    LogNormResult,
    build_counterexample,
    equality_check,
    inclusion_check,
    log_fnorm,
)
from .measure import RNBounded, RNDerivative, normalize, rn_derivative
from .numeric import jsonable
from .passport import extract_passport, log_iso_decision, measure_iso_decision
from .schema import (
    function_from_json,
    function_to_json,
    passport_from_json,
    passport_to_json,
    space_from_json,
    space_to_json,
)

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2
DEFAULT_BOUND = 10**6
PREVIEW = 20  # terms of an infinite sequence shown in reports


# ---------------------------------------------------------------------------
# encoding helpers


def _num(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return jsonable(x)


def _cell(cell):
    return None if cell is None else [cell[0], cell[1]]


def _certificate(d: RNDerivative, bound) -> dict:
    cert = d.certificate
    if isinstance(cert, RNBounded):
        return {"bounded": True, "sup": _num(cert.sup), "cell": _cell(cert.cell)}
    cell, w = cert.witness(bound)
    return {
        "bounded": False,
        "part": cert.part,
        "witness": {"bound": _num(w.bound), "index": w.index, "cell": _cell(cell), "ratio": _num(w.ratio)},
    }


def _ratios(d: RNDerivative) -> dict:
    out = {}
    if d.atom_ratios.length != 0:
        count = d.atom_ratios.length or PREVIEW
        out["atoms"] = [_num(d.atom_ratios.value(n)) for n in range(1, count + 1)]
    if d.component_ratios.length != 0:
        count = d.component_ratios.length or PREVIEW
        out["components"] = {
            d.mu.component_id_at(n): _num(d.component_ratios.value(n)) for n in range(1, count + 1)
        }
    return out


def _norm(result: LogNormResult) -> dict:
    out = {"value": _num(result.value), "partial_sums": list(result.partial_sums), "finite": result.finite}
    if isinstance(result.tail_bound, Divergent):
        out["tail_bound"] = {"divergent": result.tail_bound.note, "lower_bounds": result.tail_bound.lower_bounds(PREVIEW)}
    else:
        out["tail_bound"] = _num(result.tail_bound)
    return out


def _iso_verdict(v, bound) -> dict:
    if v.decision:
        return {"decision": "yes", "sup_ratios": [_num(s) for s in v.sups]}
    out = {"decision": "no", "reason": v.reason}
    if v.reason == "RatioUnbounded":
        w = v.detail.witness(bound)
        out.update(
            part=v.detail.part,
            direction=v.detail.direction,
            witness={"bound": _num(w.bound), "index": w.index, "ratio": _num(w.ratio)},
        )
    else:
        out.update(v.detail)
    return out


def _counterexample(mu, nu, K: int) -> dict:
    ce = build_counterexample(mu, nu, K)
    return {
        "K": K,
        "cells": [_cell(c) for c in ce.cells],
        "f": function_to_json(ce.f),
        "mu_partials": ce.mu_partials,
        "nu_lower_bounds": ce.nu_lower_bounds,
    }


# ---------------------------------------------------------------------------
# input


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        err = SchemaError(f"cannot read file: {exc.strerror}")
    except json.JSONDecodeError as exc:
        err = SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}")
    err.file = path
    raise err


def _parse(path: str, decode, args):
    obj = _load(path)
    try:
        return decode(obj, "$", rational=args.rational)
    except SchemaError as exc:
        exc.file = path
        raise


def _space(path: str, args):
    return _parse(path, space_from_json, args)


def _function(path: str, args):
    return _parse(path, function_from_json, args)


def _passport_or_space(obj, where, *, rational):
    if isinstance(obj, dict) and "rows" in obj:
        return passport_from_json(obj, where, rational=rational)
    return extract_passport(space_from_json(obj, where, rational=rational))


def _passport(path: str, args):
    return _parse(path, _passport_or_space, args)


def _pairing(args):
    if args.pairing is None:
        return ComponentMap(None)
    return _parse(args.pairing, lambda obj, where, rational: pairing_from_json(obj, where), args)


# ---------------------------------------------------------------------------
# subcommands (each returns (exit code, payload))


def cmd_norm(args):
    space, f = _space(args.space, args), _function(args.function, args)
    result = log_fnorm(f, space, base=args.base, terms=args.terms)
    return EXIT_YES, {"schema": "logiso.norm/1", "base": args.base or "e", **_norm(result)}


def cmd_member(args):
    space, f = _space(args.space, args), _function(args.function, args)
    result = log_fnorm(f, space, terms=args.terms)
    payload = {"schema": "logiso.member/1", "member": result.finite, "norm": _norm(result)}
    return (EXIT_YES if result.finite else EXIT_NO), payload


def cmd_rn(args):
    d = rn_derivative(_space(args.mu, args), _space(args.nu, args))
    return EXIT_YES, {"schema": "logiso.rn/1", "ratios": _ratios(d), "certificate": _certificate(d, args.bound)}


def cmd_include(args):
    mu, nu = _space(args.mu, args), _space(args.nu, args)
    v = inclusion_check(mu, nu)
    payload = {"schema": "logiso.include/1", "included": v.included, "certificate": _certificate(v.derivative, args.bound)}
    if not v.included:
        payload["counterexample"] = _counterexample(mu, nu, args.K)
    return (EXIT_YES if v.included else EXIT_NO), payload


def cmd_equal(args):
    mu, nu = _space(args.mu, args), _space(args.nu, args)
    v = equality_check(mu, nu)
    payload = {
        "schema": "logiso.equal/1",
        "equal": v.equal,
        "direction": v.direction,
        "dnu_dmu": _certificate(v.forward.derivative, args.bound),
        "dmu_dnu": _certificate(v.backward.derivative, args.bound),
    }
    return (EXIT_YES if v.equal else EXIT_NO), payload


def cmd_passport(args):
    return EXIT_YES, passport_to_json(extract_passport(_space(args.space, args)))


def cmd_decide_iso(args):
    p1, p2 = _passport(args.p1, args), _passport(args.p2, args)
    decide = measure_iso_decision if args.measure else log_iso_decision
    v = decide(p1, p2)
    payload = {"schema": "logiso.iso/1", "test": "measure" if args.measure else "log", **_iso_verdict(v, args.bound)}
    return (EXIT_YES if v.decision else EXIT_NO), payload


def cmd_build_iso(args):
    mu, nu = _space(args.mu, args), _space(args.nu, args)
    v = log_iso_decision(extract_passport(mu), extract_passport(nu))
    if not v.decision:
        return EXIT_NO, {"schema": "logiso.build/1", **_iso_verdict(v, args.bound)}
    built = build_iso(mu, nu)
    g = built.gamma
    payload = {
        "schema": "logiso.build/1",
        "decision": "yes",
        "sup_ratios": [_num(s) for s in v.sups],
        "pairing": pairing_to_json(built.pairing),
        "gamma": space_to_json(g.space),
        "gamma_total": _num(g.total),
        "dgamma_dnu": _certificate(g.dgamma_dnu, args.bound),
        "dnu_dgamma": _certificate(g.dnu_dgamma, args.bound),
        "nu_gamma_equal": equality_check(g.nu, g.space).equal,
    }
    return EXIT_YES, payload


def cmd_counterexample(args):
    mu, nu = _space(args.mu, args), _space(args.nu, args)
    payload = {"schema": "logiso.counterexample/1", **_counterexample(mu, nu, args.K)}
    return EXIT_YES, payload


def _iso_for(args):
    mu = normalize(_space(args.mu, args))
    nu = normalize(_space(args.nu, args))
    return mu, StarIso(mu, nu, _pairing(args))


def cmd_verify_prop2(args):
    _, iso = _iso_for(args)
    r = verify_prop2(iso, _function(args.function, args))
    payload = {
        "schema": "logiso.prop2/1",
        "ok": r.ok,
        "discrepancy": r.discrepancy,
        "lhs": function_to_json(r.lhs),
        "rhs": function_to_json(r.rhs),
    }
    return (EXIT_YES if r.ok else EXIT_NO), payload


def cmd_verify_transport(args):
    mu, iso = _iso_for(args)
    r = verify_transport(iso, _function(args.function, args), mu, iso.pushforward)
    payload = {
        "schema": "logiso.transport/1",
        "ok": r.ok,
        "tolerance": r.tolerance,
        "pairing": pairing_to_json(iso.pairing),
        "target_measure": space_to_json(iso.pushforward),
        "integral_source": _num(r.integral_source),
        "integral_target": _num(r.integral_target),
        "integral_discrepancy": r.integral_discrepancy,
        "norm_source": r.norm_source,
        "norm_target": r.norm_target,
        "norm_discrepancy": r.norm_discrepancy,
    }
    return (EXIT_YES if r.ok else EXIT_NO), payload


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_number(text: str):
    try:
        value = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _base(text: str) -> float:
    value = float(text)
    if not value > 0 or value == 1 or not math.isfinite(value):
        raise argparse.ArgumentTypeError("log base must be positive and different from 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logiso", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rational", action="store_true", help="read every number as an exact rational")
    common.add_argument(
        "--bound", type=_positive_number, default=Fraction(DEFAULT_BOUND),
        help="bound M at which unboundedness witnesses are reported (default 10^6)",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, *positionals):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for pos in positionals:
            p.add_argument(pos)
        p.set_defaults(func=func)
        return p

    p = add("norm", cmd_norm, "log F-norm of a simple function", "space", "function")
    p.add_argument("--base", type=_base, default=None, help="logarithm base (default e)")
    p.add_argument("--terms", type=_positive_int, default=1000, help="partial sums for infinite support")
    p = add("member", cmd_member, "is the function log-integrable", "space", "function")
    p.add_argument("--terms", type=_positive_int, default=1000)
    add("rn", cmd_rn, "Radon-Nikodym derivative d(nu)/d(mu) with certificate", "mu", "nu")
    p = add("include", cmd_include, "is L_log(mu) contained in L_log(nu)", "mu", "nu")
    p.add_argument("--K", type=_positive_int, default=10, help="counterexample truncation depth")
    add("equal", cmd_equal, "is L_log(mu) equal to L_log(nu)", "mu", "nu")
    add("passport", cmd_passport, "passport of a finite-mass space", "space")
    p = add("decide-iso", cmd_decide_iso, "are the L_log algebras *-isomorphic", "p1", "p2")
    p.add_argument("--measure", action="store_true", help="decide measure-preserving isomorphism instead")
    add("build-iso", cmd_build_iso, "construct the pairing and the gluing measure", "mu", "nu")
    p = add("counterexample", cmd_counterexample, "function in L_log(mu) outside L_log(nu)", "mu", "nu")
    p.add_argument("--K", type=_positive_int, default=10, help="number of cells")
    for name, func, text in (
        ("verify-prop2", cmd_verify_prop2, "check Phi(log(1+|f|)) = log(1+Phi(|f|))"),
        ("verify-transport", cmd_verify_transport, "check integrals and norms are carried by Phi"),
    ):
        p = add(name, func, text, "mu", "nu", "function")
        p.add_argument("--pairing", default=None, help="pairing JSON (default: index-aligned rows)")
    return parser


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, payload = args.func(args)
    except SchemaError as exc:
        code, payload = EXIT_ERROR, {"error": exc.kind, "path": exc.path, "message": exc.reason}
        if getattr(exc, "file", None):
            payload["file"] = exc.file
    except LogIsoError as exc:
        code, payload = EXIT_ERROR, {"error": exc.kind, "message": str(exc)}
    except (ValueError, TypeError, IndexError) as exc:
        code, payload = EXIT_ERROR, {"error": "InvalidInput", "message": str(exc)}
    _emit(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
