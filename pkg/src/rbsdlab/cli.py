"""Command-line front end: job dispatch and machine-readable reports.

Every job is fully determined by its serialized spec; reports echo the spec,
carry exact witnesses as "num/den" strings keyed by canonical group-element
labels, and always include the assumption ledger (Manin constant, Sha flags,
embedding choice, seeds).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .elliptic import CURVES, CurveQ, conductor, curve, minimal_model
from .theta import FieldSpec, InvalidFieldSpec, plus_field

COMMANDS = (
    "gauss",
    "theta",
    "distribution",
    "interpolate",
    "hypotheses",
    "rank0",
    "resolvent",
    "equivariance",
)


class ParseError(ValueError):
    pass


class InvalidCurve(ValueError):
    pass


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def serialize_group_ring(elem) -> dict:
    """Ordered coefficient map keyed by canonical sigma_a labels."""
    out = {}
    for g in elem.group.elements:
        c = elem.coefficient(g)
        if elem.modulus is None:
            out[elem.group.label(g)] = _frac_str(Fraction(c))
        else:
            out[elem.group.label(g)] = str(int(c))
    if elem.modulus is not None:
        out["__modulus__"] = str(elem.modulus)
    return out


def serialize_cyclo(elem) -> dict:
    return {
        "level": elem.level,
        "coeffs": [_frac_str(c) for c in elem.coeffs],
    }


def load_inputs(path: str):
    """Parse a line-delimited curve record file: {label?, ainvs:[5 ints]}."""
    recs = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                recs.append(json.loads(line))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed record in {path}: {exc}") from exc
    curves = []
    for rec in recs:
        if "ainvs" not in rec or len(rec["ainvs"]) != 5:
            raise ParseError(f"record {rec} lacks a five-entry 'ainvs'")
        try:
            c = CurveQ(tuple(int(a) for a in rec["ainvs"]), label=rec.get("label"))
        except ValueError as exc:
            raise InvalidCurve(str(exc)) from exc
        curves.append(minimal_model(c))
    if not curves:
        raise ParseError(f"no curve records in {path}")
    return curves


def _resolve_curve(spec: dict) -> CurveQ:
    src = spec.get("curve")
    if src is None:
        raise ParseError("no curve given")
    if isinstance(src, str) and os.path.exists(src):
        return load_inputs(src)[0]
    if isinstance(src, str) and src in CURVES:
        return curve(src)
    if isinstance(src, (list, tuple)):
        return minimal_model(CurveQ(tuple(int(a) for a in src)))
    raise ParseError(f"cannot resolve curve source {src!r}")


def _resolve_field(spec: dict) -> FieldSpec | None:
    c = spec.get("cond")
    if c is None:
        return None
    gens = spec.get("subgroup")
    if gens in (None, "", []):
        return plus_field(int(c))
    if isinstance(gens, str):
        gens = [int(x) for x in gens.split(",") if x.strip()]
    return FieldSpec(int(c), tuple(int(g) for g in gens))


def run_job(spec: dict) -> dict:
    """Dispatch a job spec to the underlying modules; returns the report."""
    t0 = time.time()
    command = spec.get("command")
    if command not in COMMANDS:
        raise ParseError(f"unknown command {command!r}")
    digits = int(spec.get("digits", 14))
    tol = float(spec.get("tol", 1e-8))
    prec = int(spec.get("prec", 12))
    seed = int(spec.get("seed", 1))
    embedding = int(spec.get("embedding", 0))
    report: dict = {
        "job": {k: v for k, v in sorted(spec.items())},
        "assumptions": {
            "manin_constant": "assumed 1",
            "sha": spec.get("sha_trivial", "no assertion"),
            "embedding_index": embedding,
            "seed": seed,
        },
        "verdicts": {},
        "witnesses": {},
    }
    verdicts = report["verdicts"]
    witnesses = report["witnesses"]

    if command == "gauss":
        from .characters import enumerate_chars, gauss_sum, tau_star

        c = int(spec["cond"])
        all_ok = True
        per_char = {}
        for i, chi in enumerate(enumerate_chars(c, even_only=True)):
            g = gauss_sum(chi, c)
            t = tau_star(chi, c)
            L = max(g.level, t.level)
            ok = g.embed(L) == t.embed(L)
            all_ok &= ok
            per_char[repr(chi)] = {"equal": ok, "tau_c": serialize_cyclo(g)}
        verdicts["imprimitive_gauss_identity"] = all_ok
        witnesses["per_character"] = per_char

    elif command == "theta":
        from .modsym import attach_symbols
        from .theta import restrict_to_field, theta_element

        cur = _resolve_curve(spec)
        field = _resolve_field(spec)
        c = field.conductor if field else int(spec.get("level", 1))
        f = attach_symbols(cur, digits)
        th = theta_element(f, c)
        witnesses["theta_plus_level"] = serialize_group_ring(th.carrier)
        if field is not None:
            thF = restrict_to_field(th, field)
            witnesses["theta_field"] = serialize_group_ring(thF.carrier)
            witnesses["field_labels"] = [thF.group.label(g) for g in thF.group.elements]
        verdicts["computed"] = True
        witnesses["symbol_denominator"] = str(
            max(Fraction(x).denominator for x in th.carrier.vector()) if th.carrier.vector() else 1
        )

    elif command == "distribution":
        from .modsym import attach_symbols
        from .theta import distribution_check

        cur = _resolve_curve(spec)
        f = attach_symbols(cur, digits)
        c = int(spec.get("level", 1))
        p = int(spec["p"])
        res = distribution_check(f, c, p)
        verdicts["distribution_exact"] = res["passed"]
        witnesses["lhs"] = serialize_group_ring(res["lhs"])
        witnesses["rhs"] = serialize_group_ring(res["rhs"])
        if not res["passed"]:
            witnesses["difference"] = serialize_group_ring(res["difference"])

    elif command == "interpolate":
        from .characters import enumerate_chars
        from .modsym import attach_symbols
        from .theta import interpolation_residual

        cur = _resolve_curve(spec)
        c = int(spec["cond"])
        f = attach_symbols(cur, digits)
        worst = 0.0
        per = {}
        for chi in enumerate_chars(c, even_only=True):
            res, lhs, rhs = interpolation_residual(f, chi, c, digits)
            per[repr(chi)] = float(res)
            worst = max(worst, float(res))
        verdicts["interpolation_within_tol"] = worst < tol
        verdicts["worst_residual"] = worst
        witnesses["per_character_residual"] = per

    elif command == "hypotheses":
        from .theta import hypotheses_report

        cur = _resolve_curve(spec)
        field = _resolve_field(spec)
        p = int(spec["p"])
        rep = hypotheses_report(cur, field, p)
        verdicts.update({k: v for k, v in rep.items() if k != "all_decidable_verified"})
        verdicts["all_decidable_verified"] = rep["all_decidable_verified"]

    elif command == "rank0":
        from .theta import rank0_verdict

        cur = _resolve_curve(spec)
        field = _resolve_field(spec)
        p = int(spec["p"])
        sha = spec.get("sha_trivial")
        res = rank0_verdict(cur, field, p, prec, sha_trivial=sha, digits=digits)
        verdicts["integral"] = res["integral"]
        verdicts["unit"] = res["unit"]
        verdicts["verdict"] = res["verdict"]
        witnesses["theta_field"] = serialize_group_ring(res["theta"].carrier)
        report["assumptions"]["sha"] = res["sha_trivial_asserted"]

    elif command == "resolvent":
        from .modsym import attach_symbols
        from .padic import first_prediction_sum, random_semilocal_point, semilocal_structure
        from math import lcm as _lcm

        cur = _resolve_curve(spec)
        field = _resolve_field(spec)
        p = int(spec["p"])
        f = attach_symbols(cur, digits)
        master = _lcm(field.conductor, field.group.exponent)
        struct = semilocal_structure(field, p, prec, extra_orders=(master,))
        x = random_semilocal_point(struct, seed)
        res = first_prediction_sum(
            cur, field, p, x, prec, functional=f, embedding_index=embedding
        )
        verdicts["integral"] = res["integral"]
        verdicts["surviving_precision"] = res["surviving_precision"]
        verdicts["congruences_mod_G"] = res["congruences_mod_G"]
        if res["element"] is not None:
            witnesses["element"] = serialize_group_ring(res["element"])
        report["assumptions"]["ring_degree"] = struct.ring.degree

    elif command == "equivariance":
        from .characters import enumerate_chars
        from .lvalues import galois_equivariance_check

        cur = _resolve_curve(spec)
        c = int(spec["cond"])
        order = spec.get("order")
        orbit = None
        for chi in enumerate_chars(c, even_only=True):
            if chi.is_trivial():
                continue
            if order and chi.order != int(order):
                continue
            orbit = chi.galois_orbit()
            break
        if orbit is None:
            raise ParseError("no suitable character orbit at this conductor")
        res = galois_equivariance_check(cur, orbit, digits, tol)
        verdicts["equivariance"] = res["passed"]
        verdicts["max_deviation"] = res["max_deviation"]
        witnesses["recognized"] = serialize_cyclo(res["recognized"])

    report["timings"] = {"seconds": round(time.time() - t0, 3)}
    return report


def write_report(report: dict, path: str | None):
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="rbsdlab",
        description="Exact congruence laboratory for rational elliptic curves over real abelian fields",
    )
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--curve", help="path to a line-delimited curve record file (or catalog label)")
    ap.add_argument("--cond", type=int, help="field/theta conductor c")
    ap.add_argument("--level", type=int, help="theta level for theta/distribution jobs")
    ap.add_argument("--subgroup", help="comma-separated generators of H <= (Z/c)^x")
    ap.add_argument("--p", type=int, help="the odd prime p")
    ap.add_argument("--prec", type=int, default=12, help="p-adic working precision k")
    ap.add_argument("--digits", type=int, default=14, help="floating working digits")
    ap.add_argument("--tol", type=float, default=1e-8, help="numerical tolerance")
    ap.add_argument("--seed", type=int, default=1, help="seed for semi-local point generation")
    ap.add_argument("--embedding", type=int, default=0, help="cyclotomic embedding index")
    ap.add_argument("--order", type=int, help="character order filter (equivariance)")
    ap.add_argument("--sha-trivial", action="store_true", dest="sha_trivial")
    ap.add_argument("--fixtures", help="fixture directory (else RBSD_FIXTURES, else repo default)")
    ap.add_argument("--report", help="write the JSON report here (else stdout)")
    args = ap.parse_args(argv)
    spec = {k: v for k, v in vars(args).items() if v is not None and k != "report"}
    if not args.sha_trivial:
        spec.pop("sha_trivial", None)
    try:
        report = run_job(spec)
    except (ParseError, InvalidCurve, InvalidFieldSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    write_report(report, args.report)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
