"""Acceptance criteria, one test per criterion, each printing a pass/fail
line with its runtime.  Tolerances are pinned here exactly as stated; when a
criterion is exact the assertion is exact equality.

The module also writes reports/acceptance_summary.json with the primary's
own values for every fixture kind, which the oracle harness diffs.
"""

import json
import time
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

import mpmath as mp
import pytest

from rbsdlab import elliptic as ell
from rbsdlab import fixtures as fx
from rbsdlab import grouprings as gr
from rbsdlab import lvalues as lv
from rbsdlab import modsym as ms
from rbsdlab import padic as pa
from rbsdlab import theta as th
from rbsdlab._linalg import mat_mul, mat_vec, transpose
from rbsdlab.characters import enumerate_chars, gauss_sum, tau_star
from rbsdlab.numth import is_squarefree, prime_divisors, primes_up_to

FIXDIR = Path(__file__).resolve().parents[1] / "fixtures"
REPORTS = Path(__file__).resolve().parents[1] / "reports"
REPORTS.mkdir(exist_ok=True)

SUMMARY: dict = {}


def _stamp(name, t0, budget, ok, detail=""):
    dt = time.time() - t0
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({dt:.1f}s, budget {budget}s)"
    print(line)
    assert ok, line
    assert dt < budget, f"{name} exceeded its runtime budget: {dt:.1f}s > {budget}s"


# rank-1 curves with verified congruences: (curve, p = 3, cubic field in Q(zeta_l))
RANK1_CUBIC_LIST = {
    "37a1": (13, 19),
    "43a1": (7, 13, 37),
    "53a1": (13, 19, 31, 43),
    "58a1": (7, 13, 19, 31, 43),
    "61a1": (7, 13, 43),
    "65a1": (19, 37, 43),
    "65a2": (19, 37, 43),
    "77a1": (19, 37),
}

ACCEPTANCE_LEVELS = (11, 14, 15, 37, 43, 53, 58, 61, 65, 77)
LEVEL_CURVE = {
    11: "11a1", 14: "14a1", 15: "15a1", 37: "37a1", 43: "43a1",
    53: "53a1", 58: "58a1", 61: "61a1", 65: "65a1", 77: "77a1",
}


def _cubic_field(l: int) -> th.FieldSpec:
    """The degree-3 field inside Q(zeta_l) (l = 1 mod 3): H = cubes."""
    from rbsdlab.numth import primitive_root

    g = primitive_root(l)
    return th.FieldSpec(l, (pow(g, 3, l),))


def test_c01_gauss_sum_identity():
    t0 = time.time()
    count = 0
    for c in range(1, 61):
        if not is_squarefree(c):
            continue
        for chi in enumerate_chars(c, even_only=True):
            g = gauss_sum(chi, c)
            t = tau_star(chi, c)
            L = max(g.level, t.level)
            assert g.embed(L) == t.embed(L), (c, chi)
            count += 1
    _stamp("criterion 1 (tau_c = tau* for even chi, squarefree c <= 60)", t0, 30, True,
           f"{count} characters, exact equality")


def test_c02_tau_taubar():
    t0 = time.time()
    count = 0
    for mod in range(1, 25):
        for chi in enumerate_chars(mod):
            if chi.conductor != mod:
                continue
            t1, t2 = gauss_sum(chi, mod), gauss_sum(chi.conjugate(), mod)
            L = max(t1.level, t2.level)
            sign = chi(-1) if mod > 1 else None
            rhs = (sign.embed(L) if sign else None)
            expect = (rhs * mod) if rhs is not None else t1.embed(L) * 0 + mod
            assert t1.embed(L) * t2.embed(L) == expect, (mod, chi)
            count += 1
    _stamp("criterion 2 (tau(chi) tau(chibar) = chi(-1) c_chi, modulus <= 24)", t0, 5, True,
           f"{count} primitive characters, exact")


def test_c03_manin_space_sanity():
    t0 = time.time()
    doc = fx.load("dimension", str(FIXDIR))
    dims_ok = True
    summary_dims = {}
    for N in ACCEPTANCE_LEVELS:
        sp = ms.build_space(N)
        summary_dims[str(N)] = sp.cuspidal_dim
        dims_ok &= sp.cuspidal_dim == doc["data"][str(N)]
    SUMMARY["dimension"] = summary_dims
    # Hecke commutativity (exact) on each space, via the two smallest good primes
    comm_ok = True
    for N in ACCEPTANCE_LEVELS:
        sp = ms.build_space(N)
        good = [p for p in primes_up_to(20) if N % p][:2]
        Ta, Tb = sp.hecke_matrix(good[0]), sp.hecke_matrix(good[1])
        comm_ok &= mat_mul(Ta, Tb) == mat_mul(Tb, Ta)
    # eigenvalues match enumerated a_l for every good l <= 50
    eig_ok = True
    for N, lab in LEVEL_CURVE.items():
        cur = ell.curve(lab)
        sp = ms.build_space(N)
        f = ms.eigen_functional(sp, cur)
        w = list(f.dual_vector)
        for p in primes_up_to(50):
            if N % p == 0:
                continue
            tw = mat_vec(transpose(sp.hecke_matrix(p)), w)
            ap = ell.ap_count(cur, p)
            eig_ok &= tw == [ap * x for x in w]
    _stamp("criterion 3 (plus cuspidal dims, Hecke commute, eigenvalues = a_l)", t0, 600,
           dims_ok and comm_ok and eig_ok,
           f"dims {dims_ok}, commute {comm_ok}, eigenvalues {eig_ok}")


def test_c04_normalization_anchor(f11):
    t0 = time.time()
    per = ell.real_period(ell.curve("11a1"), 25)
    data = lv.an_coeffs(ell.curve("11a1"), lv.truncation_bound(11, 1, 16))
    L = lv.lseries_value(data, 16)
    numeric = L.value / per.omega_plus
    exact = f11.eval_symbol(0, 1)
    agree = abs(numeric - mp.mpf(exact.numerator) / exact.denominator) < 1e-8
    _stamp("criterion 4 (11a1 anchor [0]+ = 1/5)", t0, 60,
           exact == Fraction(1, 5) and agree,
           f"[0]+ = {exact}, |numeric - exact| = {float(abs(numeric - 0.2)):.2e}")


def test_c05_distribution_relation(functional_for):
    t0 = time.time()
    checked = 0
    for lab in ("11a1", "37a1"):
        f = functional_for(lab)
        N = f.level
        for m in range(2, 201):
            if not is_squarefree(m) or gcd(m, N) != 1:
                continue
            for p in prime_divisors(m):
                c = m // p
                res = th.distribution_check(f, c, p)
                assert res["passed"], (lab, c, p)
                checked += 1
    _stamp("criterion 5 (distribution relation, pc <= 200)", t0, 900, True,
           f"{checked} (curve, c, p) triples, exact coefficient-wise")


def test_c06_interpolation(functional_for):
    t0 = time.time()
    worst = 0.0
    count = 0
    for lab in ("11a1", "37a1", "43a1"):
        f = functional_for(lab)
        N = f.level
        for c in range(1, 31):
            if not is_squarefree(c) or gcd(c, N) != 1:
                continue
            for chi in enumerate_chars(c, even_only=True):
                res, _, _ = th.interpolation_residual(f, chi, c, digits=14)
                worst = max(worst, float(res))
                count += 1
    _stamp("criterion 6 (interpolation, even chi of conductor <= 30)", t0, 1200,
           worst < 1e-8, f"{count} components, worst residual {worst:.2e}")


def test_c07_rank1_cubic_integrality(functional_for):
    t0 = time.time()
    all_ok = True
    details = []
    for lab, ells in RANK1_CUBIC_LIST.items():
        cur = ell.curve(lab)
        f = functional_for(lab)
        for l in ells:
            F = _cubic_field(l)
            rep = th.hypotheses_report(cur, F, 3)
            hyp_ok = rep["all_decidable_verified"]
            tF = th.restrict_to_field(th.theta_element(f, l), F)
            ver = gr.padic_integrality_and_unit(tF.carrier, 3)
            integral = ver["integral"]
            aug = tF.augmentation()
            aug_small = abs(float(aug)) < 1e-8
            in_I3 = integral and gr.aug_ideal_membership(tF.carrier.reduce_mod(3, 8), 1)
            ok = hyp_ok and integral and aug_small and in_I3
            all_ok &= ok
            details.append(f"{lab},l={l}:{'ok' if ok else 'FAIL'}")
    _stamp("criterion 7 (rank-1 list: hypotheses + 3-integrality + I_3(G))", t0, 1800,
           all_ok, "; ".join(details))


def test_c08_rank0_unit_criterion(f11):
    t0 = time.time()
    # search instance per the corollary: rank-0 curve 11a1, p = 3,
    # l = 7 = 1 mod 3 with a_7 = -2 (not 2 mod 3), Sha(11a1) trivial (fixture)
    flags = fx.load("flags", str(FIXDIR))
    assert flags["data"]["sha_analytic"]["11a1"] == 1
    F = th.FieldSpec(7, (6,))
    rep = th.hypotheses_report(ell.curve("11a1"), F, 3)
    v1 = th.rank0_verdict(ell.curve("11a1"), F, 3, sha_trivial=True, functional=f11)
    # independent recomputation: fresh space, fresh eigenline, fresh anchor
    sp = ms.build_space.__wrapped__(11)
    f_fresh = ms.normalize_functional(ms.eigen_functional(sp, ell.curve("11a1")), ell.curve("11a1"))
    v2 = th.rank0_verdict(ell.curve("11a1"), F, 3, sha_trivial=True, functional=f_fresh)
    stable = (v1["verdict"] == v2["verdict"]) and (
        v1["theta"].carrier.coeffs == v2["theta"].carrier.coeffs
    )
    ok = rep["all_decidable_verified"] and v1["unit"] and v1["verdict"] == "consistent" and stable
    _stamp("criterion 8 (rank-0 unit criterion, 11a1/p=3/cubic in Q(zeta_7))", t0, 600,
           ok, f"verdict {v1['verdict']}, stable under recomputation: {stable}")


def test_c09_unit_sum_element():
    t0 = time.time()
    import random

    rng = random.Random(2718)
    configs = []
    # admissible (c, H-family, p, i): plus-fields and cubic subfields
    pool = [
        (5, (4,), 3), (5, (4,), 7), (7, (6,), 5), (7, (2,), 3),  # <2> cubes+...
        (13, (8,), 7), (13, (12,), 5), (15, (14,), 7), (21, (20,), 5),
        (35, (34,), 3), (33, (32,), 7), (7, (6,), 11), (13, (8,), 11),
    ]
    rng.shuffle(pool)
    done = 0
    for c, gens, p in pool:
        if done >= 10:
            break
        i = rng.choice((1, 2))
        try:
            F = th.FieldSpec(c, gens)
        except th.InvalidFieldSpec:
            continue
        A = F.group
        chars = gr.group_characters(A)
        dirich = F.characters()
        pairs = []
        for ch in chars:
            match = next(
                dc
                for dc in dirich
                if all(
                    (dc.value_exponent(g)[0] * (ch.order // dc.order)) % ch.order
                    == ch.value_exponent(g)[0]
                    for g in A.elements
                )
            )
            pairs.append((ch, match.conductor))
        from rbsdlab.numth import divisors

        # H_d = classes of units congruent to 1 mod d (the Galois groups
        # Gal(F/F cap Q(zeta_d)))
        fam = {}
        for d in divisors(c):
            members = set()
            for u in range(1, max(c, 2)):
                if gcd(u, c) != 1:
                    continue
                if u % d == 1 % max(d, 1):
                    members.add(A.class_of_unit(u))
            fam[d] = frozenset(members)
        res = None
        for try_i in (i, 3 - i):  # fall back to the other exponent if (ii) fails
            try:
                res = gr.unit_sum_element(c, pairs, p, try_i, A, fam)
                i = try_i
                break
            except gr.HypothesisViolated:
                continue
        if res is None:
            continue
        # cross-check: the chi-component of the element equals ((c_chi/c) n_chi)^i
        from rbsdlab.arith import CycloElem

        for ch, cchi in pairs:
            n_chi = p if (c % p == 0 and cchi % p != 0) else 1
            expect = Fraction(cchi * n_chi, c) ** i
            acc = CycloElem.zero(A.exponent)
            for g in A.elements:
                r, m = ch.value_exponent(g)
                acc = acc + CycloElem.zeta(A.exponent, r * (A.exponent // m)) * res["element"].coefficient(g)
            assert acc.is_rational() and acc.rational_part() == expect, (c, p, i)
        assert res["integral"] and res["unit"], (c, gens, p, i)
        done += 1
    _stamp("criterion 9 (unit-sum element, randomized admissible configs)", t0, 60,
           done >= 10, f"{done} configurations, unit verified, components cross-checked")


def test_c10_padic_pipeline(f11):
    t0 = time.time()
    cur = ell.curve("11a1")
    # formal-log homomorphism to O(t^20)
    T = 20
    F_law = pa.formal_group_law(cur, T)
    lg = pa.formal_group_log(cur, T + 2)

    def bmul(A, B):
        out = {}
        for (i, j), x in A.items():
            for (k, l), y in B.items():
                if i + k + j + l < T:
                    out[(i + k, j + l)] = out.get((i + k, j + l), Fraction(0)) + x * y
        return out

    comp = {}
    power = {(0, 0): Fraction(1)}
    for n in range(1, T):
        power = bmul(power, F_law)
        c = lg.coefficient(n)
        if c:
            for k, v in power.items():
                comp[k] = comp.get(k, Fraction(0)) + c * v
    for n in range(1, T):
        c = lg.coefficient(n)
        comp[(n, 0)] = comp.get((n, 0), Fraction(0)) - c
        comp[(0, n)] = comp.get((0, n), Fraction(0)) - c
    hom_ok = all(v == 0 for v in comp.values())

    # LR additivity / [l]-linearity at precision >= 10, plus prediction
    # stability under k -> k+5 and the G-action, at p = 5
    F = th.FieldSpec(7, (6,))
    struct = pa.semilocal_structure(F, 5, 15, extra_orders=(21,))
    x = pa.random_semilocal_point(struct, seed=42)
    lg40 = pa.formal_group_log(cur, 40)
    zm = pa.embed_cyclotomic(struct.ring, 21)
    ze = zm ** 7
    chi = [c for c in F.characters() if not c.is_trivial()][0]
    law = pa.formal_group_law(cur, 30)

    def oplus(a, b):
        ringv = a.ring
        mx = max(i + j for (i, j) in law) + 1
        ap_, bp_ = [ringv.one()], [ringv.one()]
        for _ in range(mx):
            ap_.append(ap_[-1] * a)
            bp_.append(bp_[-1] * b)
        acc = ringv.zero()
        for (i, j), cc in law.items():
            if cc:
                acc = acc + ap_[i] * bp_[j] * ringv.from_rational(cc)
        return acc

    y = pa.random_semilocal_point(struct, seed=99)
    lr_x = pa.log_resolvent(struct, lg40, x, chi, ze)
    lr_y = pa.log_resolvent(struct, lg40, y, chi, ze)
    xy = tuple(oplus(a, b) for a, b in zip(x, y))
    d_add = pa.log_resolvent(struct, lg40, xy, chi, ze) - (lr_x + lr_y)
    add_ok = d_add.valuation() >= 10
    x2 = tuple(oplus(a, a) for a in x)
    x3 = tuple(oplus(a, b) for a, b in zip(x2, x))
    d_lin = pa.log_resolvent(struct, lg40, x3, chi, ze) - (lr_x + lr_x + lr_x)
    lin_ok = d_lin.valuation() >= 10

    res15 = pa.first_prediction_sum(cur, F, 5, x, 15, functional=f11)
    struct20 = pa.semilocal_structure(F, 5, 20, extra_orders=(21,))
    x20 = pa.random_semilocal_point(struct20, seed=42)
    res20 = pa.first_prediction_sum(cur, F, 5, x20, 20, functional=f11)
    k = res15["surviving_precision"]
    stable = res15["integral"] == res20["integral"] and all(
        int(res15["element"].coefficient(g)) % 5**k == int(res20["element"].coefficient(g)) % 5**k
        for g in res15["element"].group.elements
    )
    G = F.group
    h = [g for g in G.elements if g != G.identity][0]
    resh = pa.first_prediction_sum(cur, F, 5, pa.act_on_point(struct, h, x), 15, functional=f11)
    kk = min(res15["surviving_precision"], resh["surviving_precision"])
    equi = all(
        int(resh["element"].coefficient(g)) % 5**kk
        == int(res15["element"].coefficient(G.mult(g, G.inverse(h)))) % 5**kk
        for g in G.elements
    )
    ok = hom_ok and add_ok and lin_ok and res15["integral"] and stable and equi
    _stamp("criterion 10 (p-adic pipeline properties at p = 5)", t0, 600, ok,
           f"log-hom {hom_ok}, LR-add {add_ok}, [3]-lin {lin_ok}, "
           f"integral {res15['integral']}, k->k+5 stable {stable}, equivariant {equi}")


def test_write_acceptance_summary(functional_for):
    """Emit the consolidated report the oracle harness diffs (not itself a
    numbered criterion; supports the secondary acceptance check)."""
    t0 = time.time()
    summary = dict(SUMMARY)
    ap_block = {}
    red_block = {}
    tor_block = {}
    per_block = {}
    lv_block = {}
    doc = fx.load("ap_table", str(FIXDIR))
    for lab in doc["data"]:
        cur = ell.curve(lab)
        N = ell.conductor(cur)
        ap_block[lab] = {
            str(p): ell.ap_count(cur, p) for p in primes_up_to(100) if N % p
        }
        red_block[lab] = {}
        for p in prime_divisors(abs(cur.discriminant)):
            r = ell.tate_local(cur, p)
            red_block[lab][str(p)] = {
                "kodaira": r.kodaira,
                "tamagawa": r.tamagawa,
                "kind": r.reduction_kind,
                "ap": r.ap,
                "conductor_exponent": r.conductor_exponent,
            }
        tor_block[lab] = ell.torsion_order(cur)
        per = ell.real_period(cur, 30)
        with mp.workdps(40):
            per_block[lab] = {
                "omega_plus": mp.nstr(per.omega_plus, 30, strip_zeros=False),
                "omega_minus": mp.nstr(per.omega_minus, 30, strip_zeros=False),
                "c_infty": per.c_infty,
            }
        data = lv.an_coeffs(cur, lv.truncation_bound(N, 1, 27))
        L = lv.lseries_value(data, 27)
        with mp.workdps(35):
            lv_block[lab] = {
                "L1": mp.nstr(L.value.real if hasattr(L.value, "real") else L.value, 25, strip_zeros=False),
                "root_number": lv.root_number(cur),
            }
    if "dimension" not in summary:
        summary["dimension"] = {
            str(N): ms.build_space(N).cuspidal_dim for N in ACCEPTANCE_LEVELS
        }
    summary.update(
        {
            "ap_table": ap_block,
            "reduction": red_block,
            "torsion": tor_block,
            "period": per_block,
            "lvalue": lv_block,
        }
    )
    out = REPORTS / "acceptance_summary.json"
    with open(out, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"[INFO] acceptance summary written to {out} ({time.time()-t0:.1f}s)")
