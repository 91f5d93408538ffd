"""Regularized theta elements of a rational elliptic curve, their field
restrictions, character components, distribution relations and the rank-zero
verification criteria.

All theta data is exact: coefficients are rationals produced by the
normalized modular-symbol functional; character components are exact
cyclotomic numbers.  Only the comparison against L-values (interpolation)
touches floating point, through the lvalues module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath as mp

from .arith import CycloElem
from .characters import DirichletChar, enumerate_chars, gauss_sum, lift_char
from .elliptic import CurveQ, ap_count, conductor, count_points_ext, real_period, tate_local, torsion_order
from .grouprings import AbGroup, GroupRingElem, padic_integrality_and_unit, project_quotient
from .modsym import ModularSymbolFunctional
from .numth import divisors, is_prime, is_squarefree, moebius, prime_divisors


class NotSquarefreeLevel(ValueError):
    pass


class NotCoprimeToLevel(ValueError):
    pass


class ConductorMismatch(ValueError):
    pass


class CharacterDoesNotFactor(ValueError):
    pass


class InvalidFieldSpec(ValueError):
    pass


class RankNotZero(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# field specifications


@dataclass(frozen=True)
class FieldSpec:
    """A totally real abelian field F of squarefree conductor c, given as the
    fixed field of H <= (Z/c)^x inside Q(zeta_c); -1 must lie in H."""

    conductor: int
    subgroup_generators: tuple[int, ...]

    def __post_init__(self):
        c = self.conductor
        if not is_squarefree(c):
            raise InvalidFieldSpec(f"conductor {c} is not squarefree")
        object.__setattr__(
            self, "subgroup_generators", tuple(int(g) % c for g in self.subgroup_generators)
        )
        H = self.subgroup_set()
        if c > 2 and (c - 1) not in H:
            raise InvalidFieldSpec("-1 does not lie in the subgroup (F not totally real)")
        # conductor must be exact: H may not contain a full kernel of
        # reduction (Z/c)^x -> (Z/(c/l))^x
        for ell in prime_divisors(c):
            cl = c // ell
            kernel = {u for u in range(1, c) if gcd(u, c) == 1 and (u % cl == 1 % cl)}
            if c > 1 and kernel <= H:
                raise InvalidFieldSpec(
                    f"field has conductor dividing {cl}; declare it with conductor {cl}"
                )

    def subgroup_set(self) -> frozenset:
        c = self.conductor
        if c == 1:
            return frozenset({1})
        H = {1 % c}
        stack = [1 % c]
        gens = [g % c for g in self.subgroup_generators]
        while stack:
            h = stack.pop()
            for g in gens:
                x = (h * g) % c
                if x not in H:
                    H.add(x)
                    stack.append(x)
        return frozenset(H)

    @property
    def group(self) -> AbGroup:
        return _field_group(self.conductor, self.subgroup_generators)

    @property
    def degree(self) -> int:
        return self.group.order

    def characters(self) -> list[DirichletChar]:
        """Dirichlet characters mod c that factor through Gal(F/Q)."""
        H = self.subgroup_set()
        out = []
        for chi in enumerate_chars(self.conductor):
            if all(chi.value_exponent(h)[0] == 0 for h in H):
                out.append(chi)
        return out

    def frobenius_class(self, ell: int):
        """Image of sigma_ell in Gal(F/Q) (ell unramified, i.e. prime to c)."""
        return self.group.class_of_unit(ell)

    def residue_degree(self, ell: int, prime_to: int | None = None) -> int:
        """Residue degree of the places over ell in F (or, with prime_to = p,
        in the maximal subfield F' of degree prime to p).

        For ramified ell | c the Frobenius is taken modulo the tame inertia
        subgroup (the image of the units = 1 mod c/ell).
        """
        c = self.conductor
        if c % ell == 0:
            cl = c // ell
            inertia = tuple(
                u for u in range(1, c) if gcd(u, c) == 1 and u % cl == 1 % max(cl, 1)
            )
            G = AbGroup.unit_quotient(c, self.subgroup_generators + inertia)
            from .numth import crt

            u_ell = crt([ell % cl if cl > 1 else 0, 1], [cl, ell]) if cl > 1 else 1
            f = G.element_order(G.class_of_unit(u_ell)) if cl > 1 else 1
        else:
            f = self.group.element_order(self.frobenius_class(ell))
        if prime_to is not None:
            while f % prime_to == 0:
                f //= prime_to
        return f


@lru_cache(maxsize=None)
def _field_group(c: int, gens: tuple[int, ...]) -> AbGroup:
    return AbGroup.unit_quotient(c, gens)


def plus_field(c: int) -> FieldSpec:
    """F = Q(zeta_c)^+ (H = {+-1})."""
    return FieldSpec(c, (c - 1,) if c > 2 else ())


# ---------------------------------------------------------------------------
# regularized symbols and theta elements


@lru_cache(maxsize=1 << 18)
def _plus_symbol(f: ModularSymbolFunctional, a: int, t: int) -> Fraction:
    return f.eval_symbol(a % t if t > 1 else 0, t)


def regularized_symbol(f: ModularSymbolFunctional, a: int, c: int) -> Fraction:
    """[a/c]^* = sum over t | c of mu(c/t) [a (c/t)^(-1) / t]^+ (c squarefree
    and prime to the level; gcd(a, c) = 1)."""
    N = f.level
    if not is_squarefree(c):
        raise NotSquarefreeLevel(f"{c} is not squarefree")
    if gcd(c, N) != 1:
        raise NotCoprimeToLevel(f"{c} shares a factor with the level {N}")
    if c > 1 and gcd(a, c) != 1:
        raise ValueError(f"gcd({a}, {c}) > 1")
    total = Fraction(0)
    for t in divisors(c):
        s = c // t
        mu = moebius(s)
        if mu == 0:
            continue
        if t == 1:
            total += mu * _plus_symbol(f, 0, 1)
        else:
            inv = pow(s % t, -1, t)
            total += mu * _plus_symbol(f, (a * inv) % t, t)
    return total


@dataclass(frozen=True)
class ThetaElement:
    """Theta element of the curve at level c, carried on G_c^+ or a quotient."""

    curve: CurveQ
    level: int
    carrier: GroupRingElem  # over Q
    manin_assumed: bool = True

    @property
    def group(self) -> AbGroup:
        return self.carrier.group

    def augmentation(self) -> Fraction:
        return self.carrier.augmentation()

    def __repr__(self):
        return f"Theta({self.curve.label or self.curve.ainvs}, c={self.level}): {self.carrier}"


def theta_element(f: ModularSymbolFunctional, c: int) -> ThetaElement:
    """Theta = (1/2) sum_{a in (Z/c)^x} [a/c]^* sigma_a, pushed to Q[G_c^+]."""
    group = _field_group(c, (c - 1,) if c > 2 else ())
    coeffs: dict = {}
    if c <= 2:
        coeffs[group.identity] = Fraction(1, 2) * regularized_symbol(f, 1 if c == 2 else 0, c)
    else:
        for a in group.elements:  # minimal coset reps of {\pm 1}
            # the two symbols [a/c]^* and [-a/c]^* agree (plus parity),
            # so the pushforward coefficient is just [a/c]^*
            coeffs[a] = regularized_symbol(f, a, c)
    carrier = GroupRingElem(group, coeffs, None)
    return ThetaElement(f.curve, c, carrier, manin_assumed=not getattr(f, "manin_known", False))


def restrict_to_field(theta: ThetaElement, field: FieldSpec) -> ThetaElement:
    """Pushforward along (Z/c)^x/{+-1} -> Gal(F/Q)."""
    if theta.level != field.conductor:
        raise ConductorMismatch(
            f"theta level {theta.level} != field conductor {field.conductor}"
        )
    G = field.group
    qmap = theta.group.quotient_map_to(G)
    return ThetaElement(theta.curve, theta.level, project_quotient(theta.carrier, qmap, G), theta.manin_assumed)


def character_component(theta: ThetaElement, chi: DirichletChar) -> CycloElem:
    """(Theta)_chi = sum_g coeff(g) chi(g), exact in Q(zeta_{ord chi}).

    chi is a Dirichlet character mod the theta level that must factor
    through the carrier group.
    """
    G = theta.group
    c = theta.level
    if chi.modulus != c:
        if c % chi.modulus == 0 or chi.modulus % c == 0:
            chi = lift_char(chi, c)
        else:
            raise CharacterDoesNotFactor("character modulus incompatible with level")
    H = G.subgroup or frozenset({1})
    if any(chi.value_exponent(h)[0] != 0 for h in H):
        raise CharacterDoesNotFactor("character does not kill the defining subgroup")
    m = chi.order
    acc = CycloElem.zero(m)
    for g, coeff in theta.carrier.coeffs.items():
        r, mm = chi.value_exponent(g)
        acc = acc + CycloElem.zeta(m, r * (m // mm)) * coeff
    return acc


# ---------------------------------------------------------------------------
# distribution relation


def distribution_check(f: ModularSymbolFunctional, c: int, p: int) -> dict:
    """pi_{Q(pc)/Q(c)}(Theta_{A,pc}) = -sigma_p (p - sigma_p^(-1) a_p +
    sigma_p^(-2)) Theta_{A,c}, checked exactly in Q[G_c^+].

    Returns {passed, lhs, rhs, difference}.
    """
    N = f.level
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if c % p == 0 or not is_squarefree(p * c):
        raise NotSquarefreeLevel(f"p c = {p * c} must be squarefree")
    if gcd(p * c, N) != 1:
        raise NotCoprimeToLevel(f"p c = {p * c} shares a factor with N = {N}")
    th_pc = theta_element(f, p * c)
    th_c = theta_element(f, c)
    Gc = th_c.group
    lhs = project_quotient(th_pc.carrier, lambda a: Gc.class_of_unit(a), Gc)
    ap = ap_count(f.curve, p)
    sig = Gc.class_of_unit(p) if c > 2 else Gc.identity
    sig_inv = Gc.inverse(sig)
    factor = -(
        p * GroupRingElem.basis(Gc, sig)
        - ap * GroupRingElem.from_scalar(Gc, 1)
        + GroupRingElem.basis(Gc, sig_inv)
    )
    rhs = factor * th_c.carrier
    diff = lhs - rhs
    return {"passed": diff.is_zero(), "lhs": lhs, "rhs": rhs, "difference": diff}


# ---------------------------------------------------------------------------
# interpolation residual (exact theta side vs numerical L side)


def interpolation_residual(
    f: ModularSymbolFunctional, chi: DirichletChar, c: int, digits: int = 14
):
    """| (Theta_c)_chi - (c/c_chi) L_c(A, chibar, 1) tau_c(chi) / (2 Omega+) |
    at the standard complex embedding; returns (residual, lhs, rhs)."""
    from . import lvalues

    theta = theta_element(f, c)
    comp = character_component(theta, chi if chi.modulus == c else lift_char(chi, c))
    with mp.workdps(digits + 10):
        lhs = comp.to_complex(mp)
        cchi = chi.conductor
        data = lvalues.an_coeffs(f.curve, lvalues.truncation_bound(conductor(f.curve), max(cchi, 1), digits + 2))
        Lc = lvalues.twisted_lvalue(
            data,
            chi.conjugate(),
            truncate_at=tuple(ell for ell in prime_divisors(c) if cchi % ell != 0),
            digits=digits,
        )
        tau = gauss_sum(lift_char(chi, c), c).to_complex(mp)
        per = real_period(f.curve, digits + 5)
        rhs = Fraction(c, cchi) * Lc.value * tau / (2 * per.omega_plus)
        return abs(lhs - rhs), lhs, rhs


# ---------------------------------------------------------------------------
# hypotheses report


def hypotheses_report(curve: CurveQ, field: FieldSpec, p: int) -> dict:
    """Algorithmic verdicts for the standing hypotheses (H1)-(H6) and the
    rank-zero theorem's conditions (a)-(e).

    Every entry is one of "verified" / "violated" / "inconclusive" /
    "assumed" / "not applicable", with an evidence string.
    """
    if p == 2 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    N = conductor(curve)
    c = field.conductor
    out: dict[str, dict] = {}

    def put(key, verdict, evidence):
        out[key] = {"verdict": verdict, "evidence": evidence}

    # F' = maximal subfield of degree prime to p; residue degrees there are
    # prime-to-p parts of Frobenius orders (mod inertia at ramified primes)
    def residue_degree_in_Fprime(ell: int) -> int:
        return field.residue_degree(ell, prime_to=p)

    # (a): p prime to |A(F')_tor|; sufficient: p does not divide |A(Q)_tor|
    # and p does not divide #A(kappa_v) for some good v of F'
    tor = torsion_order(curve)
    if tor % p == 0:
        put("a", "violated", f"p | |A(Q)_tor| = {tor}")
    else:
        wit = None
        from .numth import primes_up_to

        for ell in primes_up_to(200):
            if ell == p or N % ell == 0 or c % ell == 0 or ell == 2:
                continue
            f_ell = residue_degree_in_Fprime(ell)
            npts = count_points_ext(curve, ell, f_ell)
            if npts % p != 0:
                wit = (ell, f_ell, npts)
                break
        if wit:
            put("a", "verified", f"|A(Q)_tor| = {tor}; #A(F_{wit[0]}^{wit[1]}) = {wit[2]} is prime to {p}")
        else:
            put("a", "inconclusive", f"|A(Q)_tor| = {tor}; no torsion-free reduction witness found")

    # (b): p prime to N and to Tamagawa numbers at primes dividing N
    tam = {ell: tate_local(curve, ell, check_minimal=False).tamagawa for ell in prime_divisors(N)}
    if N % p == 0:
        put("b", "violated", f"p | N = {N}")
    elif any(t % p == 0 for t in tam.values()):
        put("b", "violated", f"p divides a Tamagawa number: {tam}")
    else:
        put("b", "verified", f"N = {N}, Tamagawa numbers {tam}")

    # (c): only when p | c: ordinarity and p prime to #A(kappa_v) for v | p
    if c % p == 0:
        ap = ap_count(curve, p)
        fp = residue_degree_in_Fprime(p)
        npts = count_points_ext(curve, p, fp)
        ordinary = ap % p != 0
        okpts = npts % p != 0
        if ordinary and okpts:
            put("c", "verified", f"a_p = {ap} (ordinary), #A(F_p^{fp}) = {npts}")
        else:
            put("c", "violated", f"a_p = {ap}, #A(F_p^{fp}) = {npts}")
    else:
        put("c", "not applicable", f"p = {p} does not divide c = {c}")

    # (d): p prime to #A(kappa_v) for places v of F' over primes l | c
    bad = []
    evidence = []
    undecided = []
    for ell in prime_divisors(c):
        if ell == p:
            continue
        if N % ell == 0:
            undecided.append(ell)
            evidence.append(f"bad reduction at {ell} (H5 fails); skipped")
            continue
        f_ell = residue_degree_in_Fprime(ell)
        npts = count_points_ext(curve, ell, f_ell)
        evidence.append(f"#A(F_{ell}^{f_ell}) = {npts}")
        if npts % p == 0:
            bad.append(ell)
    if bad:
        put("d", "violated", f"p | #A(kappa_v) above {bad}; " + "; ".join(evidence))
    elif undecided:
        put("d", "inconclusive", "; ".join(evidence))
    else:
        put("d", "verified", "; ".join(evidence) if evidence else "c = 1")

    # (e): Manin constant
    put("e", "assumed", "c(phi_A) = 1 assumed (true for all curves of this conductor range)")

    # (H1)-(H6)
    put("H1", out["b"]["verdict"] if N % p != 0 else "verified", f"Tamagawa numbers {tam}")
    put("H2", "verified" if N % p != 0 else "violated", f"p {'+' if N % p else '|'} N = {N}")
    put("H3", out["c"]["verdict"], out["c"]["evidence"])
    put("H4", out["d"]["verdict"], out["d"]["evidence"])
    put("H5", "verified" if gcd(N, c) == 1 else "violated", f"gcd(N, c) = {gcd(N, c)}")
    put("H6", "assumed", "finiteness of Sha is an external hypothesis")
    out["all_decidable_verified"] = all(
        v["verdict"] in ("verified", "assumed", "not applicable")
        for k, v in out.items()
        if isinstance(v, dict)
    )
    return out


# ---------------------------------------------------------------------------
# rank-zero verdict


def rank0_verdict(
    curve: CurveQ,
    field: FieldSpec,
    p: int,
    precision: int = 8,
    sha_trivial: bool | None = None,
    functional: ModularSymbolFunctional | None = None,
    digits: int = 14,
) -> dict:
    """Compute Theta_{A,F}, test p-integrality and unit-ness in Z_p[G], and
    (given an externally asserted trivial Sha) compare against the rank-zero
    prediction.  Twisted L-values must all be nonvanishing (RankNotZero)."""
    from . import lvalues
    from .modsym import attach_symbols

    if functional is None:
        functional = attach_symbols(curve, digits)
    c = field.conductor
    th = restrict_to_field(theta_element(functional, c), field)
    # rank-zero precondition: every character component is nonzero; verify
    # exactly on theta and numerically on the L-side
    comps = {}
    for chi in field.characters():
        comp = character_component(th, chi)
        comps[repr(chi)] = comp
        if comp.is_zero():
            raise RankNotZero(f"(Theta)_chi = 0 exactly for {chi}")
    data = lvalues.an_coeffs(curve, lvalues.truncation_bound(conductor(curve), max(c, 1), digits))
    with mp.workdps(digits + 10):
        for chi in field.characters():
            Lv = lvalues.twisted_lvalue(data, chi.conjugate(), (), digits)
            if abs(Lv.value) <= 10 * Lv.error_bound:
                raise RankNotZero(f"L(A, {chi}bar, 1) vanishes numerically")
    verdict = padic_integrality_and_unit(th.carrier, p)
    result = {
        "theta": th,
        "integral": verdict["integral"],
        "unit": verdict["unit"],
        "precision_context": f"exact rational coefficients; unit test mod {p}",
        "manin_assumed": th.manin_assumed,
        "sha_trivial_asserted": sha_trivial,
    }
    if sha_trivial is None:
        result["verdict"] = "membership data only (no Sha assertion)"
    elif sha_trivial:
        # with trivial Sha, Fit^0 = Z_p[G]: BSD_p(iv) consistency reduces to
        # Theta being a unit
        result["verdict"] = "consistent" if verdict["unit"] else "inconsistent"
    else:
        result["verdict"] = "Sha asserted nontrivial: Fit^0 is a proper ideal; theta must be a non-unit member"
    return result
