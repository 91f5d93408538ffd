"""Finite abelian group rings over exact and finite-precision p-adic scalars.

Groups are concrete: a tuple of hashable elements with a multiplication
table.  The two construction paths are coordinate groups (from invariant
factors) and unit-group quotients (Z/c)^x / H with minimal-unit coset
representatives and sigma_a labels.

Group-ring elements carry either Fraction coefficients (modulus None) or
integers mod p^k; every p-adic verdict is a statement mod p^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import gcd, lcm

from .arith import CycloElem
from .numth import factor, prime_divisors, valuation


class NotSurjective(ValueError):
    pass


class EvenPrime(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class HypothesisViolated(ValueError):
    pass


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class AbGroup:
    """A finite abelian group with explicit elements and labels."""

    elements: tuple
    identity: object
    mult_table: dict = field(repr=False, hash=False, compare=False)
    labels: dict = field(repr=False, hash=False, compare=False)
    invariant_factors: tuple[int, ...]
    generators: tuple
    ambient_modulus: int | None = None  # set for unit-group quotients
    subgroup: frozenset | None = None  # H <= (Z/c)^x for quotients

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exponent(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out = lcm(out, d)
        return out

    def mult(self, a, b):
        return self.mult_table[(a, b)]

    def inverse(self, a):
        for b in self.elements:
            if self.mult_table[(a, b)] == self.identity:
                return b
        raise AssertionError("no inverse found")

    def element_order(self, a) -> int:
        n = 1
        x = a
        while x != self.identity:
            x = self.mult(x, a)
            n += 1
        return n

    def label(self, a) -> str:
        return self.labels.get(a, str(a))

    def __repr__(self):
        inv = " x ".join(f"Z/{d}" for d in self.invariant_factors) or "1"
        return f"AbGroup({inv}, order={self.order})"

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_invariant_factors(ds) -> "AbGroup":
        ds = tuple(int(d) for d in ds if int(d) > 1)
        elems = [tuple(v) for v in product(*(range(d) for d in ds))] if ds else [()]
        mult = {
            (x, y): tuple((a + b) % d for a, b, d in zip(x, y, ds))
            for x in elems
            for y in elems
        }
        gens = tuple(
            tuple(1 if j == i else 0 for j in range(len(ds))) for i in range(len(ds))
        )
        labels = {e: ("g" + ",".join(map(str, e)) if e else "1") for e in elems}
        ident = tuple(0 for _ in ds)
        return AbGroup(tuple(elems), ident, mult, labels, ds, gens)

    @staticmethod
    def cyclic(n: int) -> "AbGroup":
        return AbGroup.from_invariant_factors((n,))

    @staticmethod
    def unit_quotient(c: int, subgroup_gens) -> "AbGroup":
        """(Z/c)^x / <subgroup_gens>, elements = minimal positive coset reps,
        labels sigma_a."""
        c = int(c)
        units = [u for u in range(1, c)] if c <= 2 else [u for u in range(1, c) if gcd(u, c) == 1]
        if c == 1:
            units = [1]
        gens_mod = []
        for g in subgroup_gens:
            if c > 1 and gcd(int(g) % c, c) != 1:
                raise ValueError(f"{g} is not a unit mod {c}")
            gens_mod.append(int(g) % c)
        ident = 1 % c if c > 1 else 1
        Hset = {ident}
        stack = [ident]
        while stack:
            h = stack.pop()
            for g in gens_mod:
                x = (h * g) % c
                if x not in Hset:
                    Hset.add(x)
                    stack.append(x)
        if c == 1:
            Hset = {1}
        cosets = {u: (min((u * h) % c for h in Hset) if c > 1 else 1) for u in units}
        elems = sorted(set(cosets.values()))
        mult = {
            (x, y): (cosets[(x * y) % c] if c > 1 else 1) for x in elems for y in elems
        }
        ident = cosets[1 % c] if c > 1 else 1
        labels = {e: f"s{e}" for e in elems}
        # a small generating set: images of the ambient unit-group generators
        from .characters import _unit_group

        gens = tuple(sorted({cosets[g % c] for g, _, _ in _unit_group(c)})) or (ident,)
        invf = _invariant_factors(elems, mult, ident)
        return AbGroup(
            tuple(elems),
            ident,
            mult,
            labels,
            invf,
            gens,
            ambient_modulus=c,
            subgroup=frozenset(Hset),
        )

    def class_of_unit(self, a: int):
        """Coset representative of the unit a (for unit-group quotients)."""
        c = self.ambient_modulus
        if c is None:
            raise ValueError("not a unit-group quotient")
        if c == 1:
            return self.identity
        a %= c
        if gcd(a, c) != 1:
            raise ValueError(f"{a} is not a unit mod {c}")
        return min((a * h) % c for h in self.subgroup)

    def quotient_map_to(self, other: "AbGroup"):
        """Projection between unit-group quotients of one modulus (the target
        subgroup must contain the source subgroup)."""
        if (
            self.ambient_modulus is None
            or self.ambient_modulus != other.ambient_modulus
            or not set(self.subgroup) <= set(other.subgroup)
        ):
            raise ValueError("not a nested pair of unit-group quotients")

        return other.class_of_unit


def _invariant_factors(elems, mult, ident) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from torsion counts:
    log_p of #{x : x^(p^k) = 1}/#{x : x^(p^(k-1)) = 1} is the k-th column
    height of the p-partition."""
    n = len(elems)
    if n == 1:
        return ()
    orders = {}
    for e in elems:
        k, x = 1, e
        while x != ident:
            x = mult[(x, e)]
            k += 1
        orders[e] = k
    parts: dict[int, list[int]] = {}
    for p in prime_divisors(n):
        conj = []
        prev = 1
        k = 1
        while True:
            cnt = sum(1 for e in elems if _divides_pk(orders[e], p, k))
            if cnt == prev:
                break
            conj.append(valuation(cnt // prev, p))
            prev = cnt
            k += 1
        nparts = conj[0] if conj else 0
        lam = [sum(1 for h in conj if h >= j) for j in range(1, nparts + 1)]
        parts[p] = sorted(lam, reverse=True)
    height = max(len(v) for v in parts.values())
    invf = []
    for i in range(height):
        d = 1
        for p, lam in parts.items():
            if i < len(lam):
                d *= p ** lam[i]
        invf.append(d)
    return tuple(sorted(d for d in invf if d > 1))


def _divides_pk(order: int, p: int, k: int) -> bool:
    """order | p^k (i.e. x^(p^k) = identity)."""
    o = order
    for _ in range(k):
        if o % p == 0:
            o //= p
    return o == 1


# ---------------------------------------------------------------------------
# group-ring elements


@dataclass(frozen=True)
class GroupRingElem:
    """Element of R[G]; R = Q when modulus is None, else Z/modulus with
    modulus a prime power."""

    group: AbGroup
    coeffs: dict = field(hash=False, compare=False)
    modulus: int | None = None

    def __post_init__(self):
        cl = {}
        for g, x in self.coeffs.items():
            if g not in self.group.elements:
                raise ValueError(f"{g} is not a group element")
            if self.modulus is None:
                x = Fraction(x)
            else:
                x = int(x) % self.modulus
            if x:
                cl[g] = x
        object.__setattr__(self, "coeffs", cl)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_scalar(group: AbGroup, x, modulus: int | None = None) -> "GroupRingElem":
        return GroupRingElem(group, {group.identity: x}, modulus)

    @staticmethod
    def basis(group: AbGroup, g, modulus: int | None = None) -> "GroupRingElem":
        return GroupRingElem(group, {g: 1}, modulus)

    # -- ring structure ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GroupRingElem):
            if other.group is not self.group and other.group != self.group:
                raise ValueError("group mismatch")
            if other.modulus != self.modulus:
                raise ValueError("scalar-ring mismatch")
            return other
        return GroupRingElem.from_scalar(self.group, other, self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for g, x in other.coeffs.items():
            out[g] = out.get(g, 0) + x
        return GroupRingElem(self.group, out, self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.group, {g: -x for g, x in self.coeffs.items()}, self.modulus)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GroupRingElem):
            return GroupRingElem(
                self.group,
                {g: x * (Fraction(other) if self.modulus is None else other) for g, x in self.coeffs.items()},
                self.modulus,
            )
        other = self._coerce(other)
        out: dict = {}
        for g, x in self.coeffs.items():
            for h, y in other.coeffs.items():
                k = self.group.mult(g, h)
                out[k] = out.get(k, 0) + x * y
        return GroupRingElem(self.group, out, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = GroupRingElem.from_scalar(self.group, 1, self.modulus)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GroupRingElem.from_scalar(self.group, other, self.modulus)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return (
            self.group == other.group
            and self.modulus == other.modulus
            and self.coeffs == other.coeffs
        )

    def coefficient(self, g):
        zero = Fraction(0) if self.modulus is None else 0
        return self.coeffs.get(g, zero)

    def augmentation(self):
        vals = list(self.coeffs.values())
        if self.modulus is None:
            return sum(vals, Fraction(0))
        return sum(vals) % self.modulus

    def is_zero(self) -> bool:
        return not self.coeffs

    def vector(self) -> list:
        zero = Fraction(0) if self.modulus is None else 0
        return [self.coeffs.get(g, zero) for g in self.group.elements]

    def reduce_mod(self, p: int, k: int) -> "GroupRingElem":
        """Rational coefficients -> Z/p^k (requires p-integrality)."""
        if self.modulus is not None:
            raise ValueError("already finite-precision")
        q = p**k
        out = {}
        for g, x in self.coeffs.items():
            if x.denominator % p == 0:
                raise ValueError(f"coefficient {x} is not {p}-integral")
            out[g] = x.numerator * pow(x.denominator, -1, q) % q
        return GroupRingElem(self.group, out, q)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for g in self.group.elements:
            if g in self.coeffs:
                parts.append(f"{self.coeffs[g]}*{self.group.label(g)}")
        tag = f" (mod {self.modulus})" if self.modulus else ""
        return " + ".join(parts) + tag


# ---------------------------------------------------------------------------
# operations


def project_quotient(x: GroupRingElem, qmap, target: AbGroup) -> GroupRingElem:
    """Coefficient-wise pushforward along the group surjection qmap."""
    images = {qmap(g) for g in x.group.elements}
    if images != set(target.elements):
        raise NotSurjective("map is not onto the target group")
    out: dict = {}
    for g, c in x.coeffs.items():
        k = qmap(g)
        out[k] = out.get(k, 0) + c
    return GroupRingElem(target, out, x.modulus)


def padic_integrality_and_unit(x: GroupRingElem, p: int) -> dict:
    """{integral, unit} for a rational group-ring element at the odd prime p.

    unit = integral and the regular representation is invertible mod p.
    """
    if p == 2:
        raise EvenPrime("p must be odd")
    if x.modulus is not None:
        raise ValueError("expected exact rational coefficients")
    G = x.group
    integral = all(c.denominator % p != 0 for c in x.coeffs.values())
    unit = False
    if integral:
        n = G.order
        idx = {g: i for i, g in enumerate(G.elements)}
        M = [[0] * n for _ in range(n)]
        for j, h in enumerate(G.elements):
            for g, c in x.coeffs.items():
                M[idx[G.mult(g, h)]][j] = c.numerator * pow(c.denominator, -1, p) % p
        unit = _det_nonzero_mod_p(M, p)
    return {"integral": integral, "unit": unit}


def _det_nonzero_mod_p(M, p: int) -> bool:
    n = len(M)
    M = [row[:] for row in M]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % p), None)
        if piv is None:
            return False
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, p)
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] * inv % p
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[c])]
    return True


# -- membership in spanned Z/p^k-modules (Howell-style elimination) ----------


def _span_membership(vectors: list[list[int]], target: list[int], p: int, k: int) -> bool:
    """Is target in the Z/p^k-span of the given integer vectors?"""
    q = p**k
    n = len(target)
    pool = [[x % q for x in v] for v in vectors]
    pivots = []  # (pos, val, row)
    for pos in range(n):
        # minimal valuation at this position among pool rows
        best = None
        for i, v in enumerate(pool):
            if v[pos] % q == 0:
                continue
            val = valuation(v[pos] % q, p) if v[pos] % q else k
            if best is None or val < best[0]:
                best = (val, i)
        if best is None:
            continue
        val, i = best
        row = pool.pop(i)
        u = row[pos] // p**val
        uinv = pow(u, -1, q)
        row = [x * uinv % q for x in row]  # now row[pos] = p^val
        # Howell completion: p^(k-val) * row re-enters the pool
        if val > 0:
            shifted = [x * p ** (k - val) % q for x in row]
            if any(shifted):
                pool.append(shifted)
        newpool = []
        for v in pool:
            if v[pos] % q and valuation(v[pos], p) >= val:
                f = v[pos] // p**val
                v = [(a - f * b) % q for a, b in zip(v, row)]
            if any(v):
                newpool.append(v)
        pool = newpool
        pivots.append((pos, val, row))
    t = [x % q for x in target]
    for pos, val, row in pivots:
        if t[pos] % q == 0:
            continue
        if valuation(t[pos], p) < val:
            return False
        f = t[pos] // p**val
        t = [(a - f * b) % q for a, b in zip(t, row)]
    return not any(t)


def aug_ideal_membership(x: GroupRingElem, n: int) -> bool:
    """x in I^n mod p^k, for x over Z/p^k (I = augmentation ideal)."""
    if x.modulus is None:
        raise ValueError("expected Z/p^k coefficients")
    q = x.modulus
    p = prime_divisors(q)[0]
    k = valuation(q, p)
    if n <= 0:
        return True
    G = x.group
    gens = list(G.generators)
    idx = {g: i for i, g in enumerate(G.elements)}
    vectors = []
    for combo in combinations_with_replacement(gens, n):
        # v = product of (g - 1) over the combo, as a group-ring element
        prod_elem = GroupRingElem.from_scalar(G, 1, q)
        for g in combo:
            prod_elem = prod_elem * (GroupRingElem.basis(G, g, q) - 1)
        if prod_elem.is_zero():
            continue
        base = prod_elem.vector()
        for h in G.elements:
            v = [0] * G.order
            for g2, c in prod_elem.coeffs.items():
                v[idx[G.mult(h, g2)]] = c
            vectors.append(v)
    return _span_membership(vectors, x.vector(), p, k)


def _grm_det(entries: list[list[GroupRingElem]]) -> GroupRingElem:
    """Determinant of a small matrix over the (commutative) group ring."""
    n = len(entries)
    G = entries[0][0].group
    q = entries[0][0].modulus
    if n == 0:
        return GroupRingElem.from_scalar(G, 1, q)
    if n == 1:
        return entries[0][0]
    out = GroupRingElem(G, {}, q)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in entries[1:]]
        term = entries[0][j] * _grm_det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


def fitting_membership(x: GroupRingElem, presentation: list[list[GroupRingElem]], a: int) -> bool:
    """x in Fit^a mod p^k of the module presented by the r x s matrix
    (relations as rows, s generators); Fit^a = ideal of (s-a)-minors."""
    if x.modulus is None:
        raise ValueError("expected Z/p^k coefficients")
    q = x.modulus
    p = prime_divisors(q)[0]
    k = valuation(q, p)
    if not presentation or not presentation[0]:
        raise ValueError("empty presentation")
    r, s = len(presentation), len(presentation[0])
    if not (0 <= a < s):
        raise IndexOutOfRange(f"index a = {a} out of range for {s} generators")
    t = s - a
    G = x.group
    idx = {g: i for i, g in enumerate(G.elements)}
    if t > r:
        # no t x t minors: Fit^a = 0
        return x.is_zero()
    vectors = []
    for rows in combinations(range(r), t):
        for cols in combinations(range(s), t):
            sub = [[presentation[i][j] for j in cols] for i in rows]
            m = _grm_det(sub)
            if m.is_zero():
                continue
            for h in G.elements:
                v = [0] * G.order
                for g2, c in m.coeffs.items():
                    v[idx[G.mult(h, g2)]] = c
                vectors.append(v)
    return _span_membership(vectors, x.vector(), p, k)


# ---------------------------------------------------------------------------
# characters of an abstract abelian group, and the unit-sum element


@dataclass(frozen=True)
class GroupChar:
    """A character of an AbGroup, stored by value exponents per element:
    chi(g) = zeta_m^(exps[g]) with m = order of the character lattice."""

    group: AbGroup
    exps: dict = field(hash=False, compare=False)
    order: int = 1

    def value_exponent(self, g) -> tuple[int, int]:
        return self.exps[g] % self.order, self.order

    def value(self, g, level: int | None = None) -> CycloElem:
        r, m = self.value_exponent(g)
        level = level or m
        return CycloElem.zeta(level, r * (level // m))

    def is_trivial(self) -> bool:
        return all(r % self.order == 0 for r in self.exps.values())

    def kernel(self) -> frozenset:
        return frozenset(g for g in self.group.elements if self.exps[g] % self.order == 0)


def group_characters(G: AbGroup) -> list[GroupChar]:
    """All characters of G.

    For unit-group quotients these are the Dirichlet characters mod c that
    kill the subgroup; for coordinate groups they come from the invariant
    factor decomposition directly.
    """
    m = G.exponent
    if G.order == 1:
        return [GroupChar(G, {G.identity: 0}, 1)]
    if G.ambient_modulus is not None:
        from .characters import enumerate_chars

        c = G.ambient_modulus
        out = []
        for chi in enumerate_chars(c):
            if any(chi.value_exponent(h)[0] for h in G.subgroup):
                continue
            exps = {}
            for g in G.elements:
                r, mm = chi.value_exponent(g)
                exps[g] = r * (m // mm)
            out.append(GroupChar(G, exps, m))
        assert len(out) == G.order
        return out
    ds = G.invariant_factors
    out = []
    for ks in product(*(range(d) for d in ds)):
        exps = {}
        for g in G.elements:
            r = 0
            for k, x, d in zip(ks, g, ds):
                r = (r + k * x * (m // d)) % m
            exps[g] = r
        out.append(GroupChar(G, exps, m))
    return out


def unit_sum_element(
    c: int,
    char_conductors: list[tuple[GroupChar, int]],
    p: int,
    i: int,
    group: AbGroup,
    subgroup_family: dict[int, frozenset] | None = None,
) -> dict:
    """The element sum_chi ((c_chi/c) n_chi)^i e_chi of Q[A], assembled
    exactly, where n_chi = p if p | c and p does not divide c_chi, else 1.

    char_conductors pairs every character of A with its conductor c_chi | c.
    If subgroup_family maps divisors d | c to subgroups H_d, the two lemma
    hypotheses are verified first (HypothesisViolated on failure).

    Returns {"element": GroupRingElem over Q, "integral": bool, "unit": bool}.
    """
    from .numth import divisors, is_squarefree

    if p == 2:
        raise EvenPrime("p must be odd")
    if not is_squarefree(c):
        raise ValueError("c must be squarefree")
    A = group
    if len(char_conductors) != A.order:
        raise ValueError("need all characters of the group")
    if subgroup_family is not None:
        for d in divisors(c):
            H = subgroup_family.get(d)
            if H is None:
                raise HypothesisViolated(f"no subgroup supplied for divisor {d}")
            for chi, cchi in char_conductors:
                in_ker = H <= chi.kernel()
                if (d % cchi == 0) != in_ker:
                    raise HypothesisViolated(
                        f"divisibility/kernel mismatch at d = {d} for conductor {cchi}"
                    )
            bound = 1
            for ell in prime_divisors(c // d) if c != d else []:
                bound *= ell + (-1 if i % 2 == 1 else 1)
            if c == d:
                bound = 1
            if bound % len(H) != 0:
                raise HypothesisViolated(
                    f"|H_{d}| = {len(H)} does not divide the bound {bound}"
                )
    m = A.exponent
    n = A.order
    coeffs = {}
    for g in A.elements:
        acc = CycloElem.zero(m)
        for chi, cchi in char_conductors:
            n_chi = p if (c % p == 0 and cchi % p != 0) else 1
            scalar = Fraction(cchi * n_chi, c) ** i
            r, mm = chi.value_exponent(A.inverse(g))
            acc = acc + CycloElem.zeta(m, r * (m // mm)) * scalar
        val = acc.rational_part() / n  # e_chi carries 1/|A|
        coeffs[g] = val
    elem = GroupRingElem(A, coeffs, None)
    verdict = padic_integrality_and_unit(elem, p)
    return {"element": elem, **verdict}
