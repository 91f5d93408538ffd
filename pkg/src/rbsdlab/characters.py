"""Dirichlet characters, conductors and exact Gauss sums.

A character mod c is stored through the standard generator system of
(Z/cZ)^x (CRT over prime powers, two generators at 2^k for k >= 3): for each
generator g_i of order s_i we keep an exponent k_i, meaning
chi(g_i) = exp(2 pi i k_i / s_i).  All values are exact roots of unity
realized as CycloElem's.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .arith import CycloElem, _reduction_table
from .numth import crt, euler_phi, factor, is_squarefree, prime_divisors, primitive_root

__all__ = [
    "DirichletChar",
    "enumerate_chars",
    "trivial_char",
    "lift_char",
    "gauss_sum",
    "tau_star",
    "unramified_char_factor",
    "ConductorNotDividing",
    "NotSquarefree",
]


class ConductorNotDividing(ValueError):
    pass


class NotSquarefree(ValueError):
    pass


@lru_cache(maxsize=None)
def _unit_group(c: int):
    """Generator data for (Z/cZ)^x as a tuple of (lifted_gen, order, q).

    Each generator is = 1 modulo the complementary factor of its prime power q.
    """
    if c <= 2:
        return ()
    gens = []
    for p, e in factor(c):
        q = p**e
        rest = c // q
        if p == 2:
            if e == 1:
                local = []
            elif e == 2:
                local = [(3, 2)]
            else:
                local = [(q - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(primitive_root(q), euler_phi(q))]
        for g, order in local:
            lifted = crt([g % q, 1], [q, rest]) if rest > 1 else g % q
            gens.append((lifted, order, q))
    return tuple(gens)


@lru_cache(maxsize=None)
def _local_dlogs(c: int):
    """Per generator, a dict (residue mod q) -> exponent."""
    tables = []
    for g, order, q in _unit_group(c):
        tbl = {}
        acc = 1
        for k in range(order):
            tbl.setdefault(acc % q, k)
            acc = acc * (g % q) % q
        tables.append(tbl)
    return tuple(tables)


def _unit_log(c: int, a: int) -> tuple[int, ...]:
    """Exponent vector of the unit a on the generator system of (Z/cZ)^x."""
    a %= c
    if c > 1 and gcd(a, c) != 1:
        raise ValueError(f"{a} is not a unit mod {c}")
    out = []
    idx = 0
    gens = _unit_group(c)
    tables = _local_dlogs(c)
    for p, e in factor(c):
        q = p**e
        aa = a % q
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                out.append(0 if aa == 1 else 1)
                idx += 1
            else:
                tbl5 = tables[idx + 1]
                if aa in tbl5:
                    out.extend([0, tbl5[aa]])
                else:
                    out.extend([1, tbl5[(-aa) % q]])
                idx += 2
        else:
            out.append(tables[idx][aa])
            idx += 1
    return tuple(out)


@dataclass(frozen=True)
class DirichletChar:
    """chi(g_i) = zeta_{s_i}^{exponents[i]} on the generator system mod c."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        gens = _unit_group(self.modulus)
        if len(self.exponents) != len(gens):
            raise ValueError("exponent vector has wrong length")
        object.__setattr__(
            self, "exponents", tuple(k % s for k, (_, s, _) in zip(self.exponents, gens))
        )

    @property
    def order(self) -> int:
        out = 1
        for k, (_, s, _) in zip(self.exponents, _unit_group(self.modulus)):
            out = lcm(out, s // gcd(s, k))
        return out

    def is_trivial(self) -> bool:
        return all(k == 0 for k in self.exponents)

    def value_exponent(self, a: int) -> tuple[int, int]:
        """chi(a) = zeta_m^r as (r, m), m = order(chi); a must be a unit."""
        m = self.order
        logvec = _unit_log(self.modulus, a)
        r = 0
        for k, x, (_, s, _) in zip(self.exponents, logvec, _unit_group(self.modulus)):
            # chi(g_i) = zeta_{s}^{k} = zeta_m^{k m / s}; k m / s is integral
            r = (r + x * (k * m // s)) % m
        return r, m

    def value_exponent_mod(self, a: int, f: int) -> tuple[int, int]:
        """Like value_exponent, but a only given as a unit mod f, where
        conductor | f | any common sense modulus.  Picks a representative of
        a mod f that is a unit mod the full modulus."""
        if f % self.conductor != 0:
            raise ConductorNotDividing("residue modulus must absorb the conductor")
        if gcd(a, f) != 1:
            raise ValueError(f"{a} is not a unit mod {f}")
        b = a % f if f > 1 else 1
        if b == 0:
            b = f  # f = 1 path
        while gcd(b, self.modulus) != 1:
            b += f
        return self.value_exponent(b)

    def __call__(self, a: int, level: int | None = None) -> CycloElem:
        """chi(a) as an exact root of unity (0 if gcd(a, modulus) > 1)."""
        m = self.order
        level = level if level is not None else m
        if level % m != 0:
            raise ValueError("level must be a multiple of the order")
        if self.modulus > 1 and gcd(a, self.modulus) != 1:
            return CycloElem.zero(level)
        r, _ = self.value_exponent(a)
        return CycloElem.zeta(level, r * (level // m))

    def parity(self) -> str:
        if self.modulus <= 2:
            return "even"
        r, _ = self.value_exponent(-1)
        return "even" if r == 0 else "odd"

    def is_even(self) -> bool:
        return self.parity() == "even"

    @property
    def conductor(self) -> int:
        f = 1
        idx = 0
        for p, e in factor(self.modulus):
            if p == 2:
                if e == 1:
                    continue
                if e == 2:
                    if self.exponents[idx] % 2:
                        f *= 4
                    idx += 1
                else:
                    k_minus, k_five = self.exponents[idx], self.exponents[idx + 1]
                    s_five = 2 ** (e - 2)
                    if k_five % s_five:
                        d = s_five // gcd(s_five, k_five)
                        t = d.bit_length() - 1  # d = 2^t
                        f *= 2 ** (2 + t)
                    elif k_minus % 2:
                        f *= 4
                    idx += 2
            else:
                k = self.exponents[idx]
                s = (p - 1) * p ** (e - 1)
                if k % s:
                    d = s // gcd(s, k)
                    vp = 0
                    while d % p == 0:
                        d //= p
                        vp += 1
                    f *= p ** (1 + vp)
                idx += 1
        return f

    # -- character algebra ----------------------------------------------------

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if self.modulus != other.modulus:
            raise ValueError("character product needs equal moduli")
        return DirichletChar(
            self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def __pow__(self, t: int) -> "DirichletChar":
        return DirichletChar(self.modulus, tuple(t * k for k in self.exponents))

    def conjugate(self) -> "DirichletChar":
        return self**-1

    def galois_orbit(self) -> list["DirichletChar"]:
        m = self.order
        return [self**t for t in range(1, m + 1) if gcd(t, m) == 1]

    def __repr__(self):
        return f"chi_{self.modulus}{list(self.exponents)}"


def trivial_char(c: int) -> DirichletChar:
    return DirichletChar(c, tuple(0 for _ in _unit_group(c)))


def enumerate_chars(c: int, even_only: bool = False) -> list[DirichletChar]:
    """All Dirichlet characters mod c (optionally only even ones), each with
    its conductor available via .conductor."""
    from itertools import product

    gens = _unit_group(c)
    ranges = [range(s) for _, s, _ in gens]
    chars = [DirichletChar(c, tuple(ks)) for ks in product(*ranges)]
    if even_only:
        chars = [ch for ch in chars if ch.is_even()]
    return chars


def lift_char(chi: DirichletChar, c: int) -> DirichletChar:
    """The character mod c induced by (the primitive character underlying)
    chi; requires conductor(chi) | c."""
    f = chi.conductor
    if c % f != 0:
        raise ConductorNotDividing(f"conductor {f} does not divide {c}")
    if c == chi.modulus:
        return chi
    exps = []
    for g, s, _ in _unit_group(c):
        r, m = chi.value_exponent_mod(g, f)
        assert (r * s) % m == 0, "generator order incompatible with lift"
        exps.append(r * s // m)
    return DirichletChar(c, tuple(exps))


def primitive_value(chi: DirichletChar, a: int) -> CycloElem:
    """Value at a of the primitive character inducing chi (a unit mod the
    conductor; a need not be a unit mod the modulus)."""
    f = chi.conductor
    r, m = chi.value_exponent_mod(a, f)
    return CycloElem.zeta(m, r)


def gauss_sum(chi: DirichletChar, m: int | None = None) -> CycloElem:
    """tau_m(chi) = sum_{a in (Z/m)^x} chi(a) zeta_m^a, exact, at level
    lcm(m, order(chi)).  Defaults to m = modulus(chi); needs conductor | m."""
    if m is None:
        m = chi.modulus
    if m % chi.conductor != 0:
        raise ConductorNotDividing(f"conductor {chi.conductor} does not divide {m}")
    if m == 1:
        return CycloElem.one(1)
    chim = lift_char(chi, m) if m != chi.modulus else chi
    om = chim.order
    level = lcm(m, om)
    phi, rows = _reduction_table(level)
    acc = [0] * phi
    for a in range(1, m):
        if gcd(a, m) != 1:
            continue
        r, _ = chim.value_exponent(a)
        expo = (r * (level // om) + a * (level // m)) % level
        row = rows[expo]
        for k in range(phi):
            if row[k]:
                acc[k] += row[k]
    return CycloElem(level, acc)


def unramified_char_factor(chi: DirichletChar, c: int) -> CycloElem:
    """The unramified characteristic u_chi for the ambient squarefree
    conductor c: the product over primes l | c with l prime to cond(chi) of
    det(-Frob_l^(-1) | V^I) = -chi(l), with chi evaluated through its
    primitive incarnation and Frob_l the geometric Frobenius.

    (That this is -chi(l), not -chi(l)^(-1), is forced by the exact
    factorization tau_c(chi) = tau_{cond}(chi) * prod_l (-chi(l)): substitute
    zeta_c = zeta_l^t zeta_{c'}^s with s l + t c' = 1 and unfold.)
    """
    if not is_squarefree(c):
        raise NotSquarefree(f"{c} is not squarefree")
    f = chi.conductor
    if c % f != 0:
        raise ConductorNotDividing(f"conductor {f} does not divide {c}")
    m = chi.order
    out = CycloElem.one(m)
    for ell in prime_divisors(c // f):
        r, _ = chi.value_exponent_mod(ell, f)
        out = out * (-CycloElem.zeta(m, r))
    return out


def tau_star(chi: DirichletChar, c: int) -> CycloElem:
    """Modified Galois-Gauss sum against the ambient squarefree conductor c:
    tau_{cond}(chi_prim) * prod_{l | c/cond} (-chi(l)^(-1)), exact at level
    lcm(c, order(chi))."""
    if not is_squarefree(c):
        raise NotSquarefree(f"{c} is not squarefree")
    f = chi.conductor
    if c % f != 0:
        raise ConductorNotDividing(f"conductor {f} does not divide {c}")
    prim = lift_char(chi, f)
    tau_prim = gauss_sum(prim, f)
    u = unramified_char_factor(chi, c)
    level = lcm(lcm(c, chi.order), tau_prim.level)
    return tau_prim.embed(level) * u.embed(level)
