"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored on the power basis 1, z, ..., z^(phi(n)-1) modulo the
n-th cyclotomic polynomial, so equality is coefficient comparison and every
identity test is exact.  Coefficients are ``fractions.Fraction``.

The per-level reduction data (cyclotomic polynomial and the table of
x^j mod Phi_n) is computed once and cached; multiplication runs as an
integer convolution against that table.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .numth import divisors, euler_phi

Rational = Fraction  # the exact scalar type used throughout the package


class LevelMismatch(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class NotDivisible(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense lists, index = degree)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (den monic or divides exactly)."""
    num = list(num)
    dn, dd = len(num) - 1, len(den) - 1
    out = [0] * (dn - dd + 1)
    lead = den[-1]
    for i in range(dn - dd, -1, -1):
        c = num[i + dd]
        if c % lead != 0:
            raise ArithmeticError("inexact polynomial division")
        q = c // lead
        out[i] = q
        if q:
            for j, dj in enumerate(den):
                num[i + j] -= q * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n):
        if d < n:
            num = _poly_div_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """(phi(n), rows) where rows[j] = coefficients of x^j mod Phi_n.

    Rows cover 0 <= j <= max(n-1, 2*phi(n)-2), enough for Galois maps and
    for reducing products of two reduced elements.
    """
    phi = euler_phi(n)
    poly = cyclotomic_poly(n)
    top = [-c for c in poly[:-1]]  # x^phi = top(x)
    rows: list[tuple[int, ...]] = []
    cur = [0] * phi
    jmax = max(n - 1, 2 * phi - 2)
    for j in range(jmax + 1):
        if j == 0:
            cur = [1] + [0] * (phi - 1)
        else:
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                cur = [c + carry * t for c, t in zip(cur, top)]
        rows.append(tuple(cur))
    return phi, tuple(rows)


def _reduce_int_poly(n: int, coeffs: list[int]) -> list[int]:
    """Reduce an integer polynomial (any degree < len(rows)) mod Phi_n."""
    phi, rows = _reduction_table(n)
    out = list(coeffs[:phi]) + [0] * max(0, phi - len(coeffs))
    for j in range(phi, len(coeffs)):
        c = coeffs[j]
        if c:
            row = rows[j]
            out = [o + c * r for o, r in zip(out, row)]
    return out


class CycloElem:
    """An element of Q(zeta_n) in canonical power-basis form."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        phi = euler_phi(level)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coefficients at level {level}, got {len(coeffs)}")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("CycloElem is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(level: int, value) -> "CycloElem":
        phi = euler_phi(level)
        return CycloElem(level, (Fraction(value),) + (Fraction(0),) * (phi - 1))

    @staticmethod
    def zeta(level: int, power: int = 1) -> "CycloElem":
        """zeta_level ** power."""
        power %= level
        vec = _reduce_int_poly(level, [0] * power + [1])
        return CycloElem(level, vec)

    @staticmethod
    def zero(level: int) -> "CycloElem":
        return CycloElem.from_rational(level, 0)

    @staticmethod
    def one(level: int) -> "CycloElem":
        return CycloElem.from_rational(level, 1)

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self) -> Fraction:
        """The element as a Fraction; raises if it is not rational."""
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloElem):
            if isinstance(other, (int, Fraction)):
                return self == CycloElem.from_rational(self.level, other)
            return NotImplemented
        return self.level == other.level and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(str(c))
                else:
                    terms.append(f"{c}*z{self.level}^{i}" if i > 1 else f"{c}*z{self.level}")
        return " + ".join(terms) if terms else "0"

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "CycloElem"):
        if self.level != other.level:
            raise LevelMismatch(f"levels {self.level} and {other.level} differ")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.level, other)
        self._check(other)
        return CycloElem(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.level, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.from_rational(self.level, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElem(self.level, tuple(c * q for c in self.coeffs))
        self._check(other)
        # integer convolution: scale both factors to integer vectors
        da = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        db = lcm(*(c.denominator for c in other.coeffs)) if other.coeffs else 1
        a = [int(c * da) for c in self.coeffs]
        b = [int(c * db) for c in other.coeffs]
        conv = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        red = _reduce_int_poly(self.level, conv)
        d = da * db
        return CycloElem(self.level, tuple(Fraction(c, d) for c in red))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycloElem.one(self.level)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "CycloElem":
        """Multiplicative inverse via extended Euclid against Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverting 0 in a cyclotomic field")
        phi = len(self.coeffs)
        mod = [Fraction(c) for c in cyclotomic_poly(self.level)]
        a = list(self.coeffs)
        # extended gcd of a and mod over Q[x]
        r0, r1 = mod, a + [Fraction(0)] * (len(mod) - len(a))
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            c = r0[d0] / r1[d1]
            shift = d0 - d1
            for i in range(d1 + 1):
                r0[i + shift] -= c * r1[i]
            s1p = [Fraction(0)] * shift + s1
            s0 = s0 + [Fraction(0)] * (len(s1p) - len(s0))
            s1p = s1p + [Fraction(0)] * (len(s0) - len(s1p))
            s0 = [x - c * y for x, y in zip(s0, s1p)]
            r0, r1, s0, s1 = r1, r0, s1, s0
        d = deg(r1)
        if d != 0:
            raise ZeroDivisionError("element is a zero divisor(?) -- cannot invert")
        unit = r1[0]
        inv = [c / unit for c in s1]
        inv = inv[:phi] + [Fraction(0)] * max(0, phi - len(inv))
        # s1 may exceed phi-degree formally; reduce to be safe
        num = lcm(*(c.denominator for c in inv))
        red = _reduce_int_poly(self.level, [int(c * num) for c in inv])
        return CycloElem(self.level, tuple(Fraction(c, num) for c in red))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElem(self.level, tuple(c / q for c in self.coeffs))
        self._check(other)
        return self * other.inverse()

    # -- Galois structure ----------------------------------------------------

    def galois(self, t: int) -> "CycloElem":
        """Apply the automorphism zeta -> zeta^t (t coprime to the level)."""
        n = self.level
        t %= n
        if n > 1 and gcd(t, n) != 1:
            raise NotCoprime(f"{t} not coprime to {n}")
        phi, rows = _reduction_table(n)
        out = [Fraction(0)] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * t) % n]
                for k in range(phi):
                    if row[k]:
                        out[k] += c * row[k]
        return CycloElem(n, out)

    def conjugate(self) -> "CycloElem":
        return self.galois(self.level - 1 if self.level > 1 else 1)

    def embed(self, m: int) -> "CycloElem":
        """Re-express the element in Q(zeta_m) for a multiple m of the level."""
        n = self.level
        if m % n != 0:
            raise NotDivisible(f"{n} does not divide {m}")
        if m == n:
            return self
        k = m // n
        phi_m, rows = _reduction_table(m)
        out = [Fraction(0)] * phi_m
        for i, c in enumerate(self.coeffs):
            if c:
                row = rows[(i * k) % m] if i * k >= phi_m else None
                if row is None:
                    out[i * k] += c
                else:
                    for j in range(phi_m):
                        if row[j]:
                            out[j] += c * row[j]
        return CycloElem(m, out)

    def norm(self) -> Fraction:
        """Field norm to Q (product over the Galois orbit)."""
        n = self.level
        prod = CycloElem.one(n)
        for t in range(1, n + 1):
            if gcd(t, n) == 1:
                prod = prod * self.galois(t)
        return prod.rational_part()

    # -- numerics ------------------------------------------------------------

    def to_complex(self, mp=None, embedding: int = 1):
        """Complex value under zeta_n -> exp(2*pi*i*embedding/n) (mpmath)."""
        if mp is None:
            import mpmath as mp  # local import; numerics are optional here
        z = mp.exp(2j * mp.pi * embedding / self.level)
        out = mp.mpc(0)
        for c in reversed(self.coeffs):
            out = out * z + mp.mpf(c.numerator) / mp.mpf(c.denominator)
        return out


def cyclo_mul(a: CycloElem, b: CycloElem) -> CycloElem:
    return a * b


def cyclo_galois(a: CycloElem, t: int) -> CycloElem:
    return a.galois(t)
