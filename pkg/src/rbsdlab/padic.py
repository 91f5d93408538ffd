"""Unramified p-adic arithmetic with precision tracking, elliptic formal
group logarithms, logarithmic resolvents and the rank-zero integrality
prediction.

The single computational arena is Z_{p^D} / p^K, realized as
Z/p^K[x]/(h(x)) for a deterministic monic lift h of the lexicographically
smallest irreducible polynomial of degree D over F_p.  Elements carry an
absolute-precision field and an optional p-power denominator shift, so every
verdict is a statement "mod p^k'" with k' reported, never implicit.

Cyclotomic data (character values, Gauss sums, theta components) enters
through one pinned Hensel-lifted root of a master cyclotomic polynomial;
Frobenius acts as the p-power map on that root, which is what makes the
assembled group-ring coefficients provably Q_p-rational at precision.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import CycloElem, cyclotomic_poly
from .characters import DirichletChar, gauss_sum, lift_char
from .elliptic import CurveQ, ap_count, conductor, tate_local
from .grouprings import GroupRingElem
from .numth import multiplicative_order, prime_divisors, valuation
from .theta import FieldSpec, character_component

_VINF = 10**9


class RamifiedCase(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


class CharacterValueUnavailable(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# polynomial helpers over F_p


def _polmul_fp(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polmod_fp(a, m, p):
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return a[:dm] if dm else []


def _polpow_mod_fp(base, e, m, p):
    out = [1]
    b = _polmod_fp(base, m, p)
    while e:
        if e & 1:
            out = _polmod_fp(_polmul_fp(out, b, p), m, p)
        b = _polmod_fp(_polmul_fp(b, b, p), m, p)
        e >>= 1
    return out


def _is_irreducible_fp(poly, p) -> bool:
    """Monic polynomial over F_p irreducible iff x^(p^d) = x mod poly and
    gcd-type conditions x^(p^(d/l)) - x coprime for prime l | d."""
    d = len(poly) - 1
    xp = _polpow_mod_fp([0, 1], p**d, poly, p)
    target = _polmod_fp([0, 1], poly, p)
    if _trim(xp) != _trim(target):
        return False
    for ell in prime_divisors(d):
        e = d // ell
        xe = _polpow_mod_fp([0, 1], p**e, poly, p)
        diff = [(x - y) % p for x, y in zip(_pad(xe, d), _pad(target, d))]
        if not any(diff):
            return False
        # gcd(x^{p^e} - x, poly) must be 1
        if _poly_gcd_fp(diff, poly, p):
            return False
    return True


def _trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _pad(a, n):
    return list(a) + [0] * (n - len(a))


def _poly_gcd_fp(a, b, p) -> bool:
    """True iff gcd has positive degree."""
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        if len(b) == 1:
            return False
        inv = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b) and _trim(r):
            c = r[-1] * inv % p
            shift = len(r) - len(b)
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            r = _trim(r)
            if not r:
                break
        a, b = b, _trim(r)
    return len(a) > 1


@lru_cache(maxsize=None)
def _modulus_poly(p: int, D: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree D over F_p."""
    if D == 1:
        return (0, 1)
    from itertools import product as iproduct

    for coeffs in iproduct(range(p), repeat=D):
        poly = list(coeffs) + [1]
        if poly[0] == 0:
            continue
        if _is_irreducible_fp(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# the unramified ring


@dataclass(frozen=True)
class UnramExt:
    """Z_{p^D} truncated at p^K: Z/p^K[x]/(h(x))."""

    p: int
    degree: int
    prec: int  # K

    @property
    def modulus(self) -> tuple[int, ...]:
        return _modulus_poly(self.p, self.degree)

    @property
    def pk(self) -> int:
        return self.p**self.prec

    def zero(self) -> "UnramElem":
        return UnramElem(self, (0,) * self.degree, self.prec, 0)

    def one(self) -> "UnramElem":
        return UnramElem(self, (1,) + (0,) * (self.degree - 1), self.prec, 0)

    def gen(self) -> "UnramElem":
        v = [0] * self.degree
        if self.degree > 1:
            v[1] = 1
        else:
            v[0] = 0
        return UnramElem(self, tuple(v), self.prec, 0)

    def from_int(self, n) -> "UnramElem":
        return UnramElem(self, (int(n) % self.pk,) + (0,) * (self.degree - 1), self.prec, 0)

    def from_rational(self, x: Fraction) -> "UnramElem":
        x = Fraction(x)
        if x == 0:
            return self.zero()
        vnum = valuation(x.numerator, self.p)
        vden = valuation(x.denominator, self.p)
        num = x.numerator // self.p**vnum
        den = x.denominator // self.p**vden
        unit = num * pow(den, -1, self.pk) % self.pk
        coeffs = (unit * self.p**vnum,) + (0,) * (self.degree - 1)
        # value = p^(-vden) * integral part; coefficients known mod p^(prec+vnum)
        return UnramElem(self, coeffs, self.prec + vnum, vden)

    def _reduce_poly(self, conv: list[int]) -> tuple[int, ...]:
        q = self.pk
        h = self.modulus
        D = self.degree
        conv = [c % q for c in conv]
        for i in range(len(conv) - 1, D - 1, -1):
            c = conv[i]
            if c:
                for j in range(D + 1):
                    conv[i - D + j] = (conv[i - D + j] - c * h[j]) % q
        return tuple(conv[:D])

    @property
    def frobenius_matrix(self) -> tuple[tuple[int, ...], ...]:
        return _frobenius_matrix(self)


@lru_cache(maxsize=None)
def _frobenius_matrix(ring: UnramExt) -> tuple[tuple[int, ...], ...]:
    """Columns: images of x^i under the lifted Frobenius (x -> Hensel root
    of h congruent to x^p)."""
    D, q, p = ring.degree, ring.pk, ring.p
    if D == 1:
        return ((1,),)
    # start from x^p mod (h, p), Newton-iterate z <- z - h(z)/h'(z)
    z = ring.gen() ** p
    h = [ring.from_int(c) for c in ring.modulus]
    while True:
        hz = _poly_eval(h, z)
        if all(c % q == 0 for c in hz.coeffs):
            break
        hpz = _poly_eval([(i + 1) * h[i + 1] for i in range(len(h) - 1)], z)
        z = z - hz * hpz.inverse()
    cols = []
    acc = ring.one()
    for i in range(D):
        cols.append(acc.coeffs)
        acc = acc * z
    return tuple(cols)


def _poly_eval(coeffs, x: "UnramElem") -> "UnramElem":
    out = x.ring.zero()
    for c in reversed(coeffs):
        out = out * x + c
    return out


@dataclass(frozen=True)
class UnramElem:
    """p^(-vshift) * (integral element known mod p^prec)."""

    ring: UnramExt
    coeffs: tuple[int, ...]
    prec: int  # coefficients are known mod p^prec
    vshift: int = 0

    def __post_init__(self):
        q = self.ring.p**self.prec
        object.__setattr__(self, "coeffs", tuple(c % q for c in self.coeffs))

    @property
    def abs_prec(self) -> int:
        return self.prec - self.vshift

    def _align(self, other: "UnramElem"):
        if not isinstance(other, UnramElem):
            other = _coerce(self.ring, other)
        s = max(self.vshift, other.vshift)
        a = self.scale_p(s - self.vshift)
        b = other.scale_p(s - other.vshift)
        return a, b

    def scale_p(self, t: int) -> "UnramElem":
        """Multiply the stored integral part by p^t (keeping the value by
        raising vshift as well)."""
        if t == 0:
            return self
        p = self.ring.p
        return UnramElem(
            self.ring,
            tuple(c * p**t for c in self.coeffs),
            self.prec + t,
            self.vshift + t,
        )

    def __add__(self, other):
        a, b = self._align(other)
        prec = min(a.prec, b.prec)
        return UnramElem(a.ring, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), prec, a.vshift)

    __radd__ = __add__

    def __neg__(self):
        return UnramElem(self.ring, tuple(-c for c in self.coeffs), self.prec, self.vshift)

    def __sub__(self, other):
        return self + (-other if isinstance(other, UnramElem) else -_coerce(self.ring, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UnramElem):
            other = _coerce(self.ring, other)
        prec = min(self.prec, other.prec)
        conv = [0] * (2 * self.ring.degree - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        conv[i + j] += x * y
        ring_at = UnramExt(self.ring.p, self.ring.degree, prec)
        red = ring_at._reduce_poly(conv)
        return UnramElem(self.ring, red, prec, self.vshift + other.vshift)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = _coerce(self.ring, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def valuation(self) -> int:
        """v_p of the value; _VINF-ish (abs_prec) when zero at precision."""
        vmin = min((valuation(c, self.ring.p) if c else _VINF) for c in self.coeffs)
        if vmin >= self.prec:
            return self.abs_prec + 10**6  # zero at this precision
        return vmin - self.vshift

    def is_zero_at_precision(self) -> bool:
        return all(c % self.ring.p**self.prec == 0 for c in self.coeffs)

    def normalized(self) -> "UnramElem":
        """Strip common powers of p between the integral part and vshift."""
        if self.vshift == 0:
            return self
        p = self.ring.p
        vmin = min((valuation(c, p) if c else _VINF) for c in self.coeffs)
        t = min(self.vshift, vmin if vmin < _VINF else self.prec)
        if t <= 0:
            return self
        return UnramElem(
            self.ring,
            tuple(c // p**t for c in self.coeffs),
            self.prec - t,
            self.vshift - t,
        )

    def inverse(self) -> "UnramElem":
        """Inverse of a unit (valuation 0), by F_p inversion + Hensel."""
        x = self.normalized()
        p, q = x.ring.p, x.ring.p**x.prec
        vmin = min((valuation(c, p) if c else _VINF) for c in x.coeffs)
        if vmin != 0:
            raise ZeroDivisionError("inverse of a non-unit (use div_exact for p-powers)")
        # invert mod p by polynomial xgcd over F_p
        a = _trim([c % p for c in x.coeffs]) or [0]
        m = list(x.ring.modulus)
        inv_p = _poly_invmod_fp(a, m, p)
        y = UnramElem(x.ring, tuple(_pad(inv_p, x.ring.degree)), x.prec, 0)
        # Hensel: y <- y (2 - x y)
        two = _coerce(x.ring, 2)
        steps = 1
        while (1 << steps) < x.prec * 2:
            y = y * (two - UnramElem(x.ring, x.coeffs, x.prec, 0) * y)
            steps += 1
        out = y
        return replace(out, vshift=out.vshift - x.vshift)

    def frobenius(self, power: int = 1) -> "UnramElem":
        D = self.ring.degree
        power %= D
        out = self
        ringK = UnramExt(self.ring.p, D, self.prec)
        M = ringK.frobenius_matrix
        for _ in range(power):
            acc = [0] * D
            for i, c in enumerate(out.coeffs):
                if c:
                    col = M[i]
                    for j in range(D):
                        acc[j] += c * col[j]
            out = UnramElem(out.ring, tuple(acc), out.prec, out.vshift)
        return out

    def truncate(self, new_abs_prec: int) -> "UnramElem":
        """Drop to a lower absolute precision (for stability tests)."""
        target_prec = new_abs_prec + self.vshift
        if target_prec > self.prec:
            raise PrecisionExhausted("cannot raise precision by truncation")
        return UnramElem(self.ring, self.coeffs, target_prec, self.vshift)

    def trace_to_qp(self):
        """Sum of Frobenius conjugates (lands in Z/p^prec when integral)."""
        out = self
        acc = self
        for _ in range(self.ring.degree - 1):
            acc = acc.frobenius()
            out = out + acc
        return out

    def residue_coeffs(self) -> tuple[int, ...]:
        return tuple(c % self.ring.p for c in self.coeffs)

    def __repr__(self):
        return f"Unram({list(self.coeffs)}, p={self.ring.p}^{self.prec}, v-={self.vshift})"


def _coerce(ring: UnramExt, x) -> UnramElem:
    if isinstance(x, UnramElem):
        return x
    if isinstance(x, Fraction):
        return ring.from_rational(x)
    return ring.from_int(x)


def _poly_invmod_fp(a, m, p):
    """Inverse of a mod (m, p) by extended Euclid over F_p."""
    r0, s0 = [x % p for x in m], [0]
    r1, s1 = [x % p for x in a], [1]

    def deg(u):
        u = _trim(u)
        return len(u) - 1

    while deg(r1) > 0:
        if deg(r0) < deg(r1):
            r0, r1, s0, s1 = r1, r0, s1, s0
            continue
        c = r0[deg(r0)] * pow(r1[deg(r1)], -1, p) % p
        shift = deg(r0) - deg(r1)
        r0 = [(x - c * (r1[i - shift] if 0 <= i - shift < len(r1) else 0)) % p for i, x in enumerate(r0)]
        s1p = [0] * shift + s1
        ln = max(len(s0), len(s1p))
        s0 = [(x - c * y) % p for x, y in zip(_pad(s0, ln), _pad(s1p, ln))]
        r0, r1, s0, s1 = r1, _trim(r0) or [0], s1, s0
    if deg(r1) != 0 or r1 == [0]:
        # the gcd ended in r0
        r1, s1 = r0, s0
    u = _trim(r1)
    if deg(u) != 0:
        raise ZeroDivisionError("not invertible mod p")
    inv = pow(u[0], -1, p)
    return [(x * inv) % p for x in s1]


# ---------------------------------------------------------------------------
# cyclotomic embeddings


def embed_cyclotomic(ring: UnramExt, m: int, index: int = 0) -> UnramElem:
    """A pinned primitive m-th root of unity in Z_{p^D}/p^K (p not dividing
    m; requires ord_m(p) | D).  index selects among the Frobenius orbits of
    primitive roots, deterministically ordered."""
    p, D = ring.p, ring.degree
    if m % p == 0:
        raise RamifiedCase(f"p = {p} divides m = {m}")
    if m == 1:
        return ring.one()
    f = multiplicative_order(p, m)
    if D % f != 0:
        raise ValueError(f"ord_{m}({p}) = {f} does not divide the ring degree {D}")
    roots = _residue_roots_of_unity(p, D, m)
    root_res = roots[index % len(roots)]
    # Hensel-lift the residue root through Phi_m
    phi = [ring.from_rational(Fraction(c)) for c in cyclotomic_poly(m)]
    z = UnramElem(ring, root_res, ring.prec, 0)
    dphi = [(i + 1) * phi[i + 1] for i in range(len(phi) - 1)]
    for _ in range(ring.prec.bit_length() + 2):
        fz = _poly_eval(phi, z)
        if fz.is_zero_at_precision():
            break
        z = z - fz * _poly_eval(dphi, z).inverse()
    assert _poly_eval(phi, z).is_zero_at_precision()
    assert (z**m - ring.one()).is_zero_at_precision()
    return z


@lru_cache(maxsize=None)
def _residue_roots_of_unity(p: int, D: int, m: int) -> tuple[tuple[int, ...], ...]:
    """All primitive m-th roots of unity in F_{p^D}, sorted by coefficient
    tuple (deterministic pin)."""
    ringp = UnramExt(p, D, 1)
    q = p**D
    assert (q - 1) % m == 0
    # find an element of multiplicative order exactly m by scanning
    # deterministic candidates g and taking g^((q-1)/m)
    from itertools import product as iproduct

    def order_div(x, n):
        return _unram1_pow(ringp, x, n) == tuple([1] + [0] * (D - 1))

    for cand_coeffs in iproduct(range(p), repeat=D):
        if all(c == 0 for c in cand_coeffs):
            continue
        g = tuple(cand_coeffs)
        x = _unram1_pow(ringp, g, (q - 1) // m)
        ok = True
        for ell in prime_divisors(m):
            if _unram1_pow(ringp, x, m // ell) == tuple([1] + [0] * (D - 1)):
                ok = False
                break
        if ok:
            prim = [
                _unram1_pow(ringp, x, j) for j in range(1, m + 1) if gcd(j, m) == 1
            ]
            return tuple(sorted(prim))
    raise AssertionError("no element of the required order")


def _unram1_pow(ringp: UnramExt, coeffs: tuple[int, ...], e: int) -> tuple[int, ...]:
    out = tuple([1] + [0] * (ringp.degree - 1))
    base = coeffs
    while e:
        if e & 1:
            out = ringp._reduce_poly(
                [sum(out[i] * base[j] for i in range(len(out)) for j in range(len(base)) if i + j == k) for k in range(2 * ringp.degree - 1)]
            )
        base = ringp._reduce_poly(
            [sum(base[i] * base[j] for i in range(len(base)) for j in range(len(base)) if i + j == k) for k in range(2 * ringp.degree - 1)]
        )
        e >>= 1
    return tuple(out)


def embed_cyclo_elem(ring: UnramExt, elem: CycloElem, zeta: UnramElem) -> UnramElem:
    """Image of an exact cyclotomic element under zeta_level -> zeta."""
    out = ring.zero()
    power = ring.one()
    for c in elem.coeffs:
        if c:
            out = out + power * ring.from_rational(c)
        power = power * zeta
    return out


# ---------------------------------------------------------------------------
# formal group logarithm


@dataclass(frozen=True)
class FormalLogSeries:
    curve: CurveQ
    truncation: int
    coefficients: tuple[Fraction, ...]  # c_1 ... c_T (c_n at index n-1)

    def coefficient(self, n: int) -> Fraction:
        return self.coefficients[n - 1]


def _series_mul(a, b, T):
    out = [Fraction(0)] * T
    for i, x in enumerate(a):
        if x and i < T:
            for j, y in enumerate(b):
                if i + j >= T:
                    break
                if y:
                    out[i + j] += x * y
    return out


def _series_inv(a, T):
    assert a[0] != 0
    inv0 = 1 / a[0]
    out = [Fraction(0)] * T
    out[0] = inv0
    for n in range(1, T):
        s = Fraction(0)
        for k in range(1, n + 1):
            if k < len(a) and a[k]:
                s += a[k] * out[n - k]
        out[n] = -inv0 * s
    return out


@lru_cache(maxsize=None)
def _w_series(curve: CurveQ, T: int) -> tuple[Fraction, ...]:
    """w(t) = t^3 (1 + ...) with w = t^3 + a1 t w + a2 t^2 w + a3 w^2
    + a4 t w^2 + a6 w^3, solved by iteration to O(t^T)."""
    a1, a2, a3, a4, a6 = curve.ainvs
    w = [Fraction(0)] * T
    if T > 3:
        w[3] = Fraction(1)
    for _ in range(T):
        w2 = _series_mul(w, w, T)
        w3 = _series_mul(w2, w, T)
        new = [Fraction(0)] * T
        if T > 3:
            new[3] = Fraction(1)
        for n in range(T):
            acc = new[n]
            if n >= 1 and a1:
                acc += a1 * w[n - 1]
            if n >= 2 and a2:
                acc += a2 * w[n - 2]
            if a3:
                acc += a3 * w2[n]
            if n >= 1 and a4:
                acc += a4 * w2[n - 1]
            if a6:
                acc += a6 * w3[n]
            new[n] = acc
        if new == w:
            break
        w = new
    return tuple(w)


def formal_group_log(curve: CurveQ, T: int = 24) -> FormalLogSeries:
    """log(t) = sum c_n t^n with c_1 = 1, from integrating the invariant
    differential; denominator of c_n divides n."""
    a1, a2, a3, a4, a6 = curve.ainvs
    TT = T + 4
    w = list(_w_series(curve, TT))
    # W = w / t^3 (unit series)
    W = w[3:] + [Fraction(0)] * 3
    Winv = _series_inv(W, TT)
    dWinv = [n * Winv[n] for n in range(len(Winv))]  # t * (W^-1)'(t) shifted
    # numerator: -2 W^-1 + t (W^-1)'   (coefficientwise: -2 Winv[n] + n Winv[n])
    num = [(n - 2) * Winv[n] for n in range(TT)]
    # denominator: -2 W^-1 + a1 t W^-1 + a3 t^3
    den = [-2 * Winv[n] for n in range(TT)]
    for n in range(1, TT):
        den[n] += a1 * Winv[n - 1]
    if TT > 3:
        den[3] += a3
    P = _series_mul(num, _series_inv(den, TT), TT)
    assert P[0] == 1
    coeffs = [P[n - 1] / n for n in range(1, T + 1)]
    assert coeffs[0] == 1
    for n in range(1, T + 1):
        assert (coeffs[n - 1] * n).denominator == 1, "c_n * n must be integral"
    return FormalLogSeries(curve, T, tuple(coeffs))


def formal_group_law(curve: CurveQ, T: int = 20):
    """The addition law F(t1, t2) truncated to total degree < T, as a dict
    {(i, j): Fraction}; used as an oracle for the log homomorphism."""
    a1, a2, a3, a4, a6 = curve.ainvs
    TT = T

    def bmul(A, B):
        out = {}
        for (i, j), x in A.items():
            if not x:
                continue
            for (k, l), y in B.items():
                if i + k + j + l >= TT or not y:
                    continue
                key = (i + k, j + l)
                out[key] = out.get(key, Fraction(0)) + x * y
        return out

    def badd(A, B):
        out = dict(A)
        for k, v in B.items():
            out[k] = out.get(k, Fraction(0)) + v
        return {k: v for k, v in out.items() if v}
    w = _w_series(curve, TT + 3)
    # lambda = sum_n w_n (t2^n - t1^n)/(t2 - t1) = sum_n w_n sum_{i+j=n-1} t1^i t2^j
    lam = {}
    for n in range(3, len(w)):
        if w[n]:
            for i in range(n):
                j = n - 1 - i
                if i + j < TT:
                    lam[(i, j)] = lam.get((i, j), Fraction(0)) + w[n]
    # nu = w(t1) - lambda t1
    nu = {}
    for n in range(3, len(w)):
        if w[n] and n < TT:
            nu[(n, 0)] = nu.get((n, 0), Fraction(0)) + w[n]
    lam_t1 = {(i + 1, j): v for (i, j), v in lam.items() if i + 1 + j < TT}
    nu = badd(nu, {k: -v for k, v in lam_t1.items()})
    lam2 = bmul(lam, lam)
    lamnu = bmul(lam, nu)
    lam2nu = bmul(lam2, nu)
    # t1 + t2 + t3 = -(a1 l + a3 l^2 + a2 n + 2 a4 l n + 3 a6 l^2 n)/(1 + a2 l + a4 l^2 + a6 l^3)
    numer = badd(
        badd({k: -a1 * v for k, v in lam.items()}, {k: -a3 * v for k, v in lam2.items()}),
        badd(
            {k: -a2 * v for k, v in nu.items()},
            badd({k: -2 * a4 * v for k, v in lamnu.items()}, {k: -3 * a6 * v for k, v in lam2nu.items()}),
        ),
    )
    denom = {(0, 0): Fraction(1)}
    denom = badd(denom, {k: a2 * v for k, v in lam.items()})
    denom = badd(denom, {k: a4 * v for k, v in lam2.items()})
    denom = badd(denom, {k: a6 * v for k, v in bmul(lam2, lam).items()})
    # invert denom (unit)
    inv = {(0, 0): Fraction(1)}
    # Neumann series: denom = 1 + E
    E = {k: v for k, v in denom.items() if k != (0, 0)}
    term = {(0, 0): Fraction(1)}
    for _ in range(TT):
        term = bmul(term, {k: -v for k, v in E.items()})
        if not term:
            break
        inv = badd(inv, term)
    t3p = badd({(1, 0): Fraction(-1), (0, 1): Fraction(-1)}, bmul(numer, inv))
    # inversion series i(t) = t * W^-1(t) * V(t)^-1, V = -W^-1 (1 - a1 t) ... see notes
    ww = list(_w_series(curve, TT + 3))
    W = ww[3:] + [Fraction(0)] * 3
    Winv = _series_inv(W, TT + 3)
    V = [-Winv[n] for n in range(TT + 3)]
    for n in range(1, TT + 3):
        V[n] += a1 * Winv[n - 1]
    if TT + 3 > 3:
        V[3] += a3
    iser = _series_mul(Winv, _series_inv(V, TT + 3), TT + 3)
    iser = [Fraction(0)] + iser[: TT - 1]  # multiply by t
    # compose: F = i(t3')
    out = {}
    power = {(0, 0): Fraction(1)}
    for n in range(0, TT):
        if n >= 1:
            power = bmul(power, t3p)
        cn = iser[n] if n < len(iser) else Fraction(0)
        if cn:
            out = badd(out, {k: cn * v for k, v in power.items()})
    return out


def eval_log(series: FormalLogSeries, x: UnramElem, min_surviving: int = 1) -> UnramElem:
    """log(x) for a formal-group parameter x of valuation >= 1, with exact
    precision-loss accounting from the denominators n of c_n."""
    ring = x.ring
    p = ring.p
    v = x.valuation()
    if v < 1:
        raise PrecisionExhausted("formal-log parameter must have valuation >= 1")
    out = ring.zero()
    xn = ring.one()
    T = series.truncation
    for n in range(1, T + 1):
        xn = xn * x
        c = series.coefficient(n)
        if c:
            out = out + xn * ring.from_rational(c)
    # tail bound: terms beyond T have valuation >= (T+1) v - v_p(n) over n > T;
    # the worst case within the stored precision window
    tail = min((n * v - valuation(n, p)) for n in range(T + 1, T + 2 * ring.prec + 2))
    if tail < out.abs_prec:
        out = out.truncate(tail)
    if out.abs_prec < min_surviving:
        raise PrecisionExhausted(
            f"surviving precision {out.abs_prec} below the floor {min_surviving}"
        )
    return out


# ---------------------------------------------------------------------------
# semi-local points and logarithmic resolvents

# A semi-local point is one formal-group parameter per place of F over p,
# indexed by fixed coset representatives g_1, ..., g_r of the decomposition
# group <sigma_p> in G: component i lives in the completion at the place
# g_i(w_0) and is stored through the identification with Q_{p^f} inside the
# working ring Q_{p^D}, fixed by Frob^f.


@dataclass(frozen=True)
class SemiLocalStructure:
    field: FieldSpec
    p: int
    prec: int
    ring: UnramExt
    f: int  # residue degree = order of sigma_p in G
    coset_reps: tuple  # elements of G = Gal(F/Q)

    @property
    def n_places(self) -> int:
        return len(self.coset_reps)


def semilocal_structure(field: FieldSpec, p: int, prec: int, extra_orders: tuple[int, ...] = ()) -> SemiLocalStructure:
    """Working data for F tensor Q_p: ring degree D = lcm(f, ord of p mod
    the character orders and any extra root-of-unity orders needed)."""
    c = field.conductor
    if c % p == 0:
        raise RamifiedCase(f"p = {p} ramifies in the field of conductor {c}")
    G = field.group
    sig = field.frobenius_class(p)
    f = G.element_order(sig)
    D = f
    for m in (field.group.exponent,) + tuple(extra_orders):
        if m % p == 0:
            raise RamifiedCase(f"needed root-of-unity order {m} is divisible by p")
        if m > 1:
            D = lcm(D, multiplicative_order(p, m))
    ring = UnramExt(p, D, prec)
    # coset reps of <sigma_p> in G, deterministic order
    seen = set()
    reps = []
    for g in G.elements:
        if g in seen:
            continue
        reps.append(g)
        x = g
        for _ in range(f):
            seen.add(x)
            x = G.mult(x, sig)
    return SemiLocalStructure(field, p, prec, ring, f, tuple(reps))


_SEED_DIGIT_CAP = 40  # seeded draws use this many p-adic digits, so the same
# seed yields compatible points at every working precision <= the cap


def random_semilocal_point(struct: SemiLocalStructure, seed: int) -> tuple[UnramElem, ...]:
    """Pseudo-random formal-group parameters of valuation exactly 1, one per
    place, each fixed by Frob^f (so they lie in the subfield Q_{p^f}).

    Draws are precision-independent: the same seed gives the truncation-
    compatible point at any precision up to _SEED_DIGIT_CAP digits.
    """
    import random

    rng = random.Random(seed)
    ring = struct.ring
    D, f, p = ring.degree, struct.f, struct.p
    if ring.prec > _SEED_DIGIT_CAP:
        raise PrecisionExhausted(f"seeded points support precision <= {_SEED_DIGIT_CAP}")
    out = []
    for _ in range(struct.n_places):
        while True:
            z = UnramElem(
                ring,
                tuple(p * rng.randrange(p**_SEED_DIGIT_CAP) for _ in range(D)),
                ring.prec,
                0,
            )
            x = ring.zero()
            acc = z
            for _ in range(D // f):
                x = x + acc
                acc = acc.frobenius(f)
            # now x is Frob^f-fixed; keep if valuation exactly 1
            if x.valuation() == 1:
                out.append(x)
                break
    return tuple(out)


def act_on_point(struct: SemiLocalStructure, h, x: tuple[UnramElem, ...]) -> tuple[UnramElem, ...]:
    """The action of h in G on a semi-local point in coset coordinates:
    (h x)_{i'} = Frob^{-j'}(x_i) where h^{-1} g_{i'} = g_i sigma_p^{j'}."""
    G = struct.field.group
    sig = struct.field.frobenius_class(struct.p)
    hinv = G.inverse(h)
    out = [None] * struct.n_places
    index = {g: i for i, g in enumerate(struct.coset_reps)}
    for ip, gip in enumerate(struct.coset_reps):
        target = G.mult(hinv, gip)
        # find i, j with target = g_i sigma_p^j
        x0 = target
        j = 0
        while x0 not in index:
            x0 = G.mult(x0, G.inverse(sig))
            j += 1
            if j > G.order:
                raise AssertionError("coset decomposition failed")
        i = index[x0]
        out[ip] = x[i].frobenius((-j) % struct.ring.degree)
    return tuple(out)


def log_resolvent(
    struct: SemiLocalStructure,
    logseries: FormalLogSeries,
    x: tuple[UnramElem, ...],
    chi: DirichletChar,
    zeta: UnramElem,
    min_surviving: int = 5,
) -> UnramElem:
    """LR_chi(x) = sum over g in G of sigma-hat(g^(-1) log x) chi(g), computed
    as sum_i sum_j Frob^(-j)(log x_i) chi(g_i sigma_p^j).

    chi is a Dirichlet character mod the field conductor factoring through G;
    its values are embedded through the pinned root zeta (a primitive root of
    unity of order divisible by ord chi... zeta must have order exactly the
    group exponent or a multiple of ord chi)."""
    field = struct.field
    G = field.group
    sig = field.frobenius_class(struct.p)
    ring = struct.ring
    logs = [eval_log(logseries, xi, min_surviving=min_surviving) for xi in x]
    zord = G.exponent
    out = ring.zero()
    for i, gi in enumerate(struct.coset_reps):
        g = gi
        for j in range(struct.f):
            r, m = chi.value_exponent(g)  # chi(g_i sigma_p^j)
            chival = zeta ** (r * (zord // m)) if r else ring.one()
            out = out + logs[i].frobenius((-j) % ring.degree) * chival
            g = G.mult(g, sig)
    return out


def _sig_power(G, sig, j):
    out = G.identity
    for _ in range(j):
        out = G.mult(out, sig)
    return out


# ---------------------------------------------------------------------------
# the first prediction


def first_prediction_sum(
    curve: CurveQ,
    field: FieldSpec,
    p: int,
    x: tuple[UnramElem, ...],
    precision: int,
    functional=None,
    extra_S: tuple[int, ...] = (),
    embedding_index: int = 0,
    min_surviving: int = 5,
    log_truncation: int = 40,
) -> dict:
    """Assemble sum_chi [algebraic part]_chi * LR_chi(x) * e_chi as an
    element of Z/p^k'[G] and report integrality plus the mod-|G| congruences.

    The algebraic part for chi is exact:
        2 (c_chi/c) (Theta_c)_chi * prod_{l in S, l not | c} P_l(A, chibar, 1)
    divided by tau_c(chibar); the division by the Gauss sum (a p-adic unit)
    is the cocycle-consistent pairing making every assembled coefficient
    Frobenius-stable, which the code asserts at working precision.
    """
    from .modsym import attach_symbols
    from .theta import theta_element

    if p == 2 or field.conductor % p == 0:
        raise RamifiedCase("need an odd prime unramified in F")
    if functional is None:
        functional = attach_symbols(curve)
    c = field.conductor
    N = conductor(curve)
    chars = field.characters()
    # master cyclotomic level: character values, Gauss sums at level lcm(c, e)
    e = field.group.exponent
    master = lcm(c, e)
    struct = semilocal_structure(field, p, precision, extra_orders=(master,))
    ring = struct.ring
    zeta_master = embed_cyclotomic(ring, master, embedding_index)
    zeta_e = zeta_master ** (master // e) if e > 1 else ring.one()
    logseries = formal_group_log(curve, log_truncation)

    theta = theta_element(functional, c)
    S = sorted(set([p] + prime_divisors(N) + list(extra_S)))
    comps = {}
    for chi in chars:
        thchi = character_component(theta, chi)  # level ord(chi)
        if thchi.is_zero():
            raise CharacterValueUnavailable(f"(Theta)_chi = 0 for {chi}")
        cchi = chi.conductor
        m = max(chi.order, 1)
        alg = thchi.embed(master) if master % thchi.level == 0 else thchi
        alg = alg * Fraction(2 * cchi, c)
        chibar = chi.conjugate()
        for ell in S:
            if c % ell == 0:
                continue
            r, mm = chibar.value_exponent_mod(ell, cchi) if gcd(ell, cchi) == 1 else (0, 1)
            chl = CycloElem.zeta(master, r * (master // mm))
            if N % ell == 0:
                apl = tate_local(curve, ell, check_minimal=False).ap
                fac = CycloElem.one(master) - chl * Fraction(apl, ell)
            else:
                apl = ap_count(curve, ell)
                fac = CycloElem.one(master) - chl * Fraction(apl, ell) + chl * chl * Fraction(1, ell)
            alg = alg * fac
        # divide by tau_c(chibar) p-adically (it is a unit: p does not divide c)
        taubar = gauss_sum(lift_char(chibar, c), c)
        tau_emb = embed_cyclo_elem(ring, taubar.embed(master) if master % taubar.level == 0 else taubar, zeta_master)
        alg_emb = embed_cyclo_elem(ring, alg, zeta_master)
        comps[chi] = (alg_emb, tau_emb)

    G = field.group
    n = G.order
    coeff = {}
    lr_by_chi = {}
    parts = {}
    for chi in chars:
        lr_by_chi[chi] = log_resolvent(struct, logseries, x, chi, zeta_e, min_surviving)
        alg_emb, tau_emb = comps[chi]
        parts[chi] = alg_emb * tau_emb.inverse() * lr_by_chi[chi]
    # assemble: coeff(g) = (1/n) sum_chi part_chi * chibar(g)
    n_inv_ring = ring.from_rational(Fraction(1, n))
    for g in G.elements:
        acc = ring.zero()
        for chi in chars:
            r, m = chi.conjugate().value_exponent(g)
            chival = zeta_e ** (r * (G.exponent // m))
            acc = acc + parts[chi] * chival
        coeff[g] = acc * n_inv_ring
    # every coefficient must be Frobenius-stable (lies in Q_p at precision)
    kprime = min(v.abs_prec for v in coeff.values())
    for g, v in coeff.items():
        dev = v - v.frobenius()
        if not dev.truncate(min(dev.abs_prec, kprime)).is_zero_at_precision():
            raise AssertionError(
                "assembled coefficient is not Frobenius-stable -- pairing bug"
            )
    # integrality: all coefficients have valuation >= 0 at surviving precision
    integral = all(v.valuation() >= 0 for v in coeff.values())
    kprime = min(kprime, precision)
    if kprime < min_surviving:
        raise PrecisionExhausted(f"surviving precision {kprime} below floor")
    # group-ring element over Z/p^kprime (constant coefficient of each value)
    q = p**kprime
    elem_coeffs = {}
    for g, v in coeff.items():
        vv = v.normalized()
        if vv.vshift > 0:
            # non-integral coefficient: record scaled residue of p^shift * x
            elem_coeffs[g] = None
        else:
            elem_coeffs[g] = vv.truncate(kprime).coeffs[0] % q
    element = (
        GroupRingElem(G, {g: x for g, x in elem_coeffs.items() if x}, q)
        if all(x is not None for x in elem_coeffs.values())
        else None
    )
    # mod-|G| congruences: for every g, sum_chi chi(g) comp_chi = 0 mod |G| Z_p
    # (with p prime to |G| this is the integrality of the chi(g)-weighted sum)
    needed = valuation(n, p) if n > 1 and n % p == 0 else 0
    congruences = {}
    for g in G.elements:
        acc = ring.zero()
        for chi in chars:
            r, m = chi.value_exponent(g)
            chival = zeta_e ** (r * (G.exponent // m))
            acc = acc + parts[chi] * chival
        congruences[G.label(g)] = bool(acc.valuation() >= needed)
    return {
        "element": element,
        "integral": bool(integral),
        "surviving_precision": int(kprime),
        "congruences_mod_G": congruences,
        "coefficients": coeff,
        "embedding_index": embedding_index,
    }
