"""Independent reference computations for elliptic-curve fixtures.

Deliberately different algorithms from the primary package: point counts go
through Legendre-symbol sums (sympy), torsion through a self-contained
Lutz-Nagell search, real periods through numerical quadrature (mpmath.quad),
L(E,1) through the symmetrized smoothed series with locally computed
coefficients, and modular dimensions through the genus formula.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import sympy
from sympy import divisors, factorint, legendre_symbol, primerange


def b_invariants(ainvs):
    a1, a2, a3, a4, a6 = ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def c_invariants(ainvs):
    b2, b4, b6, _ = b_invariants(ainvs)
    return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6


def discriminant(ainvs):
    b2, b4, b6, b8 = b_invariants(ainvs)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def ap_via_character_sum(ainvs, ell: int) -> int:
    """a_l = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6) for odd good l, via the
    Legendre symbol; direct count at l = 2."""
    disc = discriminant(ainvs)
    assert disc % ell != 0, "good reduction required"
    if ell == 2:
        a1, a2, a3, a4, a6 = ainvs
        count = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    count += 1
        return 3 - count
    b2, b4, b6, _ = b_invariants(ainvs)
    total = 0
    for x in range(ell):
        v = (((4 * x + b2) * x + 2 * b4) * x + b6) % ell
        total += int(legendre_symbol(v, ell)) if v else 0
    return -total


def reduction_semistable(ainvs, ell: int) -> dict:
    """Reduction data at a bad prime of a semistable curve (multiplicative
    reduction only; raises otherwise)."""
    disc = discriminant(ainvs)
    n = int(sympy.multiplicity(ell, disc))
    assert n > 0
    c4, _ = c_invariants(ainvs)
    if c4 % ell == 0:
        raise NotImplementedError("harness only certifies semistable reduction")
    # split iff the tangent directions at the node are rational
    a1, a2 = ainvs[0], ainvs[1]
    x0, y0 = _singular_point(ainvs, ell)
    disc_t = (a1 * a1 + 4 * (a2 + 3 * x0)) % ell
    if ell == 2:
        split = any((t * t + a1 * t - (a2 + 3 * x0)) % 2 == 0 for t in range(2))
    else:
        split = disc_t == 0 or legendre_symbol(disc_t, ell) == 1
    if split:
        return {
            "kodaira": f"I{n}",
            "tamagawa": n,
            "kind": "split-mult",
            "ap": 1,
            "conductor_exponent": 1,
        }
    return {
        "kodaira": f"I{n}",
        "tamagawa": 2 if n % 2 == 0 else 1,
        "kind": "nonsplit-mult",
        "ap": -1,
        "conductor_exponent": 1,
    }


def _singular_point(ainvs, p):
    a1, a2, a3, a4, a6 = ainvs
    for x in range(p):
        for y in range(p):
            f = (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p
            fx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % p
            fy = (2 * y + a1 * x + a3) % p
            if f == 0 and fx == 0 and fy == 0:
                return x, y
    raise ArithmeticError("no singular point")


def conductor_semistable(ainvs) -> int:
    disc = abs(discriminant(ainvs))
    N = 1
    for ell in factorint(disc):
        N *= ell  # multiplicative at every bad prime
    return N


# ---------------------------------------------------------------------------
# torsion (self-contained Lutz-Nagell on the -27c4/-54c6 model)


def torsion_order(ainvs) -> int:
    c4, c6 = c_invariants(ainvs)
    A, B = -27 * c4, -54 * c6
    disc = -16 * (4 * A**3 + 27 * B * B)
    pts = set()
    ycands = [0]
    for d in divisors(abs(disc)):
        if (d * d) and abs(disc) % (d * d) == 0:
            ycands.append(d)
    for y in ycands:
        const = B - y * y
        for x in _int_roots_cubic(A, const):
            for yy in {y, -y}:
                P = (Fraction(x), Fraction(yy))
                if yy * yy == x**3 + A * x + B and _order_divides_12(A, P):
                    pts.add(P)
    return 1 + len(pts)


def _int_roots_cubic(A, const):
    roots = set()
    if const == 0:
        roots.add(0)
        if A <= 0:
            r = sympy.integer_nthroot(-A, 2)
            if r[1]:
                roots.update({r[0], -r[0]})
        return roots
    for d in divisors(abs(const)):
        for x in (d, -d):
            if x**3 + A * x + const == 0:
                roots.add(x)
    return roots


def _order_divides_12(A, P):
    acc = P
    for _ in range(12):
        if acc is None:
            return True
        acc = _add(A, acc, P)
    return acc is None


def _add(A, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == -y2:
            return None
        lam = (3 * x1 * x1 + A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


# ---------------------------------------------------------------------------
# periods by quadrature


def real_period_quad(ainvs, digits: int = 30):
    """(omega_plus, omega_minus, c_infty) by numerical integration of
    2 dx / sqrt(4 (x - e1)(x - e2)(x - e3)) in factored form (the vanishing
    root is cancelled symbolically, so the integrand is smooth)."""
    with mp.workdps(digits + 12):
        b2, b4, b6, _ = b_invariants(ainvs)
        roots = mp.polyroots(
            [mp.mpf(4), mp.mpf(b2), mp.mpf(2 * b4), mp.mpf(b6)], maxsteps=300, extraprec=150
        )
        eps = mp.mpf(10) ** (-(digits + 2))
        reals = sorted([r.real for r in roots if abs(r.imag) < eps * (1 + abs(r))], reverse=True)
        disc = discriminant(ainvs)
        e1 = reals[0]
        others = sorted((r for r in roots if abs(r - e1) > eps * (1 + abs(r))), key=lambda z: z.real)

        def g_plus(t):
            x = e1 + t * t
            prod = (x - others[0]) * (x - others[1])
            return 2 / mp.sqrt(prod.real)

        # split where the path x = e1 + t^2 passes closest to the other
        # roots (sharp features for near-real complex pairs)
        breaks = {mp.mpf(1)}
        for r in others:
            if r.real > e1:
                breaks.add(mp.sqrt(r.real - e1))
        omega_plus = mp.quad(g_plus, [0] + sorted(breaks) + [mp.inf])
        if disc > 0:
            e1r, e2r, e3r = reals
            # omega_minus: int of 2 dx / sqrt(-quartic) over the gap (e2, e1),
            # with x = e2 + (e1 - e2) sin^2 theta smoothing both endpoints
            def g_minus(theta):
                x = e2r + (e1r - e2r) * mp.sin(theta) ** 2
                return 2 / mp.sqrt(x - e3r)

            omega_minus = mp.quad(g_minus, [0, mp.pi / 2])
            c_inf = 2
        else:
            def g_minus(t):
                x = e1 - t * t
                prod = (x - others[0]) * (x - others[1])
                return 2 / mp.sqrt(prod.real)

            breaks = {mp.mpf(1)}
            for r in others:
                if r.real < e1:
                    breaks.add(mp.sqrt(e1 - r.real))
            omega_minus = mp.quad(g_minus, [0] + sorted(breaks) + [mp.inf])
            c_inf = 1
        return +omega_plus.real, +abs(omega_minus), c_inf


# ---------------------------------------------------------------------------
# L(E, 1) by the smoothed symmetrized series


def an_table(ainvs, M: int) -> list[int]:
    N = conductor_semistable(ainvs)
    a = [0] * (M + 1)
    a[1] = 1
    app = {}
    for ell in primerange(2, M + 1):
        if N % ell == 0:
            app[ell] = reduction_semistable(ainvs, ell)["ap"]
        else:
            app[ell] = ap_via_character_sum(ainvs, ell)
    for n in range(2, M + 1):
        f = factorint(n)
        ell, e = next(iter(f.items()))
        pk = ell**e
        rest = n // pk
        if rest > 1:
            a[n] = a[pk] * a[rest]
            continue
        if e == 1:
            a[n] = app[ell]
        elif N % ell == 0:
            a[n] = app[ell] ** e
        else:
            a[n] = app[ell] * a[pk // ell] - ell * a[pk // ell**2]
    return a


def lvalue_smoothed(ainvs, digits: int = 25):
    """L(E, 1) by L = sum (a_n/n)(1 + w) exp(-2 pi n / sqrt(N)); the sign w
    is detected from the lattice-sum transformation."""
    N = conductor_semistable(ainvs)
    with mp.workdps(digits + 12):
        beta = 2 * mp.pi / mp.sqrt(N)
        M = int(mp.ceil((digits + 8) * mp.log(10) / beta)) + 20
        a = an_table(ainvs, M)

        def G(t):
            q = mp.e ** (-beta * t)
            acc, qn = mp.mpf(0), mp.mpf(1)
            for n in range(1, M + 1):
                qn *= q
                if a[n]:
                    acc += a[n] * qn
            return acc

        t0 = mp.mpf("1.15")
        w = 1 if G(1 / t0) / (t0 * t0 * G(t0)) > 0 else -1
        val = mp.mpf(0)
        q = mp.e**-beta
        qn = mp.mpf(1)
        for n in range(1, M + 1):
            qn *= q
            if a[n]:
                val += mp.mpf(a[n]) / n * qn
        return (1 + w) * val, w


def sha_analytic(ainvs, digits: int = 20):
    """Analytic Sha order from the BSD quotient (rank-0 curves)."""
    L, w = lvalue_smoothed(ainvs, digits)
    if w != 1:
        return None
    with mp.workdps(digits + 10):
        om_p, _, c_inf = real_period_quad(ainvs, digits)
        omega_bsd = c_inf * om_p
        tor = torsion_order(ainvs)
        tam = 1
        for ell in factorint(abs(discriminant(ainvs))):
            tam *= reduction_semistable(ainvs, ell)["tamagawa"]
        sha = L / omega_bsd * tor * tor / tam
        return +sha


# ---------------------------------------------------------------------------
# modular dimensions via the genus formula


def genus_X0(N: int) -> int:
    mu = N
    for p in factorint(N):
        mu = mu // p * (p + 1)
    if N == 1:
        return 0
    nu2 = 0 if N % 4 == 0 else _count_nu(N, 2)
    nu3 = 0 if N % 9 == 0 else _count_nu(N, 3)
    nuinf = sum(sympy.totient(sympy.gcd(d, N // d)) for d in divisors(N))
    g = 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nuinf, 2)
    assert g.denominator == 1
    return int(g)


def _count_nu(N: int, kind: int) -> int:
    out = 1
    for p, e in factorint(N).items():
        if kind == 2:
            loc = (1 if e == 1 else 0) if p == 2 else (2 if p % 4 == 1 else 0)
        else:
            loc = (1 if e == 1 else 0) if p == 3 else (2 if p % 3 == 1 else 0)
        out *= loc
        if out == 0:
            return 0
    return out
