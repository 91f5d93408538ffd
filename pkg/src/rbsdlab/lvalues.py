"""Numerical twisted L-values L(A, chi, 1) with rigorous tail bounds.

The central value is computed from the standard two-sum expansion: with
G_chi(t) = sum a_n chi(n) exp(-2 pi n t / (m sqrt(N))) one has

    L(A, chi, 1) = sum_n (a_n chi(n)/n) q^n + w_chi * sum_n (a_n chibar(n)/n) q^n,

q = exp(-2 pi/(m sqrt(N))), w_chi = w(A) chi(N) tau(chi)^2 / m for primitive
even chi of conductor m prime to N.  The root number w(A) is read off
numerically from G(1/t) = w t^2 G(t).

Everything here is floating point (mpmath) with explicit error bounds; the
exact side of every identity lives in the theta/characters modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import mpmath as mp

from .characters import DirichletChar, gauss_sum, lift_char, tau_star, trivial_char
from .elliptic import CurveQ, ap_count, conductor, real_period, tate_local
from .numth import factor, prime_divisors, primes_up_to


class BoundTooLarge(ValueError):
    pass


class ChiNotCoprimeToLevel(ValueError):
    pass


class ToleranceUnreachable(ArithmeticError):
    pass


class ValueVanishes(ArithmeticError):
    pass


class RecognitionFailed(ArithmeticError):
    pass


MAX_COEFFS = 2_000_000


@dataclass(frozen=True)
class LSeriesData:
    curve: CurveQ
    coeffs: tuple[int, ...]  # a_n for 1 <= n <= M at index n (index 0 unused)
    M: int


@dataclass(frozen=True)
class ApproxValue:
    value: object  # mpc/mpf
    error_bound: object  # mpf


@lru_cache(maxsize=32)
def _an_cached(curve: CurveQ, M: int) -> tuple[int, ...]:
    if M > MAX_COEFFS:
        raise BoundTooLarge(f"refusing to expand {M} coefficients")
    N = conductor(curve)
    bad_ap = {p: tate_local(curve, p, check_minimal=False).ap for p in prime_divisors(N)}
    a = [0] * (M + 1)
    if M >= 1:
        a[1] = 1
    # smallest prime factor sieve
    spf = list(range(M + 1))
    for p in primes_up_to(M):
        for k in range(p, M + 1, p):
            if spf[k] == k:
                spf[k] = p
    prime_power = {}
    for p in primes_up_to(M):
        ap = bad_ap[p] if p in bad_ap else ap_count(curve, p)
        pk = p
        prev2, prev1 = 1, ap  # a_{p^0}, a_{p^1}
        while pk <= M:
            prime_power[pk] = prev1
            pk *= p
            if pk <= M:
                if p in bad_ap:
                    nxt = prev1 * ap
                else:
                    nxt = ap * prev1 - p * prev2
                prev2, prev1 = prev1, nxt
    for n in range(2, M + 1):
        p = spf[n]
        pk = p
        rest = n // p
        while rest % p == 0:
            rest //= p
            pk *= p
        a[n] = prime_power[pk] * a[rest] if rest > 1 else prime_power[pk]
    return tuple(a)


def an_coeffs(curve: CurveQ, M: int) -> LSeriesData:
    """Dirichlet coefficients a_n, n <= M, from point counts and the Euler
    product (a_{p^j} recursion; a_p^j at bad primes)."""
    return LSeriesData(curve, _an_cached(curve, M), M)


def truncation_bound(N: int, m: int, digits: int) -> int:
    """Smallest M making the two-sum tail provably < 10^-digits."""
    beta = 2 * mp.pi / (m * mp.sqrt(N))
    tol = mp.mpf(10) ** (-digits)
    M = int(mp.ceil(mp.log(4 / ((1 - mp.e**-beta) * tol)) / beta)) + 4
    return max(M, 16)


def _tail_bound(N: int, m: int, M: int):
    """4 e^{-beta (M+1)} / (1 - e^{-beta}) with beta = 2 pi/(m sqrt N);
    uses |a_n| <= 2n, so |a_n/n| <= 2 per sum, two sums."""
    beta = 2 * mp.pi / (m * mp.sqrt(N))
    return 4 * mp.e ** (-beta * (M + 1)) / (1 - mp.e**-beta)


@lru_cache(maxsize=32)
def root_number(curve: CurveQ, digits: int = 20) -> int:
    """Sign w in Lambda(s) = w Lambda(2-s), detected from the transformation
    G(1/t) = w t^2 G(t) of G(t) = sum a_n exp(-2 pi n t / sqrt(N))."""
    N = conductor(curve)
    with mp.workdps(digits + 15):
        t0 = mp.mpf("1.1")
        M = truncation_bound(N, 1, digits + 6)
        a = _an_cached(curve, M)

        def G(t):
            q = mp.e ** (-2 * mp.pi * t / mp.sqrt(N))
            acc = mp.mpf(0)
            qn = mp.mpf(1)
            for n in range(1, M + 1):
                qn *= q
                if a[n]:
                    acc += a[n] * qn
            return acc

        ratio = G(1 / t0) / (t0 * t0 * G(t0))
        w = 1 if ratio > 0 else -1
        if abs(ratio - w) > mp.mpf(10) ** (-digits // 2):
            raise ToleranceUnreachable(f"root number ratio {ratio} not close to +-1")
        return w


def twisted_lvalue(
    data: LSeriesData,
    chi: DirichletChar,
    truncate_at: tuple[int, ...] = (),
    digits: int = 14,
) -> ApproxValue:
    """L(A, chi, 1) for even chi with conductor prime to N, then multiplied
    by the Euler factors at primes in truncate_at (not dividing the
    conductor of chi) to give the truncated value."""
    curve = data.curve
    N = conductor(curve)
    m = chi.conductor
    if gcd(m, N) != 1:
        raise ChiNotCoprimeToLevel(f"conductor {m} shares a factor with N = {N}")
    if not chi.is_even():
        raise ValueError("only even characters are supported here")
    prim = lift_char(chi, m)
    with mp.workdps(digits + 15):
        M = truncation_bound(N, m, digits + 2)
        if M > data.M:
            data = an_coeffs(curve, M)
        a = data.coeffs
        w = root_number(curve)
        q = mp.e ** (-2 * mp.pi / (m * mp.sqrt(N)))
        # chi(n) lookup for n mod m as complex values
        vals = []
        for r in range(m):
            if m > 1 and gcd(r, m) != 1:
                vals.append(mp.mpc(0))
            else:
                vals.append(prim(r if m > 1 else 1).to_complex(mp))
        s1 = mp.mpc(0)
        s2 = mp.mpc(0)
        qn = mp.mpf(1)
        for n in range(1, M + 1):
            qn *= q
            an = a[n]
            if an:
                ch = vals[n % m]
                t = mp.mpf(an) / n * qn
                s1 += ch * t
                s2 += mp.conj(ch) * t
        tau = gauss_sum(prim, m).to_complex(mp)
        wchi = w * vals[N % m] * tau * tau / m
        val = s1 + wchi * s2
        err = _tail_bound(N, m, M)
        # exact truncation Euler factors (numerically applied here; the exact
        # versions live in theta/padic)
        for ell in truncate_at:
            if m % ell == 0:
                continue
            chl = vals[ell % m] if gcd(ell, m) == 1 else mp.mpc(0)
            if N % ell == 0:
                apl = tate_local(curve, ell, check_minimal=False).ap
                fac = 1 - apl * chl / ell
            else:
                apl = ap_count(curve, ell)
                fac = 1 - apl * chl / ell + chl * chl / ell
            val *= fac
            err *= abs(fac) + mp.mpf(10) ** (-digits - 6)
        return ApproxValue(+val, +err)


def lseries_value(data: LSeriesData, digits: int = 14) -> ApproxValue:
    """L(A, 1) with error bound."""
    return twisted_lvalue(data, trivial_char(1), (), digits)


# ---------------------------------------------------------------------------
# Galois equivariance of L*(A, chi) = L(A, chibar, 1) tau*(Q, chi) / Omega+


def galois_equivariance_check(
    curve: CurveQ,
    orbit: list[DirichletChar],
    digits: int = 14,
    tol: float = 1e-8,
    max_den: int = 10**6,
) -> dict:
    """Numerically verify that L*(A, chi^t) = sigma_t(L*(A, chi)) across a
    Galois orbit of even characters (rank-0 components only).

    Recognizes L*(A, chi) as an exact element of Q(zeta_m) by solving the
    square linear system over the orbit and reconstructing rational
    coordinates, then compares every conjugate exactly-embedded against its
    numerical value.  Returns a report dict with the recognized element.
    """
    from .arith import CycloElem

    if not orbit:
        raise ValueError("empty orbit")
    chi = orbit[0]
    m = chi.order
    ts = [t for t in range(1, m + 1) if gcd(t, m) == 1]
    if len(orbit) != len(ts):
        raise ValueError("orbit must be a full Galois orbit")
    with mp.workdps(digits + 15):
        N = conductor(curve)
        per = real_period(curve, digits + 5)
        data = an_coeffs(curve, truncation_bound(N, chi.conductor, digits + 2))
        values = {}
        for t in ts:
            cht = chi**t
            Lv = twisted_lvalue(data, cht.conjugate(), (), digits)
            if abs(Lv.value) <= 10 * Lv.error_bound:
                raise ValueVanishes(f"twisted value vanishes for {cht}")
            taus = tau_star(cht, cht.modulus).to_complex(mp)
            values[t] = Lv.value * taus / per.omega_plus
        # solve sum_j x_j zeta^(j t) = values[t] for rational x_j
        phi = len(ts)
        zeta = mp.exp(2j * mp.pi / m)
        A = mp.matrix(phi, phi)
        b = mp.matrix(phi, 1)
        for i, t in enumerate(ts):
            for j in range(phi):
                A[i, j] = zeta ** (j * t)
            b[i] = values[t]
        x = mp.lu_solve(A, b)
        coords = []
        for j in range(phi):
            xi = x[j]
            if abs(xi.imag) > tol:
                raise RecognitionFailed(f"coordinate {j} not real: {xi}")
            fr = mp.mpf(xi.real)
            from fractions import Fraction

            cand = Fraction(float(fr)).limit_denominator(max_den)
            if abs(float(cand) - float(fr)) > tol:
                raise RecognitionFailed(f"coordinate {j} = {fr} not a small rational")
            coords.append(cand)
        elem = CycloElem(m, coords)
        # exact conjugates vs numerical values
        max_dev = mp.mpf(0)
        for t in ts:
            dev = abs(elem.galois(t).to_complex(mp) - values[t])
            max_dev = max(max_dev, dev)
        return {
            "passed": bool(max_dev < tol),
            "recognized": elem,
            "max_deviation": float(max_dev),
            "orbit_size": phi,
        }
