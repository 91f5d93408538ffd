"""Elementary number theory helpers shared across the package.

Everything here is exact integer arithmetic at desk scale (arguments up to
a few times 10^6); no probabilistic shortcuts.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def modinv(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    return x % m


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin, valid far beyond desk scale
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


@lru_cache(maxsize=None)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((p, e), ...) with p ascending."""
    if n < 0:
        n = -n
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    d = 5
    while d * d <= n:
        for q in (d, d + 2):
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            if e:
                out.append((q, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factor(n)]


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factor(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    out = 1
    for p, e in factor(n):
        out *= (p - 1) * p ** (e - 1)
    return out


def moebius(n: int) -> int:
    m = 1
    for _, e in factor(n):
        if e > 1:
            return 0
        m = -m
    return m


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factor(n))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def crt(residues: list[int], moduli: list[int]) -> int:
    """Solve x = r_i mod m_i for pairwise coprime m_i."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g, s, _ = xgcd(m, mi)
        assert g == 1, "moduli must be coprime"
        x = (x + (r - x) * s % mi * m) % (m * mi)
        m *= mi
    return x


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    """Smallest primitive root mod q, for q an odd prime power or 2 or 4."""
    if q in (2, 4):
        return q - 1
    ps = prime_divisors(q)
    if len(ps) != 1 or ps[0] == 2:
        raise ValueError(f"{q} has no primitive root")
    p = ps[0]
    phi = euler_phi(q)
    qs = prime_divisors(phi)
    for g in range(2, q):
        if g % p == 0:
            continue
        if all(pow(g, phi // r, q) != 1 for r in qs):
            return g
    raise AssertionError("unreachable")


def multiplicative_order(a: int, n: int) -> int:
    if gcd(a, n) != 1:
        raise ValueError("order only defined for units")
    order = euler_phi(n)
    for p in prime_divisors(order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order
