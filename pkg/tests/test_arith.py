"""Exact cyclotomic arithmetic."""

import random
from fractions import Fraction
from math import gcd

import pytest

from rbsdlab.arith import CycloElem, LevelMismatch, NotCoprime, NotDivisible, cyclotomic_poly


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    # prime p: 1 + x + ... + x^(p-1)
    assert cyclotomic_poly(7) == tuple([1] * 7)


def test_zeta4_squared_is_minus_one():
    z = CycloElem.zeta(4)
    assert z * z == CycloElem.from_rational(4, -1)


def test_phi5_relation():
    z = CycloElem.zeta(5)
    assert z**3 * z**2 == 1
    assert z**2 * z**2 == -(CycloElem.one(5) + z + z**2 + z**3)


def test_inverse_of_one_plus_zeta3():
    z = CycloElem.zeta(3)
    inv = (1 + z).inverse()
    assert inv * (1 + z) == CycloElem.one(3)
    assert inv == -z  # brute check: (1+z)(-z) = -z - z^2 = 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CycloElem.zero(5).inverse()


def test_level_mismatch():
    with pytest.raises(LevelMismatch):
        CycloElem.zeta(3) * CycloElem.zeta(4)


def test_galois_basics():
    z = CycloElem.zeta(3)
    assert z.galois(2) == z**2
    a = CycloElem(5, [1, 2, 3, 4])
    assert a.galois(1) == a
    with pytest.raises(NotCoprime):
        CycloElem.zeta(6).galois(2)


def test_galois_composition():
    rng = random.Random(7)
    for n in (5, 8, 12, 15):
        a = CycloElem(n, [Fraction(rng.randrange(-4, 5)) for _ in range(len(CycloElem.zero(n).coeffs))])
        units = [t for t in range(1, n) if gcd(t, n) == 1]
        for _ in range(4):
            s, t = rng.choice(units), rng.choice(units)
            assert a.galois(t).galois(s) == a.galois((s * t) % n)


def test_embed_zeta3_to_level6():
    e = CycloElem.zeta(3).embed(6)
    assert e**3 == CycloElem.one(6)
    assert e != CycloElem.one(6)
    with pytest.raises(NotDivisible):
        CycloElem.zeta(4).embed(6)


def test_embed_galois_compatibility():
    # embed then galois = galois then embed under the index correspondence
    rng = random.Random(11)
    n, m = 5, 15
    a = CycloElem(n, [Fraction(rng.randrange(-3, 4)) for _ in range(4)])
    for t in (2, 4, 8, 13):
        if gcd(t, m) != 1:
            continue
        lhs = a.embed(m).galois(t)
        rhs = a.galois(t % n).embed(m)
        assert lhs == rhs


def test_ring_axioms_random_levels():
    rng = random.Random(2024)
    for n in (12, 20, 36, 60):
        phi = len(CycloElem.zero(n).coeffs)

        def rand():
            return CycloElem(n, [Fraction(rng.randrange(-9, 10), rng.choice([1, 1, 2])) for _ in range(phi)])

        for _ in range(3):
            a, b, c = rand(), rand(), rand()
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


def test_norm_is_rational():
    rng = random.Random(5)
    for n in (7, 12, 16):
        phi = len(CycloElem.zero(n).coeffs)
        a = CycloElem(n, [Fraction(rng.randrange(-3, 4)) for _ in range(phi)])
        nrm = a.norm()  # raises if not rational
        assert isinstance(nrm, Fraction)
        # norm is multiplicative on a spot-check
        b = CycloElem(n, [Fraction(rng.randrange(-3, 4)) for _ in range(phi)])
        assert (a * b).norm() == a.norm() * b.norm()


def test_complex_embedding_consistency():
    import mpmath as mp

    z = CycloElem.zeta(5)
    val = z.to_complex(mp)
    assert abs(val - mp.exp(2j * mp.pi / 5)) < 1e-12
