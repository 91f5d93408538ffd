"""Dirichlet characters and Gauss sums."""

from math import gcd, lcm

import pytest

from rbsdlab.arith import CycloElem
from rbsdlab.characters import (
    ConductorNotDividing,
    DirichletChar,
    NotSquarefree,
    enumerate_chars,
    gauss_sum,
    lift_char,
    tau_star,
    trivial_char,
    unramified_char_factor,
)
from rbsdlab.numth import is_squarefree


def test_enumerate_counts():
    assert len(enumerate_chars(1)) == 1
    assert enumerate_chars(1)[0].is_trivial()
    assert len(enumerate_chars(5, even_only=True)) == 2
    chars15 = enumerate_chars(15)
    assert len(chars15) == 8
    assert sorted({c.conductor for c in chars15}) == [1, 3, 5, 15]


def test_parity_and_conductor():
    # quadratic mod 3 is odd, quadratic mod 5 even
    chi3 = [c for c in enumerate_chars(3) if not c.is_trivial()][0]
    assert chi3.parity() == "odd"
    chi5 = [c for c in enumerate_chars(5) if c.order == 2][0]
    assert chi5.is_even()
    # conductors at 8: the even primitive quadratic character exists
    prim8 = [c for c in enumerate_chars(8) if c.conductor == 8 and c.is_even()]
    assert len(prim8) == 1


def test_gauss_sum_quadratic_mod5():
    chi = [c for c in enumerate_chars(5) if c.order == 2][0]
    t = gauss_sum(chi, 5)
    assert t * t == CycloElem.from_rational(t.level, 5)


def test_gauss_sum_trivial_prime():
    for ell in (3, 5, 7, 11):
        t = gauss_sum(trivial_char(ell), ell)
        assert t == CycloElem.from_rational(t.level, -1)


def test_gauss_sum_conductor_check():
    chi = [c for c in enumerate_chars(5) if c.order == 2][0]
    with pytest.raises(ConductorNotDividing):
        gauss_sum(chi, 7)


def test_tau_times_tau_bar_all_primitive_mod24():
    for mod in range(1, 25):
        for chi in enumerate_chars(mod):
            if chi.conductor != mod:
                continue
            t1, t2 = gauss_sum(chi, mod), gauss_sum(chi.conjugate(), mod)
            L = max(t1.level, t2.level)
            sign = chi(-1) if mod > 1 else CycloElem.one(1)
            assert t1.embed(L) * t2.embed(L) == sign.embed(L) * mod


def test_tau_star_primitive_is_plain_gauss_sum():
    chi = [c for c in enumerate_chars(7) if c.order == 3][0]
    t = tau_star(chi, 7)
    g = gauss_sum(chi, 7)
    L = max(t.level, g.level)
    assert t.embed(L) == g.embed(L)


def test_tau_star_trivial_char_prime():
    t = tau_star(trivial_char(5), 5)
    assert t == CycloElem.from_rational(t.level, -1)


def test_tau_star_requires_squarefree():
    with pytest.raises(NotSquarefree):
        tau_star(trivial_char(4), 4)


def test_imprimitive_gauss_identity_small():
    # tau_c(chi) = tau*(chi, c) for even chi mod squarefree c (the acceptance
    # run covers c <= 60; keep a fast spot check here)
    for c in (14, 15, 21, 30):
        for chi in enumerate_chars(c, even_only=True):
            g = gauss_sum(chi, c)
            t = tau_star(chi, c)
            L = max(g.level, t.level)
            assert g.embed(L) == t.embed(L), (c, chi)


def test_gauss_sum_galois_twisting():
    # sigma_t(tau_m(chi)) = chibar^t(t... full twisted equivariance, brute
    for mod in range(3, 25):
        for chi in enumerate_chars(mod):
            if chi.conductor != mod or chi.order > 6:
                continue
            tau = gauss_sum(chi, mod)
            L = tau.level
            for t in range(2, L):
                if gcd(t, L) != 1:
                    continue
                chp = chi**t
                r, mm = chp.value_exponent(pow(t, -1, mod))
                rhs = CycloElem.zeta(L, r * (L // mm)) * gauss_sum(chp, mod).embed(L)
                assert tau.galois(t) == rhs
            break  # one character per modulus keeps this fast


def test_lift_char_roundtrip():
    chi = [c for c in enumerate_chars(7) if c.order == 3][0]
    lifted = lift_char(chi, 21)
    assert lifted.conductor == 7
    assert lifted.order == 3
    # values agree on units of 21
    for a in range(1, 21):
        if gcd(a, 21) == 1:
            assert lifted(a) == chi(a % 7)


def test_unramified_factor_trivial_cases():
    chi = [c for c in enumerate_chars(7) if c.order == 3][0]
    u = unramified_char_factor(chi, 7)  # empty product
    assert u == CycloElem.one(u.level)
