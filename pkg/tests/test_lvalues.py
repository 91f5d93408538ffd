"""Numerical L-values, root numbers, equivariance."""

from pathlib import Path

import mpmath as mp
import pytest

from rbsdlab import elliptic as ell
from rbsdlab import fixtures as fx
from rbsdlab import lvalues as lv
from rbsdlab.characters import enumerate_chars, trivial_char

FIXDIR = Path(__file__).resolve().parents[1] / "fixtures"


def test_an_multiplicativity():
    data = lv.an_coeffs(ell.curve("37a1"), 100)
    a = data.coeffs
    assert a[1] == 1
    assert a[4] == a[2] ** 2 - 2  # good prime-power recursion at 2
    assert a[6] == a[2] * a[3]
    assert a[37 * 2] == a[37] * a[2]
    data11 = lv.an_coeffs(ell.curve("11a1"), 50)
    assert data11.coeffs[6] == data11.coeffs[2] * data11.coeffs[3] == 2
    # bad prime powers: a_{11^2} = a_11^2
    data11b = lv.an_coeffs(ell.curve("11a1"), 125)
    assert data11b.coeffs[121] == data11b.coeffs[11] ** 2


def test_root_numbers():
    assert lv.root_number(ell.curve("11a1")) == 1
    assert lv.root_number(ell.curve("37a1")) == -1
    assert lv.root_number(ell.curve("43a1")) == -1


def test_lvalue_11a1():
    data = lv.an_coeffs(ell.curve("11a1"), 2000)
    L = lv.lseries_value(data, digits=14)
    with mp.workdps(25):
        assert abs(L.value - mp.mpf("0.2538418608559106843377589233")) < 1e-12
    assert L.error_bound < 1e-14


def test_lvalue_37a1_vanishes():
    data = lv.an_coeffs(ell.curve("37a1"), 2000)
    L = lv.lseries_value(data, digits=14)
    assert abs(L.value) < 1e-10


def test_lvalues_against_fixtures():
    doc = fx.load("lvalue", str(FIXDIR))
    for lab, rec in doc["data"].items():
        cur = ell.curve(lab)
        data = lv.an_coeffs(cur, lv.truncation_bound(ell.conductor(cur), 1, 16))
        L = lv.lseries_value(data, digits=16)
        with mp.workdps(30):
            assert abs(L.value - mp.mpf(rec["L1"])) < 1e-12, lab
        assert lv.root_number(cur) == rec["root_number"]


def test_twist_conjugate_symmetry():
    cur = ell.curve("11a1")
    data = lv.an_coeffs(cur, 3000)
    chi = [c for c in enumerate_chars(7, even_only=True) if c.order == 3][0]
    L1 = lv.twisted_lvalue(data, chi, (), 12)
    L2 = lv.twisted_lvalue(data, chi.conjugate(), (), 12)
    assert abs(L1.value - mp.conj(L2.value)) < 1e-10


def test_twist_coprimality_guard():
    cur = ell.curve("11a1")
    data = lv.an_coeffs(cur, 100)
    chi = [c for c in enumerate_chars(11) if not c.is_trivial()][0]
    with pytest.raises(lv.ChiNotCoprimeToLevel):
        lv.twisted_lvalue(data, chi, (), 10)


def test_error_bound_is_upper_bound():
    # doubling M never moves the value by more than the previous bound
    cur = ell.curve("43a1")
    chi = [c for c in enumerate_chars(5, even_only=True) if not c.is_trivial()][0]
    M = lv.truncation_bound(43, 5, 8)
    v1 = lv.twisted_lvalue(lv.an_coeffs(cur, M), chi, (), 8)
    v2 = lv.twisted_lvalue(lv.an_coeffs(cur, 2 * M), chi, (), 16)
    assert abs(v1.value - v2.value) <= v1.error_bound


def test_truncated_euler_factor():
    cur = ell.curve("11a1")
    data = lv.an_coeffs(cur, 3000)
    chi = trivial_char(1)
    plain = lv.twisted_lvalue(data, chi, (), 12)
    trunc = lv.twisted_lvalue(data, chi, (3,), 12)
    a3 = ell.ap_count(cur, 3)
    factor = 1 - mp.mpf(a3) / 3 + mp.mpf(1) / 3
    assert abs(trunc.value - plain.value * factor) < 1e-10


def test_equivariance_quadratic():
    cur = ell.curve("11a1")
    chi = [c for c in enumerate_chars(5, even_only=True) if not c.is_trivial()][0]
    res = lv.galois_equivariance_check(cur, chi.galois_orbit(), digits=14)
    assert res["passed"]
    assert res["orbit_size"] == 1
    assert res["recognized"].is_rational()


def test_equivariance_cubic_mod7():
    cur = ell.curve("11a1")
    chi = [c for c in enumerate_chars(7, even_only=True) if c.order == 3][0]
    res = lv.galois_equivariance_check(cur, chi.galois_orbit(), digits=14)
    assert res["passed"]
    assert res["orbit_size"] == 2
    assert res["max_deviation"] < 1e-8


def test_equivariance_vanishing_guard():
    cur = ell.curve("37a1")  # L(37a1, 1) = 0: trivial-character orbit vanishes
    with pytest.raises(lv.ValueVanishes):
        lv.galois_equivariance_check(cur, [trivial_char(1)], digits=12)


def test_wrong_root_number_fails_interpolation(f11):
    """Negative control: flipping the sign in the two-sum expansion must
    break the interpolation consistency by a visible margin."""
    from rbsdlab import theta as th
    from rbsdlab.characters import gauss_sum, lift_char
    from rbsdlab.numth import prime_divisors

    cur = ell.curve("11a1")
    chi = [c for c in enumerate_chars(5, even_only=True) if not c.is_trivial()][0]
    data = lv.an_coeffs(cur, lv.truncation_bound(11, 5, 16))
    good = lv.twisted_lvalue(data, chi.conjugate(), (), 14)
    # recompute the two-sum with the wrong sign of w
    with mp.workdps(25):
        m = chi.conductor
        M = lv.truncation_bound(11, m, 16)
        a = lv.an_coeffs(cur, M).coeffs
        prim = lift_char(chi.conjugate(), m)
        from math import gcd

        q = mp.e ** (-2 * mp.pi / (m * mp.sqrt(11)))
        vals = [prim(r).to_complex(mp) if gcd(r, m) == 1 else mp.mpc(0) for r in range(m)]
        s1 = s2 = mp.mpc(0)
        qn = mp.mpf(1)
        for n in range(1, M + 1):
            qn *= q
            if a[n]:
                ch = vals[n % m]
                t = mp.mpf(a[n]) / n * qn
                s1 += ch * t
                s2 += mp.conj(ch) * t
        tau = gauss_sum(prim, m).to_complex(mp)
        w = lv.root_number(cur)
        wrong = s1 + (-w) * vals[11 % m] * tau * tau / m * s2
        assert abs(wrong - good.value) > 1e-3  # the flip visibly moves the value
        # and breaks the exact interpolation identity
        theta5 = th.theta_element(f11, 5)
        comp = th.character_component(theta5, chi).to_complex(mp)
        per = ell.real_period(cur, 20)
        rhs_wrong = wrong * gauss_sum(chi, 5).to_complex(mp) / (2 * per.omega_plus)
        assert abs(comp - rhs_wrong) > 1e-3
