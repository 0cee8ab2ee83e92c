"""PSLQ, LLL and recognition of the zeta(3) form of Y000."""
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from cylimit.numerics import BigComplex, BigFloat
from cylimit.relations import (
    RelationPrecisionError,
    construct_y000,
    detect_zeta3_form,
    find_relation,
    lll_reduce,
    lll_relation,
    pslq,
)


def bf(expr, p=60):
    with mp.workdps(p + 10):
        return BigFloat(mpmath.mpf(expr() if callable(expr) else expr), p)


def test_pslq_one_two():
    assert pslq([bf(1), bf(2)], 100, 40).coeffs == (2, -1)


def test_pslq_pi_pi2_none():
    for p in (50, 100):
        vals = [bf(lambda: mp.pi, p), bf(lambda: mp.pi**2, p)]
        assert pslq(vals, 10**3, p) is None


def test_pslq_zeta3_relation():
    vals = [bf(lambda: 3 * mpmath.zeta(3) - 7), bf(lambda: mpmath.zeta(3)), bf(1)]
    r = pslq(vals, 10**4, 60)
    assert r.coeffs == (1, -3, 7) and r.verified


def test_lll_zeta3_relation():
    vals = [bf(lambda: 3 * mpmath.zeta(3) - 7), bf(lambda: mpmath.zeta(3)), bf(1)]
    assert lll_relation(vals, 10**4, 60).coeffs == (1, -3, 7)


def test_agrees_with_mpmath_pslq():
    with mp.workdps(60):
        xs = [mpmath.log(2), mpmath.log(3), mpmath.log(6)]
        oracle = mpmath.pslq(xs, maxcoeff=100, maxsteps=10**4)
    ours = pslq([bf(x) for x in xs], 100, 50).coeffs
    assert ours in (tuple(oracle), tuple(-a for a in oracle))


def test_four_term_relation():
    mixed = bf(lambda: mp.pi + 2 * mpmath.zeta(3) - mpmath.mpf(1) / 3)
    vals = [bf(lambda: mp.pi), bf(lambda: mpmath.zeta(3)), mixed, bf(1)]
    r = find_relation(vals, 10**3, 60)
    assert r is not None and r.coeffs == (3, 6, -3, -1)


def test_lll_reduce_small_basis():
    red = lll_reduce([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
    assert sorted(sum(x * x for x in r) for r in red)[0] <= 3


def test_precision_guard():
    with pytest.raises(RelationPrecisionError):
        pslq([bf(1), bf(2), bf(3)], 10**20, 40)


def test_detect_example():
    f = detect_zeta3_form(construct_y000(-200, Fraction(25, 12), 80))
    assert f.as_tuple() == (-200, Fraction(25, 12)) and f.verified


def test_detect_rational_input():
    with mp.workdps(90):
        z = BigComplex(mpmath.mpc(mpmath.mpf(7) / 3), 80)
    assert detect_zeta3_form(z).as_tuple() == (0, Fraction(7, 3))


def test_detect_pi_none():
    for p in (80, 160):
        with mp.workdps(p + 10):
            z = BigComplex(mpmath.mpc(mp.pi), p)
        assert detect_zeta3_form(z) is None


def test_detect_contaminated_none():
    with mp.workdps(90):
        z = construct_y000(6, 0, 80).value + mpmath.mpc(0, mp.pi)
        z = BigComplex(z, 80)
    assert detect_zeta3_form(z) is None


def test_detect_requires_digits():
    with pytest.raises(ValueError):
        detect_zeta3_form(construct_y000(1, 0, 40))


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4), st.integers(1, 10**4))
def test_detect_round_trip(chi, num, den):
    r = Fraction(num, den)
    f = detect_zeta3_form(construct_y000(chi, r, 80), max_height=10**4)
    assert f is not None and f.as_tuple() == (chi, r) and f.verified
