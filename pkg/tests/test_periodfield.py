"""The exact field Q(2 pi i, zeta(3)) used by the filtrations."""
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from cylimit.periodfield import P2I, PERIOD_FIELD, ZETA3, PeriodElement

DPS = 40


def close(a, b, dps=DPS - 5):
    with mp.workdps(DPS + 10):
        return abs(a - b) <= mpmath.mpf(10) ** (-dps) * max(1, abs(b))


@st.composite
def elements(draw):
    """Random Laurent polynomials, sometimes divided by a non-monomial polynomial."""
    def poly():
        n = draw(st.integers(1, 3))
        return sum(
            (PeriodElement.monomial(draw(st.integers(-4, 4)), draw(st.integers(0, 2)),
                                    draw(st.fractions(-20, 20, max_denominator=9)))
             for _ in range(n)),
            PERIOD_FIELD(0),
        )

    num = poly()
    if draw(st.booleans()):
        den = poly() + PERIOD_FIELD(draw(st.integers(1, 5))) * P2I ** 2 * ZETA3
        if den != 0:
            return num / den
    return num


def value(x):
    return x.evaluate(DPS)


def test_constants():
    with mp.workdps(DPS):
        assert close(value(P2I), mpmath.mpc(0, 2 * mp.pi))
        assert close(value(ZETA3), mpmath.zeta(3))
    assert PERIOD_FIELD(Fraction(3, 4)).to_fraction() == Fraction(3, 4)
    assert P2I ** 3 / P2I ** 3 == 1


def test_monomial_denominator_folds():
    x = (ZETA3 + P2I) / P2I ** 3
    assert x.is_polynomial()
    assert x.terms() == [((-3, 1), Fraction(1)), ((-2, 0), Fraction(1))]


def test_non_monomial_denominator_and_exact_quotient():
    d = P2I ** 3 + 288 * ZETA3
    x = 1 / d
    assert not x.is_polynomial()
    assert (x * d) == 1 and (x * d).is_polynomial()
    assert ((P2I ** 6 - 288 ** 2 * ZETA3 ** 2) / d) == P2I ** 3 - 288 * ZETA3


def test_conjugation():
    x = Fraction(5, 36) + 40 * ZETA3 / P2I ** 3
    with mp.workdps(DPS):
        assert close(value(x.conjugate()), mpmath.conj(value(x)))
    assert x.conjugate().conjugate() == x


def test_rationality_and_errors():
    assert not (ZETA3 / P2I ** 3).is_rational()
    with pytest.raises(ValueError):
        (ZETA3 + 1).to_fraction()
    with pytest.raises(ZeroDivisionError):
        P2I / PERIOD_FIELD(0)
    with pytest.raises(TypeError):
        P2I + 1.5


def test_printing():
    assert str(PERIOD_FIELD(0)) == "0"
    assert "P" in str(P2I) and "Z" in str(ZETA3)


@settings(max_examples=200, deadline=None)
@given(elements(), elements(), elements())
def test_field_operations_match_numeric_values(a, b, c):
    with mp.workdps(DPS):
        va, vb, vc = value(a), value(b), value(c)
        assert close(value(a + b), va + vb)
        assert close(value(a - c), va - vc)
        assert close(value(a * b), va * vb)
        if b != 0:
            assert close(value(a / b), va / vb)
            assert (a / b) * b == a
    # ring identities hold exactly
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert (a * b) == (b * a)


@settings(max_examples=200, deadline=None)
@given(elements(), elements())
def test_equality_and_hash_are_consistent(a, b):
    assert (a == b) == ((a - b) == 0)
    # the same value in another representation compares and hashes equal
    t = (a * (b * b + 1)) / (b * b + 1)
    assert t == a and hash(t) == hash(a)
