"""Truncated power series and log series."""
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylimit.series import (
    LogSeries,
    SeriesError,
    TruncSeries,
    derivative,
    logseries_theta,
    series_compose,
    series_compose_naive,
    series_exp,
    series_inverse,
    series_log,
    series_mul,
    series_revert,
    theta,
)

T = 8
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def series(order=T, unit=False, zero_const=False):
    def build(cs):
        cs = list(cs)
        if zero_const:
            cs[0] = Fraction(0)
        if unit and cs[0] == 0:
            cs[0] = Fraction(1)
        return TruncSeries.from_list(cs, order)

    return st.lists(fractions, min_size=order + 1, max_size=order + 1).map(build)


def revertible(order=T):
    def build(cs):
        cs = [Fraction(0)] + list(cs)
        if cs[1] == 0:
            cs[1] = Fraction(1)
        return TruncSeries.from_list(cs, order)

    return st.lists(fractions, min_size=order, max_size=order).map(build)


def naive_mul(a, b):
    """Oracle: schoolbook product written out independently."""
    n = a.order
    return [sum((a.coeffs[i] * b.coeffs[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)]


def one(order=T):
    return TruncSeries.constant(Fraction(1), order)


def x(order=T):
    return TruncSeries.variable(order)


# -- examples -------------------------------------------------------------------


def test_difference_of_squares():
    p = one(5) + x(5)
    m = one(5) - x(5)
    assert (p * m).coeffs == (1, 0, -1, 0, 0, 0)


def test_geometric_times_one_minus_x():
    assert (TruncSeries.geometric(8) * (one(8) - x(8))) == one(8)


def test_inverse_of_one_plus_x():
    assert series_inverse(one(6) + x(6)).coeffs == tuple((-1) ** n for n in range(7))


def test_inverse_of_constant():
    assert series_inverse(TruncSeries.constant(Fraction(2), 4)).coeffs == (Fraction(1, 2), 0, 0, 0, 0)


def test_inverse_needs_unit():
    with pytest.raises(SeriesError):
        series_inverse(x(4))


def test_compose_geometric():
    assert series_compose(TruncSeries.geometric(10), x(10)) == TruncSeries.geometric(10)


def test_exp_log_one_plus_x():
    assert series_exp(series_log(one(12) + x(12))) == one(12) + x(12)


def test_exp_coefficients():
    assert series_exp(x(10)).coeffs == tuple(Fraction(1, factorial(n)) for n in range(11))


def test_exp_zero():
    assert series_exp(TruncSeries.constant(Fraction(0), 5)) == one(5)


def test_revert_identity():
    assert series_revert(x(7)) == x(7)


def test_revert_x_plus_x2():
    # undetermined coefficients: t = s + s^2 solved order by order gives Catalan numbers
    s = series_revert(x(6) + x(6) * x(6))
    brute = [Fraction(0)] * 7
    brute[1] = Fraction(1)
    for n in range(2, 7):
        trial = TruncSeries.from_list(brute, 6)
        err = (trial + trial * trial).coeffs[n]
        brute[n] = -err
    assert list(s.coeffs) == brute
    assert s.coeffs[:5] == (0, 1, -1, 2, -5)


def test_theta_examples():
    assert theta(TruncSeries.constant(Fraction(7), 5)).is_zero()
    xn = TruncSeries.from_list([0, 0, 0, 1], 5)
    assert theta(xn) == xn.map(lambda c: 3 * c)


def test_logseries_theta_examples():
    l1 = LogSeries.log_power(1, 5)
    l2 = LogSeries.log_power(2, 5)
    assert logseries_theta(l1) == LogSeries.log_power(0, 5)
    two_l = LogSeries((TruncSeries.from_list([], 5), TruncSeries.constant(Fraction(2), 5)))
    assert logseries_theta(l2) == two_l


def test_mixed_orders_truncate_to_smaller():
    assert (x(3) + x(4)).order == 3


def test_mixed_variables_rejected():
    with pytest.raises(SeriesError):
        x(3) + TruncSeries.variable(3, tag="q")


def test_compose_horner_vs_naive_order_30():
    a = TruncSeries.from_list([Fraction(k + 1, k + 2) for k in range(31)], 30)
    b = TruncSeries.from_list([0] + [Fraction((-1) ** k, k + 1) for k in range(30)], 30)
    assert series_compose(a, b) == series_compose_naive(a, b)


# -- property suites (>= 200 cases each) -------------------------------------------

PROP = settings(max_examples=200, deadline=None)


@PROP
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * one() == a
    assert a - a == TruncSeries.constant(Fraction(0), T)


@PROP
@given(series(), series())
def test_product_matches_schoolbook(a, b):
    assert list(series_mul(a, b).coeffs) == naive_mul(a, b)


@PROP
@given(series(unit=True))
def test_inverse_property(a):
    assert a * series_inverse(a) == one()


@PROP
@given(revertible())
def test_revert_compose_inversion(a):
    r = series_revert(a)
    assert series_compose(a, r) == x()
    assert series_compose(r, a) == x()


@PROP
@given(series(), revertible())
def test_compose_algorithms_agree(a, b):
    assert series_compose(a, b) == series_compose_naive(a, b)


@PROP
@given(series(), series())
def test_theta_leibniz(f, g):
    assert theta(f * g) == theta(f) * g + f * theta(g)


@PROP
@given(series(zero_const=True))
def test_log_exp_inverse(a):
    assert series_log(series_exp(a)) == a


@PROP
@given(series())
def test_theta_is_x_times_derivative(a):
    d = derivative(a)
    assert theta(a).coeffs[1:] == d.coeffs[: T]
