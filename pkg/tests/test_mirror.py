"""Mirror map, prepotential, instanton data and the structure matrices."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylimit import linalg as la
from cylimit.mirror import (
    J,
    T_CAN,
    YCoefficients,
    build_S,
    build_S1,
    build_S2,
    build_TK,
    check_sp4z,
    instanton_expansion,
    instanton_numbers,
    matrix_to_field,
    mirror_map,
    prepotential,
    q_of_phi,
)
from cylimit.numerics import PeriodScalar
from cylimit.picard_fuchs import PFOperator, frobenius_basis
from cylimit.series import TruncSeries, series_compose

QUINTIC = PFOperator.quintic()
THETA4 = PFOperator(((0,), (0,), (0,), (0,), (1,)))


@st.composite
def admissible(draw, with_y000=True):
    y111 = draw(st.integers(1, 100))
    y011 = Fraction(y111, 2) % 1 + draw(st.integers(-3, 3))
    y001 = Fraction(y111, 6) % 1 + draw(st.integers(-3, 3))
    y000 = None
    if with_y000:
        y000 = PeriodScalar(draw(st.fractions(-50, 50, max_denominator=30)),
                            draw(st.fractions(-500, 500, max_denominator=7)))
    lam = draw(st.fractions(1, 5, max_denominator=4))
    return YCoefficients(y111, y011, y001, y000, lam)


# -- structure matrices -------------------------------------------------------


def test_tk_example():
    y = YCoefficients(6, 0, 1)
    assert build_TK(y) == la.matmap(
        la.mat([[1, 0, 0, 0], [-1, 1, 0, 0], [0, -3, 1, 1], [3, -6, 0, 1]]), Fraction
    )


def test_s_example_y111_one():
    y = YCoefficients(1, 0, 0, PeriodScalar())
    S = matrix_to_field(build_S(y))
    expected = matrix_to_field(
        la.matmap(la.mat([[0, 0, 0, Fraction(1, 6)], [0, 0, Fraction(-1, 2), 0], [1, 0, 0, 0], [0, 1, 0, 0]]), Fraction)
    )
    assert S == expected


@settings(max_examples=200, deadline=None)
@given(admissible())
def test_structure_matrix_identities(y):
    TK = build_TK(y)
    assert check_sp4z(TK)
    assert la.matmul(la.matmul(la.transpose(TK), J), TK) == J
    assert la.det(build_S1(y)) == y.Y111**2
    S, S1, S2 = (matrix_to_field(m) for m in (build_S(y), build_S1(y), build_S2(y)))
    assert la.matmul(S1, S2) == S
    # T_Can acts on varpi by rows; T_K = S^-t T_Can S^t on the integral basis
    St = la.transpose(S)
    assert la.matmul(St, matrix_to_field(TK)) == la.matmul(matrix_to_field(T_CAN), St)


def test_non_admissible_y_gives_non_integral_tk():
    y = YCoefficients(5, Fraction(11, 2), Fraction(25, 6))
    assert not y.is_admissible()
    assert not check_sp4z(build_TK(y))


def test_check_sp4z_identity_and_non_integral():
    assert check_sp4z(la.identity(4))
    D = la.matmap(la.mat([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, Fraction(1, 2), 0], [0, 0, 0, 1]]), Fraction)
    assert la.matmul(la.matmul(la.transpose(D), J), D) == J
    assert not check_sp4z(D)


def test_check_sp4z_t_can():
    # T_Can is not symplectic for the standard J; it preserves S^t J S on the varpi basis
    assert not check_sp4z(T_CAN)
    y = YCoefficients(5, Fraction(1, 2), Fraction(11, 6), PeriodScalar.from_chi_r(-200, 0))
    S = matrix_to_field(build_S(y))
    form = la.matmul(la.matmul(la.transpose(S), matrix_to_field(J)), S)
    assert check_sp4z(la.transpose(T_CAN), form)


def test_y_auto_is_admissible():
    for y111 in range(1, 40):
        assert YCoefficients.auto(y111).is_admissible()


def test_y_validation():
    with pytest.raises(ValueError):
        YCoefficients(0, 0, 0)
    with pytest.raises(ValueError):
        YCoefficients(5, 0, 0, lam=0)


# -- mirror map ----------------------------------------------------------------


def test_identity_mirror_map():
    _, phi_of_q = mirror_map(frobenius_basis(THETA4, 10))
    assert phi_of_q == TruncSeries.variable(10, tag=phi_of_q.tag)


def test_quintic_mirror_map_low_order():
    _, phi_of_q = mirror_map(frobenius_basis(QUINTIC, 10))
    assert phi_of_q.coeffs[:3] == (0, 1, -770)
    # undetermined coefficients: phi = q + c q^2, q(phi) = phi exp(f1/f0) = phi (1 + 770 phi + ...)
    assert -phi_of_q.coeffs[2] == 770


def test_mirror_map_reversion():
    basis = frobenius_basis(QUINTIC, 15)
    _, phi_of_q = mirror_map(basis)
    q = q_of_phi(basis)
    comp = series_compose(q, phi_of_q.__class__(phi_of_q.coeffs, q.tag))
    assert list(comp.coeffs) == [0, 1] + [0] * 14


# -- prepotential and instantons -----------------------------------------------


def quintic_md(order, y000=None):
    y = YCoefficients.auto(5, y000)
    return prepotential(frobenius_basis(QUINTIC, order), y)


def test_prepotential_homogeneity_and_cubic_term():
    md = quintic_md(12)
    assert md.special_geometry_ok
    # -d^3F/dt^3 at q = 0 equals Y111
    assert md.yukawa().coeffs[0] == 5


@pytest.mark.parametrize("orders", [(20, 30, 40)])
def test_instanton_stability(orders):
    a = [quintic_md(T).F_np.coeffs[1:6] for T in orders]
    assert a[0] == a[1] == a[2]


def test_quintic_instanton_numbers_integral():
    _, nd = instanton_expansion(quintic_md(12))
    assert all(n.denominator == 1 for n in nd[:10])
    assert abs(nd[0]) == 2875 and abs(nd[1]) == 609250 and abs(nd[2]) == 317206375


def test_li3_inversion():
    T = 12
    A = TruncSeries.from_list([0] + [Fraction(1, n**3) for n in range(1, T + 1)], T)
    nd = instanton_numbers(A)
    assert nd[0] == 1 and all(n == 0 for n in nd[1:])


def test_zero_instanton_series():
    assert all(n == 0 for n in instanton_numbers(TruncSeries.from_list([], 8)))


def test_prepotential_independent_of_lambda():
    basis = frobenius_basis(QUINTIC, 8)
    a = prepotential(basis, YCoefficients.auto(5)).F_np
    b = prepotential(basis, YCoefficients.auto(5, lam=Fraction(7, 3))).F_np
    assert a == b
