"""Operators, indicial polynomials, Frobenius basis and exact annihilation."""
import json
from fractions import Fraction
from math import factorial

import pytest

from cylimit.picard_fuchs import (
    OperatorError,
    PFOperator,
    apply,
    data_path,
    frobenius_basis,
    indicial_polynomial,
    is_mum,
    load_operator,
)
from cylimit.series import LogSeries, TruncSeries

QUINTIC = PFOperator.quintic()


def poly_from_roots(roots):
    p = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            nxt[i + 1] += c
            nxt[i] -= r * c
        p = nxt
    return tuple(p)


def test_quintic_indicial_at_zero():
    assert indicial_polynomial(QUINTIC, 0) == (0, 0, 0, 0, 1)


def test_quintic_indicial_at_conifold():
    assert indicial_polynomial(QUINTIC, Fraction(1, 5**5)) == poly_from_roots([0, 1, 1, 2])


def test_quintic_indicial_at_infinity():
    fifths = [Fraction(k, 5) for k in range(1, 5)]
    assert indicial_polynomial(QUINTIC, "infinity") == poly_from_roots(fifths)


def test_theta4_is_mum():
    op = PFOperator(((0,), (0,), (0,), (0,), (1,)))
    assert indicial_polynomial(op, 0) == (0, 0, 0, 0, 1)
    assert is_mum(op)


def test_theta4_minus_phi_theta2_is_mum():
    assert is_mum(PFOperator(((0,), (0,), (0, -1), (0,), (1,))))


def test_non_mum_counterexample():
    # theta^2 (theta - 1)^2 = theta^4 - 2 theta^3 + theta^2
    op = PFOperator(((0,), (0,), (1,), (-2,), (1,)))
    assert indicial_polynomial(op, 0) == poly_from_roots([0, 0, 1, 1])
    assert not is_mum(op)


def test_quintic_is_mum():
    assert is_mum(QUINTIC)


def test_f0_matches_multinomial_oracle():
    basis = frobenius_basis(QUINTIC, 20)
    direct = [Fraction(factorial(5 * n), factorial(n) ** 5) for n in range(21)]
    assert list(basis.f[0].coeffs) == direct
    assert basis.f[0].coeffs[:3] == (1, 120, 113400)


def test_normalization():
    basis = frobenius_basis(QUINTIC, 10)
    assert basis.f[0].coeffs[0] == 1
    assert all(basis.f[k].coeffs[0] == 0 for k in (1, 2, 3))


@pytest.mark.parametrize("k", range(4))
def test_quintic_annihilation(k):
    basis = frobenius_basis(QUINTIC, 30)
    assert apply(QUINTIC, basis.rational_period(k)).is_zero()


def test_theta4_on_log4():
    # operators are order four, so the first-order example becomes theta^4 l^4 = 24
    op = PFOperator(((0,), (0,), (0,), (0,), (1,)))
    assert apply(op, LogSeries.log_power(4, 6)) == LogSeries((TruncSeries.constant(Fraction(24), 6),))


def test_apply_to_non_solution():
    assert not apply(QUINTIC, LogSeries.log_power(1, 10)).is_zero()


def test_hypergeometric_constructor_matches_quintic_file():
    assert load_operator(data_path("quintic.json")).R == QUINTIC.R


def test_dict_round_trip():
    assert PFOperator.from_dict(QUINTIC.to_dict()).R == QUINTIC.R


def test_d_form_round_trip():
    assert PFOperator.from_d_form(QUINTIC.to_d_form()).R == QUINTIC.R


def test_operator_errors(tmp_path):
    with pytest.raises(OperatorError):
        PFOperator.from_dict({"theta_coefficients": [[1]]})
    with pytest.raises(OperatorError):
        PFOperator(((1,), (0,), (0,), (0,), (0,)))
    bad = tmp_path / "op.json"
    bad.write_text('{"theta_coefficients": [\n1,]}')
    with pytest.raises(OperatorError, match="line 2"):
        PFOperator.from_file(bad)


def test_bundled_file_is_valid_json():
    d = json.loads(data_path("quintic.json").read_text())
    assert d["description"]
