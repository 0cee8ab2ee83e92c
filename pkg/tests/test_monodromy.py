"""Singular points, numeric continuation, monodromy matrices and the integral structure."""
import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from cylimit import linalg as la
from cylimit import monodromy as mono
from cylimit.mirror import J, T_CAN, YCoefficients, build_TK, check_sp4z
from cylimit.numerics import BigComplex, PeriodScalar
from cylimit.picard_fuchs import PFOperator

QUINTIC = PFOperator.quintic()
P = 30


@pytest.fixture(scope="module")
def quintic_data():
    return mono.all_monodromies(QUINTIC, P)


def as_mp(T):
    return mpmath.matrix([[mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in r] for r in T])


# -- singular points -----------------------------------------------------------------


def test_quintic_singularities():
    s = mono.singularities(QUINTIC, 40)
    assert len(s.finite) == 2 and s.includes_infinity
    assert s.finite[0] == 0
    with mp.workdps(50):
        assert abs(s.finite[1] - mpmath.mpf(1) / 3125) < mpmath.mpf(10) ** -45


def test_theta4_singularities():
    s = mono.singularities(PFOperator(((0,), (0,), (0,), (0,), (1,))), 30)
    assert s.finite == (0,)


def test_constructed_singularities():
    op = PFOperator(((0,), (0,), (0,), (0,), (1, -3, 2)))
    s = mono.singularities(op, 30)
    vals = sorted(float(z.real) for z in s.finite)
    assert vals == [0.0, 0.5, 1.0]


# -- continuation ------------------------------------------------------------------------


def test_empty_path_is_identity():
    P0 = mono.continue_along(QUINTIC, mono.ContinuationPath((mpmath.mpf("1e-5"),)), 30)
    assert P0 == mpmath.eye(4)


def test_path_and_reverse_cancel():
    sing = mono.singularities(QUINTIC, P)
    with mp.workdps(P + 30):
        a, b = mpmath.mpc("3e-5"), mpmath.mpc("1e-4", "1e-4")
        path = mono.ContinuationPath.through([a, b], sing)
        fwd = mono.continue_along(QUINTIC, path, P, sing)
        back = mono.continue_along(QUINTIC, path.reversed(), P, sing)
        err = mpmath.mnorm(back * fwd - mpmath.eye(4), 1)
    assert err < mpmath.mpf(10) ** -(P - 2)


def test_precision_self_consistency():
    sing = mono.singularities(QUINTIC, 50)
    with mp.workdps(80):
        path = mono.ContinuationPath.through([mpmath.mpc("3e-5"), mpmath.mpc("2e-4", "1e-4")], sing)
        lo = mono.continue_along(QUINTIC, path, 30, sing)
        hi = mono.continue_along(QUINTIC, path, 50, sing)
        d = max(abs(lo[i, j] - hi[i, j]) / max(1, abs(hi[i, j])) for i in range(4) for j in range(4))
    assert d < mpmath.mpf(10) ** -30


def test_oversized_step_rejected():
    sing = mono.singularities(QUINTIC, P)
    bad = mono.ContinuationPath((mpmath.mpc("1e-5"), mpmath.mpc("3e-4")))
    with pytest.raises(mono.ContinuationError):
        mono.continue_along(QUINTIC, bad, P, sing)


# -- monodromy --------------------------------------------------------------------------


def test_mum_loop_is_t_can(quintic_data):
    assert quintic_data.matrices[0].max_error(T_CAN) < mpmath.mpf(10) ** -(P - 5)


def test_conifold_loop_unipotent_rank_one(quintic_data):
    with mp.workdps(P + 30):
        T = quintic_data.matrices[1].matrix
        N = T - mpmath.eye(4)
        N2 = N * N
        assert max(abs(N2[i, j]) for i in range(4) for j in range(4)) < mpmath.mpf(10) ** -(P - 5)
        sv = mpmath.svd_c(N, compute_uv=False)
        assert sum(1 for s in sv if abs(s) > mpmath.mpf(10) ** -(P // 2)) == 1


def test_product_relation(quintic_data):
    assert quintic_data.relation_error < mpmath.mpf(10) ** -(P - 5)


def test_contractible_loop_is_identity():
    m = mono.monodromy_around(QUINTIC, mpmath.mpc("-1e-4"), precision=P)
    assert m.index is None
    assert m.max_error(la.identity(4)) < mpmath.mpf(10) ** -(P - 5)


def test_monodromy_around_zero_alone():
    m = mono.monodromy_around(QUINTIC, 0, precision=P)
    assert m.max_error(T_CAN) < mpmath.mpf(10) ** -(P - 5)


def test_quintic_integral_structure(quintic_data):
    st = mono.integral_structure(quintic_data.matrices, precision=P)
    assert (st.y.Y111, st.y.Y011, st.y.Y001) == (5, Fraction(1, 2), Fraction(11, 6))
    assert all(check_sp4z(T) for T in st.integral)
    assert st.integral[0] == build_TK(st.y)
    assert mono.is_unit_transvection(st.integral[1])
    # Y111 = 1 also gives integral matrices but fails the transvection filter
    assert any(c.Y111 == 1 for c in st.candidates)


def test_integral_structure_with_hint(quintic_data):
    st = mono.integral_structure(quintic_data.matrices, Y111_hint=5, precision=P)
    assert st.y.Y111 == 5
    with pytest.raises(mono.IntegralStructureError):
        mono.integral_structure(quintic_data.matrices, Y111_hint=7, precision=P)


def test_integral_structure_needs_mum_loop(quintic_data):
    with pytest.raises(mono.IntegralStructureError):
        mono.integral_structure(quintic_data.matrices[1:], precision=P)


# -- synthetic round trips ----------------------------------------------------------------


def random_y(rng, height=100):
    y111 = rng.randint(1, height)
    y011 = Fraction(y111, 2) % 1 + rng.randint(-2, 2)
    y001 = Fraction(y111, 6) % 1 + rng.randint(-2, 2)
    y000 = PeriodScalar(Fraction(rng.randint(-height, height), rng.randint(1, height)),
                        Fraction(rng.randint(-height, height)))
    return YCoefficients(y111, y011, y001, y000)


@pytest.mark.parametrize("seed", range(5))
def test_synthetic_round_trip(seed):
    rng = random.Random(seed)
    y = random_y(rng)
    v = [1] + [rng.randint(-5, 5) for _ in range(3)]
    partner = mono.conifold_partner(v, rng.choice([-1, 1]))
    assert check_sp4z(partner) and mono.is_unit_transvection(partner)
    p = 40
    y_num = YCoefficients(y.Y111, y.Y011, y.Y001, y.Y000.evaluate(p))
    mons = mono.synthetic_monodromies(y_num, [partner], p)
    st = mono.integral_structure(mons, precision=p)
    want = y_num.canonical()
    assert (st.y.Y111, st.y.Y011, st.y.Y001) == (want.Y111, want.Y011, want.Y001)
    with mp.workdps(p):
        assert abs(st.y.Y000.value - want.Y000.value) < mpmath.mpf(10) ** -(p - 10)


def test_random_symplectic_is_symplectic():
    rng = random.Random(1)
    for _ in range(20):
        M = mono.random_symplectic(rng)
        assert check_sp4z(M)


def test_unit_transvection_detection():
    assert mono.is_unit_transvection(mono.conifold_partner([1, 0, 0, 3]))
    assert not mono.is_unit_transvection(mono.conifold_partner([2, 0, 0, 2]))
    assert not mono.is_unit_transvection(la.identity(4))
    T = mono.conifold_partner([0, 1, 2, 0], -1)
    assert la.matmul(la.matmul(la.transpose(T), J), T) == J
