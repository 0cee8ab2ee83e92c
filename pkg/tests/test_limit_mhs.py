"""Weight filtrations, the limit MHS, its splitting, duals and extension classes."""
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from cylimit import limit_mhs as lm
from cylimit import linalg as la
from cylimit.mirror import YCoefficients
from cylimit.numerics import P2I, BigComplex, PeriodScalar, to_field
from cylimit.picard_fuchs import PFOperator, frobenius_basis

BASIS = frobenius_basis(PFOperator.quintic(), 8)
PROP = settings(max_examples=200, deadline=None)


# -- helpers ----------------------------------------------------------------------


def jordan(sizes):
    n = sum(sizes)
    M = [[Fraction(0)] * n for _ in range(n)]
    o = 0
    for s in sizes:
        for i in range(s - 1):
            M[o + i][o + i + 1] = Fraction(1)
        o += s
    return la.mat(M)


def unimodular(rng, n, steps=4):
    A = la.identity(n)
    if n < 2:
        return A
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        E = [list(r) for r in la.identity(n)]
        E[i][j] = Fraction(rng.randint(-2, 2))
        A = la.matmul(la.mat(E), A)
    return A


def oracle_weight(N, center, l):
    """W_{center+l} = sum_{j >= max(0, -l)} ker N^(l+j+1) intersect im N^j (Jordan-chain formula)."""
    n = len(N)
    out = ()
    for j in range(max(0, -l), n + 1):
        e = l + j + 1
        if e <= 0:
            continue
        K = la.nullspace(la.matpow(N, e))
        I = la.image(la.matpow(N, j), la.identity(n))
        out = la.span_sum(out, la.intersection(K, I, n))
    return la.span(out)


@st.composite
def nilpotents(draw):
    sizes = draw(st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda s: sum(s) <= 6))
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    n = sum(sizes)
    A = unimodular(rng, n)
    return la.matmul(la.matmul(A, jordan(sizes)), la.inverse(A)), sizes


@st.composite
def rational_y(draw):
    y111 = draw(st.integers(1, 60))
    y011 = draw(st.fractions(-10, 10, max_denominator=6))
    y001 = draw(st.fractions(-10, 10, max_denominator=6))
    r = draw(st.fractions(-50, 50, max_denominator=20))
    z = draw(st.fractions(-300, 300, max_denominator=3))
    return YCoefficients(y111, y011, y001, PeriodScalar(r, z))


# -- weight filtration --------------------------------------------------------------


def test_single_block_dims():
    W = lm.weight_filtration(lm.NilpotentOp(jordan([4])), 3)
    assert tuple(len(W[l]) for l in range(0, 7)) == (1, 1, 2, 2, 3, 3, 4)


def test_zero_operator():
    W = lm.weight_filtration(lm.NilpotentOp(la.zeros(3, 3)), 5)
    assert len(W[4]) == 0 and len(W[5]) == 3


def test_two_blocks_of_two():
    N = jordan([2, 2])
    W = lm.weight_filtration(lm.NilpotentOp(N), 3)
    assert len(W[1]) == 0
    assert la.span(W[2]) == la.span(la.image(N, la.identity(4))) and len(W[2]) == 2
    assert la.span(W[3]) == la.span(W[2])
    assert len(W[4]) == 4


@PROP
@given(nilpotents(), st.integers(-3, 3))
def test_weight_filtration_properties(data, center):
    N, sizes = data
    n = len(N)
    op = lm.NilpotentOp(N)
    W = lm.weight_filtration(op, center)

    def w(l):
        lo, hi = min(W), max(W)
        return () if l < lo else (la.identity(n) if l >= hi else W[l])

    k = max(sizes) - 1
    for l in range(center - k - 2, center + k + 2):
        assert la.is_subspace(w(l - 1), w(l))
        # N W_l inside W_{l-2}
        assert la.is_subspace(la.image(N, w(l)), w(l - 2))
        assert la.span(w(l)) == oracle_weight(N, center, l - center)
    for j in range(1, k + 1):
        up = len(w(center + j)) - len(w(center + j - 1))
        down = len(w(center - j)) - len(w(center - j - 1))
        assert up == down
        # N^j: Gr_{c+j} -> Gr_{c-j} is onto, hence an isomorphism
        img = la.span_sum(la.image(la.matpow(N, j), w(center + j)), w(center - j - 1))
        assert len(img) == len(w(center - j))


# -- the limit MHS -----------------------------------------------------------------------


def quintic_y(chi=-200, r=0):
    return YCoefficients(5, Fraction(1, 2), Fraction(11, 6), PeriodScalar.from_chi_r(chi, r))


def test_limit_mhs_dims():
    m = lm.assemble_limit_mhs(BASIS, quintic_y())
    assert m.weight_dims(0, 6) == (1, 1, 2, 2, 3, 3, 4)
    assert m.hodge_dims() == (1, 2, 3, 4)
    assert m.graded_weights() == [0, 2, 4, 6]
    assert lm.is_hodge_tate(m)


def test_hodge_filtration_closed_form():
    y = quintic_y(-200, Fraction(25, 12))
    F = lm.limit_hodge_filtration(BASIS, y)
    ref = lm.closed_form_hodge(y)
    assert all(la.span(F[p]) == la.span(ref[p]) for p in range(4))


def test_y000_zero_hodge_line():
    y = YCoefficients(5, Fraction(1, 2), Fraction(11, 6), PeriodScalar())
    F3 = lm.limit_hodge_filtration(BASIS, y)[3]
    one, zero = to_field(1), to_field(0)
    assert la.span(F3) == la.span([(one, zero, zero, zero)])


def test_derivative_limit_scaling():
    lim = lm.derivative_limits(BASIS)
    factors = [to_field(1), 1 / P2I, 2 / P2I**2, 6 / P2I**3]
    for p in range(4):
        expected = tuple(factors[p] if k == p else to_field(0) for k in range(4))
        assert tuple(lim[p]) == expected


def test_split_h3():
    y = quintic_y()
    q1, q2, M = lm.split_h3(lm.assemble_limit_mhs(BASIS, y))
    assert q1.same_filtrations(lm.tate(-1)) and q2.same_filtrations(lm.tate(-2))
    assert M.weight_dims(0, 6) == (1, 1, 1, 1, 1, 1, 2)
    c = to_field(y.Y000) / (3 * y.Y111)
    assert la.span(M.hodge(3)) == la.span([(to_field(1), c)])
    assert la.span(M.hodge(1)) == la.span(M.hodge(3))


def test_dual_of_m():
    _, _, M = lm.split_h3(lm.assemble_limit_mhs(BASIS, quintic_y()))
    D = lm.dual_mhs(M)
    assert D.weight_dims(-7, 0) == (0, 1, 1, 1, 1, 1, 1, 2)
    assert lm.dual_mhs(D).same_filtrations(M)
    assert lm.dual_mhs(D).labels == M.labels


def test_dual_of_tate():
    for n in range(-3, 4):
        assert lm.dual_mhs(lm.tate(n)).same_filtrations(lm.tate(-n))


def test_quintic_ext_class_is_chi_over_y111():
    _, _, M = lm.split_h3(lm.assemble_limit_mhs(BASIS, quintic_y(-200, 0)))
    e = lm.ext_class(lm.dual_mhs(M))
    assert e.zeta3_coeff == -40 and e.residual_is_zero()


def test_numeric_limit_mhs_matches_exact():
    y = quintic_y(-200, Fraction(25, 12))
    yn = YCoefficients(y.Y111, y.Y011, y.Y001, y.Y000.evaluate(60))
    _, _, M = lm.split_h3(lm.assemble_limit_mhs(BASIS, yn))
    e = lm.ext_class(lm.dual_mhs(M))
    assert e.zeta3_coeff == -40 and e.residual_is_zero()


def test_elliptic_shape_is_not_hodge_tate():
    # weight 1, dimension 2, F^1 a non-real line
    kind = lm.ScalarKind("period")
    one = Fraction(1)
    m = lm._make_mhs(("a", "b"), {1: ((one, 0), (0, one))}, {1: ((to_field(1), P2I),), 0: ((to_field(1), to_field(0)), (to_field(0), to_field(1)))}, kind)
    assert not lm.is_hodge_tate(m)


def test_tate_is_hodge_tate():
    assert all(lm.is_hodge_tate(lm.tate(n)) for n in range(-3, 4))


def test_validate_rejects_impure():
    kind = lm.ScalarKind("rational")
    one = Fraction(1)
    # weight 0 piece with F^1 = everything is not pure of weight 0
    m = lm._make_mhs(("a",), {0: ((one,),)}, {1: ((one,),)}, kind)
    with pytest.raises(lm.MHSError):
        m.validate()


# -- extensions --------------------------------------------------------------------------


def test_split_extension():
    e = lm.ext_class(lm.construct_extension(3, PeriodScalar()))
    assert e.is_zero()


def test_zeta3_extension():
    e = lm.ext_class(lm.construct_extension(3, PeriodScalar(0, 1, 3)))
    assert e.zeta3_coeff == 1 and e.residual_is_zero()


def test_class_independent_of_representative():
    s = PeriodScalar(Fraction(2, 7), 5)
    t = to_field(s) + Fraction(-9, 4) * P2I**3
    assert lm.ExtClass.from_representative(3, s) == lm.ExtClass.from_representative(3, t)


def test_tate_multiple_is_zero_class():
    for n in range(1, 6):
        assert lm.ext_class(lm.construct_extension(n, Fraction(3, 5) * P2I**n)).is_zero()


def test_numeric_extension_round_trip():
    with mp.workdps(70):
        s = BigComplex(mpmath.mpc(7 * mpmath.zeta(3)), 60)
    e = lm.ext_class(lm.construct_extension(3, s))
    assert e.zeta3_coeff == 7 and e.residual_is_zero()


@st.composite
def representatives(draw):
    n = draw(st.integers(1, 5))
    s = PeriodScalar(draw(st.fractions(-100, 100, max_denominator=50)),
                     draw(st.fractions(-100, 100, max_denominator=10)),
                     draw(st.integers(-2, 4)))
    return n, s


@PROP
@given(representatives(), st.fractions(-20, 20, max_denominator=9))
def test_ext_class_inverts_construct_extension(ns, q):
    n, s = ns
    m = lm.construct_extension(n, s)
    m.validate()
    e = lm.ext_class(m)
    assert e == lm.ExtClass.from_representative(n, s)
    shifted = to_field(s) + to_field(q) * P2I**n
    assert lm.ext_class(lm.construct_extension(n, shifted)) == e


@PROP
@given(rational_y())
def test_limit_mhs_purity_counts(y):
    m = lm.assemble_limit_mhs(BASIS, y)  # runs validate(): monotone, exhaustive, pure graded pieces
    assert m.weight_dims(-1, 6) == (0, 1, 1, 2, 2, 3, 3, 4)
    assert m.hodge_dims() == (1, 2, 3, 4)
    for l, p in zip((0, 2, 4, 6), (0, 1, 2, 3)):
        # Gr_l is one-dimensional and of type (p, p): F^p meets W_l outside W_{l-1}, F^{p+1} does not
        Wl, Wm = m.weight_c(l), m.weight_c(l - 1)
        n = m.dim
        lift = lambda q: len(la.span_sum(la.intersection(m.hodge(q), Wl, n, m.kind.is_zero, m.kind.one), Wm))
        assert lift(p) == len(Wm) + 1 and lift(p + 1) == len(Wm)
    assert lm.is_hodge_tate(m)
    _, _, M = lm.split_h3(m)
    e = lm.ext_class(lm.dual_mhs(M))
    expected = -to_field(y.Y000) * P2I**3 / (3 * y.Y111)
    assert e == lm.ExtClass.from_representative(3, expected)
