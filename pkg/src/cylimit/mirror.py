"""Mirror map, prepotential, instanton coefficients and the structure matrices.

Notation.  ``g_k = f_k / f_0`` and ``u = 2 pi i t = l + g_1``.  Substituting
``l = u - g_1`` into ``D_k / f_0 = sum_j binom(k,j) g_{k-j} l^j`` expresses every
ratio ``varpi_k / varpi_0`` as a polynomial in ``t`` whose coefficients are
rational q-series times powers of 2 pi i.  The prepotential is then assembled
from the rows of ``S`` exactly as written, and the code checks rather than
assumes that ``F_np`` is a pure q-series and that ``F_1 = dF/dt``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Union

import mpmath

from . import linalg as la
from .numerics import BigComplex, PeriodScalar, as_fraction, fraction_str, to_field
from .picard_fuchs import FrobeniusBasis
from .series import (
    LogSeries,
    SeriesError,
    TruncSeries,
    series_compose,
    series_exp,
    series_inverse,
    series_mul,
    series_revert,
    theta,
)

log = logging.getLogger(__name__)

Q = Fraction

T_CAN = la.mat([[1, 1, 1, 1], [0, 1, 2, 3], [0, 0, 1, 3], [0, 0, 0, 1]])
T_CAN = la.matmap(T_CAN, Fraction)

#: standard symplectic form on the Pi-basis (F_0, F_1, z_0, z_1)
J = la.matmap(la.mat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]), Fraction)

CONVENTIONS = {
    "instanton_numbers": "(2*pi*i)^3 * F_np = sum_d n_d * Li_3(q^d)",
    "instanton_a": "F_np = sum_n a_n q^n with a_n = A_n/(2*pi*i)^3, A_n rational",
    "mirror_map": "t = varpi_1/varpi_0 = (log(phi) + f_1/f_0)/(2*pi*i), q = exp(2*pi*i*t)",
    "lambda_default": "1",
}


class PrepotentialError(ValueError):
    """F_np is not a pure q-series, or F_1 != dF/dt (inconsistent data)."""


Y000Type = Union[PeriodScalar, BigComplex, None]


@dataclass(frozen=True)
class YCoefficients:
    Y111: int
    Y011: Fraction
    Y001: Fraction
    Y000: Y000Type = None
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        if isinstance(self.Y111, Fraction):
            if self.Y111.denominator != 1:
                raise ValueError("Y111 must be an integer")
            object.__setattr__(self, "Y111", int(self.Y111))
        if not isinstance(self.Y111, int) or self.Y111 < 1:
            raise ValueError(f"Y111 must be a positive integer, got {self.Y111!r}")
        object.__setattr__(self, "Y011", as_fraction(self.Y011))
        object.__setattr__(self, "Y001", as_fraction(self.Y001))
        object.__setattr__(self, "lam", as_fraction(self.lam))
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")
        if isinstance(self.Y000, (int, Fraction)):
            object.__setattr__(self, "Y000", PeriodScalar(as_fraction(self.Y000)))

    @classmethod
    def auto(cls, Y111: int, Y000: Y000Type = None, Y011=None, lam=Fraction(1)) -> "YCoefficients":
        """Canonical admissible residues: Y001 = frac(Y111/6), Y011 = frac(Y111/2) unless given."""
        y001 = Fraction(Y111, 6) % 1
        y011 = Fraction(Y111, 2) % 1 if Y011 is None else as_fraction(Y011)
        return cls(Y111, y011, y001, Y000, lam)

    def is_admissible(self) -> bool:
        """Integrality conditions making T_K an integral matrix."""
        y = Fraction(self.Y111)
        return all(
            x.denominator == 1
            for x in (y / 6 - self.Y001, y / 2 - self.Y011, y / 2 + self.Y011)
        )

    def canonical(self) -> "YCoefficients":
        """Representatives Y011 in [0,1), Y001 in [0,2), Re(Y000) in [0,3)."""
        y000 = self.Y000
        if isinstance(y000, PeriodScalar) and y000.tate_power == 0:
            y000 = PeriodScalar(y000.rational_part % 3, y000.zeta3_coeff, 0)
        elif isinstance(y000, BigComplex):
            with mpmath.workdps(y000.precision + 10):
                re = y000.value.real
                # values within the working tolerance below 3 reduce to 0
                slack = mpmath.mpf(10) ** (-(y000.precision // 2))
                re = re - 3 * mpmath.floor(re / 3 + slack)
                y000 = BigComplex(mpmath.mpc(re, y000.value.imag), y000.precision)
        return YCoefficients(self.Y111, self.Y011 % 1, self.Y001 % 2, y000, self.lam)

    def y000_field(self):
        if isinstance(self.Y000, PeriodScalar):
            return self.Y000.to_field()
        raise TypeError("Y000 is not exact")

    def to_json(self, digits: int = 30) -> dict:
        d = {
            "Y111": str(self.Y111),
            "Y011": fraction_str(self.Y011),
            "Y001": fraction_str(self.Y001),
            "lambda": fraction_str(self.lam),
        }
        if isinstance(self.Y000, PeriodScalar):
            d["Y000"] = {"kind": "period", **self.Y000.to_json()}
        elif isinstance(self.Y000, BigComplex):
            from .numerics import complex_str

            d["Y000"] = {"kind": "numeric", "value": complex_str(self.Y000.value, min(digits, self.Y000.precision))}
        else:
            d["Y000"] = None
        return d


# ---------------------------------------------------------------------------
# structure matrices
# ---------------------------------------------------------------------------


def build_TK(y: YCoefficients) -> tuple:
    """Monodromy of the Pi-vector around the MUM point."""
    Y111, Y011, Y001 = Fraction(y.Y111), y.Y011, y.Y001
    return la.matmap(
        la.mat(
            [
                [1, 0, 0, 0],
                [-1, 1, 0, 0],
                [Y111 / 6 - Y001, -Y111 / 2 - Y011, 1, 1],
                [Y111 / 2 - Y011, -Y111, 0, 1],
            ]
        ),
        Fraction,
    )


def _neg_third(y000):
    if y000 is None:
        raise ValueError("Y000 is required for S")
    if isinstance(y000, BigComplex):
        return y000 * Fraction(-1, 3)
    return y000 * Fraction(-1, 3)


def build_S(y: YCoefficients) -> tuple:
    """``Pi = S varpi``; the (0,0) entry is ``-lambda Y000/3`` (PeriodScalar or BigComplex)."""
    lam = y.lam
    Y111 = Fraction(y.Y111)
    return (
        (_neg_third(y.Y000) * lam, -y.Y001 / 2 * lam, Fraction(0), Y111 / 6 * lam),
        (-y.Y001 / 2 * lam, -y.Y011 * lam, -Y111 / 2 * lam, Fraction(0)),
        (lam, Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(0), lam, Fraction(0), Fraction(0)),
    )


def build_S1(y: YCoefficients) -> tuple:
    """Change of basis alpha -> beta (beta^a = sum_b (S1)_{ba} alpha^b); det = Y111^2."""
    Y111 = Fraction(y.Y111)
    return (
        (Fraction(0), y.Y001 / 2, Fraction(0), -Y111),
        (-y.Y001 / 2, y.Y011, -Y111, Fraction(0)),
        (Fraction(1), Fraction(0), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(-1), Fraction(0), Fraction(0)),
    )


def build_S2(y: YCoefficients) -> tuple:
    """Change of basis beta -> gamma (gamma^a = sum_b (S2)_{ba} beta^b)."""
    lam = y.lam
    if y.Y000 is None:
        raise ValueError("Y000 is required for S2")
    c = y.Y000 * (lam / (3 * y.Y111))
    z = Fraction(0)
    return (
        (lam, z, z, z),
        (z, -lam, z, z),
        (z, z, lam / 2, z),
        (c, z, z, -lam / 6),
    )


def matrix_to_field(A) -> tuple:
    """Entries mapped into the formal period field Q(2 pi i, zeta(3))."""
    return la.matmap(A, to_field)


def check_sp4z(T, form=None) -> bool:
    """All entries integral and ``T^t J T = J``.

    ``form`` replaces the standard symplectic matrix ``J``; pass the form
    preserved in another basis (e.g. ``S^t J S`` for matrices acting on the
    varpi basis) to test invariance there.
    """
    Jf = J if form is None else la.matmap(form, to_field if _has_field_entries(form) else as_fraction)
    try:
        Tq = la.matmap(T, as_fraction)
    except TypeError:
        return False
    if any(x.denominator != 1 for r in Tq for x in r):
        return False
    if form is not None and _has_field_entries(form):
        Tq = la.matmap(Tq, to_field)
    return la.matmul(la.matmul(la.transpose(Tq), Jf), Tq) == Jf


def _has_field_entries(A) -> bool:
    return any(not isinstance(x, (int, Fraction)) for r in A for x in r)


# ---------------------------------------------------------------------------
# mirror map
# ---------------------------------------------------------------------------


def _g_series(basis: FrobeniusBasis) -> list:
    inv0 = series_inverse(basis.f[0])
    return [basis.f[0] * 0 + 1] + [series_mul(basis.f[k], inv0) for k in range(1, 4)]


def mirror_map(basis: FrobeniusBasis) -> tuple[LogSeries, TruncSeries]:
    """``(2 pi i t, phi(q))``.

    The first entry is the rational LogSeries ``l + f_1/f_0``, equal to
    ``2 pi i t``; the second is the inverse of ``q = phi exp(f_1/f_0)``.
    """
    if basis.order < 2:
        raise SeriesError("truncation order too small for the mirror map (need >= 2)")
    g = _g_series(basis)
    u = LogSeries((g[1], g[1] * 0 + 1))
    q_of_phi = series_exp(g[1]).shift(1)
    phi_of_q = series_revert(q_of_phi, tag="q")
    return u, phi_of_q


def q_of_phi(basis: FrobeniusBasis) -> TruncSeries:
    g = _g_series(basis)
    return series_exp(g[1]).shift(1)


# ---------------------------------------------------------------------------
# polynomials in t with q-series coefficients
# ---------------------------------------------------------------------------


@dataclass
class TQExpr:
    """``sum const[m] t^m + sum_{(m,e)} t^m (2 pi i)^e s_{m,e}(q)``.

    ``const`` values are exact scalars (Fraction / PeriodScalar) or BigComplex;
    series ``s_{m,e}`` are rational q-series with zero constant term.
    """

    order: int
    const: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    def add_const(self, m: int, c):
        if _scalar_is_zero(c):
            return
        c = self.const[m] + c if m in self.const else c
        if _scalar_is_zero(c):
            self.const.pop(m, None)
        else:
            self.const[m] = c

    def add_series(self, m: int, e: int, s: TruncSeries):
        c0 = s.coeffs[0]
        if c0 != 0:
            self.add_const(m, PeriodScalar(c0, 0, e) if e else c0)
            s = s - c0
        if s.is_zero():
            return
        if (m, e) in self.series:
            s = self.series[(m, e)] + s
        if s.is_zero():
            self.series.pop((m, e), None)
        else:
            self.series[(m, e)] = s

    def scaled(self, c) -> "TQExpr":
        out = TQExpr(self.order)
        for m, v in self.const.items():
            out.add_const(m, v * c)
        rational = isinstance(c, (int, Fraction)) or (isinstance(c, PeriodScalar) and c.is_pure and c.tate_power == 0)
        for (m, e), s in self.series.items():
            if not rational:
                raise PrepotentialError("transcendental scalar multiplying a q-series term")
            cq = c if isinstance(c, (int, Fraction)) else c.rational_part
            out.add_series(m, e, s * cq)
        return out

    def times_t(self) -> "TQExpr":
        out = TQExpr(self.order)
        for m, v in self.const.items():
            out.add_const(m + 1, v)
        for (m, e), s in self.series.items():
            out.add_series(m + 1, e, s)
        return out

    def __add__(self, other: "TQExpr") -> "TQExpr":
        out = TQExpr(min(self.order, other.order))
        for src in (self, other):
            for m, v in src.const.items():
                out.add_const(m, v)
            for (m, e), s in src.series.items():
                out.add_series(m, e, s.truncate(out.order))
        return out

    def __sub__(self, other):
        return self + other.scaled(Fraction(-1))

    def d_dt(self) -> "TQExpr":
        """d/dt with d/dt s(q) = 2 pi i theta_q s."""
        out = TQExpr(self.order)
        for m, v in self.const.items():
            if m:
                out.add_const(m - 1, v * m)
        for (m, e), s in self.series.items():
            out.add_series(m, e + 1, theta(s))
            if m:
                out.add_series(m - 1, e, s * m)
        return out

    def is_zero(self) -> bool:
        return all(_scalar_is_zero(v) for v in self.const.values()) and not self.series


def _scalar_is_zero(v) -> bool:
    if isinstance(v, PeriodScalar):
        return v.is_zero()
    if isinstance(v, BigComplex):
        return abs(v.value) < mpmath.mpf(10) ** (-(v.precision - 5))
    return v == 0


def _ratio_exprs(basis: FrobeniusBasis, phi_of_q: TruncSeries) -> list:
    """``varpi_k / varpi_0`` as TQExpr for k = 0..3."""
    g = _g_series(basis)
    T = phi_of_q.order
    gq = [series_compose(gk, phi_of_q) for gk in g]
    one = gq[0] * 0 + 1
    neg_g1 = -gq[1]
    # powers of (-g1)
    pw = [one]
    for _ in range(3):
        pw.append(series_mul(pw[-1], neg_g1))
    exprs = []
    for k in range(4):
        e = TQExpr(T)
        for m in range(k + 1):
            coeff = one * 0
            for j in range(m, k + 1):
                coeff = coeff + series_mul(gq[k - j], pw[j - m]) * (comb(k, j) * comb(j, m))
            # u^m (2 pi i)^(-k) coeff = t^m (2 pi i)^(m-k) coeff
            e.add_series(m, m - k, coeff)
        exprs.append(e)
    return exprs


@dataclass
class MirrorData:
    y: YCoefficients
    order: int
    mirror_map_u: LogSeries  # 2 pi i t
    phi_of_q: TruncSeries
    F0: TQExpr
    F1: TQExpr
    F: TQExpr
    F_np: TruncSeries  # A_n with F_np = (2 pi i)^-3 sum A_n q^n
    instanton_a: tuple
    special_geometry_ok: bool
    S: tuple
    S1: tuple
    S2: tuple
    T_Can: tuple
    T_K: tuple
    conventions: dict

    def polynomial_part(self) -> dict:
        return dict(self.F.const)

    def yukawa(self) -> TruncSeries:
        """-d^3F/dt^3 as a q-series: Y111 - sum n^3 A_n q^n."""
        s = self.F_np
        for _ in range(3):
            s = theta(s)
        return -s + Fraction(self.y.Y111)


def prepotential(basis: FrobeniusBasis, y: YCoefficients, order: int | None = None) -> MirrorData:
    """Prepotential and instanton data from the rows of S (lambda cancels in F)."""
    if order is not None:
        basis = basis.truncate(order)
    u, phi_of_q = mirror_map(basis)
    ratios = _ratio_exprs(basis, phi_of_q)
    y_for_rows = y if y.Y000 is not None else YCoefficients(y.Y111, y.Y011, y.Y001, PeriodScalar(), y.lam)
    S = build_S(y_for_rows)

    def row_expr(r: int) -> TQExpr:
        acc = TQExpr(phi_of_q.order)
        for k in range(4):
            c = S[r][k]
            if isinstance(c, Fraction) and c == 0:
                continue
            acc = acc + ratios[k].scaled(c * (1 / y.lam))
        return acc

    F0 = row_expr(0)
    F1 = row_expr(1)
    F = (F0 + F1.times_t()).scaled(Fraction(1, 2))
    # consistency: 2F - t dF/dt must reproduce F0 and dF/dt must equal F1
    dF = F.d_dt()
    homog_ok = ((F.scaled(Fraction(2)) - dF.times_t()) - F0).is_zero()
    sg_ok = (dF - F1).is_zero()
    if not homog_ok:
        raise PrepotentialError("2F - t dF/dt differs from F_0")
    bad = {k: s for k, s in F.series.items() if k[0] != 0}
    if bad:
        raise PrepotentialError(f"F_np has residual t-polynomial terms {sorted(bad)}")
    extra = {k for k in F.series if k != (0, -3)}
    if extra:
        raise PrepotentialError(f"unexpected (2 pi i)-powers in F_np: {sorted(extra)}")
    if not sg_ok:
        raise PrepotentialError("F_1 differs from dF/dt: the operator does not satisfy the special geometry relation")
    F_np = F.series.get((0, -3), phi_of_q * 0)
    a = tuple(PeriodScalar(F_np.coeffs[n], 0, -3) for n in range(1, F_np.order + 1))
    md = MirrorData(
        y=y,
        order=phi_of_q.order,
        mirror_map_u=u,
        phi_of_q=phi_of_q,
        F0=F0,
        F1=F1,
        F=F,
        F_np=F_np,
        instanton_a=a,
        special_geometry_ok=sg_ok,
        S=build_S(y) if y.Y000 is not None else None,
        S1=build_S1(y),
        S2=build_S2(y) if y.Y000 is not None else None,
        T_Can=T_CAN,
        T_K=build_TK(y),
        conventions=dict(CONVENTIONS),
    )
    return md


def instanton_numbers(A: TruncSeries) -> list:
    """n_1..n_T from sum_d n_d Li_3(q^d) = sum_m A_m q^m."""
    T = A.order
    n = [Fraction(0)] * (T + 1)
    for m in range(1, T + 1):
        s = A.coeffs[m]
        for d in range(1, m):
            if m % d == 0:
                s -= n[d] * Fraction(d**3, m**3)
        n[m] = s
    return n[1:]


def instanton_expansion(md: MirrorData, with_numbers: bool = True):
    """``(a_1..a_T, n_1..n_T or None)``; the convention is ``md.conventions``."""
    a = md.instanton_a
    nd = instanton_numbers(md.F_np) if with_numbers else None
    return a, nd
