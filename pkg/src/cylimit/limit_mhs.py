"""Mixed Hodge structures with a rational lattice, and the limit MHS at the MUM point.

Coordinates.  Every MHS carries a basis of its rational lattice (with
labels); subspaces are echelon bases of row vectors in these coordinates.
The weight filtration is rational (``Fraction`` entries).  The Hodge
filtration lives in the complexification and has entries of one scalar
kind:

* ``"rational"``: ``Fraction``;
* ``"period"``: elements of the formal field Q(2 pi i, zeta(3));
* ``"numeric"``: mpc, compared with a tolerance.

For the limit MHS on H^3 the lattice basis is ``b_j = (2 pi i)^(j-3) x^j``
(j = 0..3), on which the monodromy logarithm acts as ``b_0 -> b_1 -> b_2 -> b_3 -> 0``.
"""
from __future__ import annotations

import contextlib
import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from . import linalg as la
from .mirror import T_CAN, YCoefficients, build_S1, build_S2, build_TK
from .numerics import (
    P2I,
    PERIOD_FIELD,
    ZETA3,
    BigComplex,
    PeriodElement,
    PeriodScalar,
    as_fraction,
    complex_str,
    field_conjugate,
    field_evaluate,
    field_is_rational,
    field_to_fraction,
    field_to_period_scalar,
    fraction_str,
    rational_reconstruct,
    to_field,
)
from .picard_fuchs import FrobeniusBasis
from .series import logseries_theta

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# working precision for numeric filtrations
# ---------------------------------------------------------------------------

NUMERIC_GUARD = 15


def _numeric_digits(args) -> int | None:
    """Digits needed by any numeric input among ``args`` (None if all exact)."""
    best = None
    for a in args:
        if isinstance(a, MHS) and a.kind.name == "numeric":
            d = a.kind.tol_digits
        elif isinstance(a, YCoefficients) and isinstance(a.Y000, BigComplex):
            d = a.Y000.precision
        elif isinstance(a, BigComplex):
            d = a.precision
        else:
            continue
        best = d if best is None else max(best, d)
    return best


def _at_input_precision(fn):
    """Run ``fn`` with mpmath's working precision raised to what its numeric inputs carry."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        d = _numeric_digits(list(args) + list(kwargs.values()))
        ctx = mp.workdps(max(mp.dps, d + NUMERIC_GUARD)) if d is not None else contextlib.nullcontext()
        with ctx:
            return fn(*args, **kwargs)

    return wrapper

KINDS = ("rational", "period", "numeric")


class MHSError(ValueError):
    pass


class SplittingError(MHSError):
    pass


# ---------------------------------------------------------------------------
# scalar kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarKind:
    name: str
    tol_digits: int = 30

    @property
    def is_zero(self):
        if self.name == "numeric":
            return la.numeric_zero(mpmath.mpf(10) ** (-self.tol_digits))
        return la.exact_zero

    @property
    def one(self):
        if self.name == "rational":
            return Fraction(1)
        if self.name == "period":
            return PERIOD_FIELD(1)
        return mpmath.mpc(1)

    def coerce(self, x):
        if self.name == "rational":
            return field_to_fraction(x) if isinstance(x, PeriodElement) else as_fraction(x)
        if self.name == "period":
            return to_field(x)
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
        if isinstance(x, (BigComplex,)):
            return x.value
        if isinstance(x, PeriodScalar):
            return x.evaluate(self.tol_digits + 10).value
        if isinstance(x, PeriodElement):
            return field_evaluate(x, self.tol_digits + 10)
        return mpmath.mpc(x)

    def conj(self, x):
        if self.name == "rational":
            return x
        if self.name == "period":
            return field_conjugate(x)
        return mpmath.conj(x)

    def to_str(self, x) -> str:
        if self.name == "rational":
            return fraction_str(x)
        if self.name == "period":
            try:
                return str(field_to_period_scalar(x))
            except ValueError:
                return str(x).replace("P", "(2*pi*i)").replace("Z", "zeta(3)")
        return complex_str(x, self.tol_digits)


def _join_kind(a: ScalarKind, b: ScalarKind) -> ScalarKind:
    order = {"rational": 0, "period": 1, "numeric": 2}
    if order[a.name] >= order[b.name]:
        k = a
    else:
        k = b
    if k.name == "numeric":
        tol = min(x.tol_digits for x in (a, b) if x.name == "numeric")
        return ScalarKind("numeric", tol)
    return k


# ---------------------------------------------------------------------------
# nilpotent operators and the weight filtration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NilpotentOp:
    """A nilpotent rational matrix acting on column coordinate vectors."""

    matrix: tuple
    index: int = field(init=False)

    def __post_init__(self):
        M = la.matmap(self.matrix, as_fraction)
        object.__setattr__(self, "matrix", M)
        d = len(M)
        P = la.identity(d)
        for k in range(d + 1):
            if la.is_zero_matrix(P):
                object.__setattr__(self, "index", k)
                return
            P = la.matmul(P, M)
        raise MHSError("matrix is not nilpotent")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def power(self, k: int) -> tuple:
        return la.matpow(self.matrix, k)


def _unipotent_log(T) -> tuple:
    """log of a unipotent rational matrix (finite series)."""
    d = len(T)
    X = la.matsub(la.matmap(T, as_fraction), la.identity(d))
    out = la.zeros(d, d)
    P = la.identity(d)
    for k in range(1, d + 1):
        P = la.matmul(P, X)
        out = la.matadd(out, la.matscale(P, Fraction((-1) ** (k + 1), k)))
    if not la.is_zero_matrix(la.matmul(P, X)):
        raise MHSError("matrix is not unipotent")
    return out


def weight_filtration(N: NilpotentOp, center: int) -> dict:
    """Monodromy weight filtration ``{l: echelon basis}`` for l in [center-k-1, center+k].

    Inductive construction: with ``U > L`` already placed at ``W_{c+k} = U`` and
    ``W_{c-k-1} = L`` where ``k`` is maximal with ``N^k U`` not inside ``L``,
    set ``W_{c-k} = L + N^k U`` and ``W_{c+k-1} = {u in U : N^k u in L}`` and
    recurse on that pair.  Indices not fixed by the recursion inherit the
    value of the nearest fixed index below.
    """
    return dict(_weight_filtration(N, center))


@functools.lru_cache(maxsize=256)
def _weight_filtration(N: NilpotentOp, center: int) -> dict:
    # cached: the Y000-independent part of every limit MHS computation
    d = N.dim
    full = la.identity(d)
    W: dict = {}

    def top_k(U, L) -> int:
        k = -1
        P = la.identity(d)
        for j in range(d + 1):
            if not la.is_subspace(la.image(P, U), L):
                k = j
            P = la.matmul(P, N.matrix)
        return k

    def rec(U, L):
        if len(U) == len(L):
            return
        k = top_k(U, L)
        W[center + k] = U
        W[center - k - 1] = L
        Nk = N.power(k)
        low = la.span_sum(L, la.image(Nk, U))
        # {u in U : N^k u in L}
        pre = la.intersection(la.preimage(Nk, L, d), U, d)
        if k == 0:
            return
        W[center - k] = low
        W[center + k - 1] = pre
        rec(pre, low)

    rec(full, ())
    K = N.index - 1 if N.index > 0 else 0
    lo, hi = center - K - 1, center + K
    out = {}
    last = ()
    for l in range(lo, hi + 1):
        if l in W:
            last = W[l]
        out[l] = last
    out[hi] = full
    return out


# ---------------------------------------------------------------------------
# MHS
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MHS:
    """A mixed Hodge structure on a rational lattice with labelled basis.

    ``W`` maps weights ``w_lo..w_hi`` to echelon bases; ``W_l`` is 0 below
    ``w_lo`` and everything above ``w_hi`` (``W_{w_hi}`` is everything).
    ``F`` maps ``p_lo..p_hi`` to echelon bases; ``F^p`` is everything below
    ``p_lo`` and 0 above ``p_hi``.
    """

    labels: tuple
    W: tuple  # ((l, basis), ...)
    F: tuple  # ((p, basis), ...)
    kind: ScalarKind

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _full(self, one):
        return la.identity(self.dim, one)

    def weight(self, l: int) -> tuple:
        Wd = dict(self.W)
        lo, hi = min(Wd), max(Wd)
        if l < lo:
            return ()
        if l >= hi:
            return self._full(Fraction(1))
        # indices between stored steps carry the value of the nearest step below
        return Wd[max(k for k in Wd if k <= l)]

    def hodge(self, p: int) -> tuple:
        Fd = dict(self.F)
        lo, hi = min(Fd), max(Fd)
        if p <= lo:
            return self._full(self.kind.one) if p < lo else Fd[lo]
        if p > hi:
            return ()
        return Fd[p]

    @property
    def weight_range(self) -> tuple[int, int]:
        Wd = dict(self.W)
        return min(Wd), max(Wd)

    @property
    def hodge_range(self) -> tuple[int, int]:
        Fd = dict(self.F)
        return min(Fd), max(Fd)

    def weight_dims(self, lo: int | None = None, hi: int | None = None) -> tuple:
        a, b = self.weight_range
        lo = a if lo is None else lo
        hi = b if hi is None else hi
        return tuple(len(self.weight(l)) for l in range(lo, hi + 1))

    def hodge_dims(self) -> tuple:
        a, b = self.hodge_range
        return tuple(len(self.hodge(p)) for p in range(b, a - 1, -1))

    def weight_c(self, l: int) -> tuple:
        """W_l with entries coerced to the Hodge scalar kind."""
        return tuple(tuple(self.kind.coerce(x) for x in v) for v in self.weight(l))

    def graded_weights(self) -> list:
        a, b = self.weight_range
        return [l for l in range(a, b + 1) if len(self.weight(l)) > len(self.weight(l - 1))]

    @_at_input_precision
    def validate(self) -> None:
        """Check monotonicity, exhaustiveness and purity of each graded piece."""
        z = self.kind.is_zero
        a, b = self.weight_range
        for l in range(a, b + 1):
            if not la.is_subspace(self.weight(l - 1), self.weight(l)):
                raise MHSError(f"W_{l - 1} is not inside W_{l}")
        if len(self.weight(b)) != self.dim:
            raise MHSError("weight filtration is not exhaustive")
        p0, p1 = self.hodge_range
        for p in range(p0, p1 + 1):
            if not la.is_subspace(self.hodge(p + 1), self.hodge(p), z):
                raise MHSError(f"F^{p + 1} is not inside F^{p}")
        if len(self.hodge(p0 - 1)) != self.dim:
            raise MHSError("Hodge filtration is not exhaustive")
        n = self.dim
        for l in range(a, b + 1):
            Wl, Wm = self.weight_c(l), self.weight_c(l - 1)
            if len(Wl) == len(Wm):
                continue
            # lift[p] = F^p cap W_l + W_{l-1}; W is rational, so the conjugate
            # filtration lifts to the conjugates of these spaces
            lift = {p: la.span_sum(la.intersection(self.hodge(p), Wl, n, z, self.kind.one), Wm, z)
                    for p in range(p0 - 1, p1 + 2)}

            def lifted(p):
                return lift[p0 - 1] if p < p0 else (Wm if p > p1 + 1 else lift[p])

            for p in range(p0 - 1, p1 + 2):
                A = lifted(p)
                B = tuple(tuple(self.kind.conj(x) for x in v) for v in lifted(l - p + 1))
                if {len(A), len(B)} & {len(Wl), len(Wm)}:
                    # one side is W_l or W_{l-1}: the conditions reduce to a dimension count
                    ok = len(A) + len(B) == len(Wl) + len(Wm)
                else:
                    ok = (len(la.span_sum(A, B, z)) == len(Wl)
                          and len(la.intersection(A, B, n, z, self.kind.one)) == len(Wm))
                if not ok:
                    raise MHSError(f"Gr^W_{l} is not a pure Hodge structure of weight {l} (fails at p = {p})")

    def to_json(self) -> dict:
        ks = self.kind
        return {
            "labels": list(self.labels),
            "scalar_kind": ks.name,
            "weight_filtration": {
                str(l): [[fraction_str(x) for x in v] for v in basis] for l, basis in self.W
            },
            "hodge_filtration": {str(p): [[ks.to_str(x) for x in v] for v in basis] for p, basis in self.F},
            "weight_dims": list(self.weight_dims()),
            "hodge_dims": list(self.hodge_dims()),
        }

    @_at_input_precision
    def same_filtrations(self, other: "MHS") -> bool:
        if self.dim != other.dim:
            return False
        kind = _join_kind(self.kind, other.kind)
        z = kind.is_zero
        lo = min(self.weight_range[0], other.weight_range[0]) - 1
        hi = max(self.weight_range[1], other.weight_range[1])
        for l in range(lo, hi + 1):
            if la.span(self.weight(l)) != la.span(other.weight(l)):
                return False
        lo = min(self.hodge_range[0], other.hodge_range[0]) - 1
        hi = max(self.hodge_range[1], other.hodge_range[1]) + 1
        for p in range(lo, hi + 1):
            A = [[kind.coerce(x) for x in v] for v in self.hodge(p)]
            B = [[kind.coerce(x) for x in v] for v in other.hodge(p)]
            if len(A) != len(B) or not la.is_subspace(A, B, z):
                return False
        return True


def _make_mhs(labels, W: dict, F: dict, kind: ScalarKind) -> MHS:
    Wt = tuple(sorted((l, la.span(b)) for l, b in W.items()))
    Ft = tuple(sorted((p, la.span(b, kind.is_zero)) for p, b in F.items()))
    return MHS(tuple(labels), Wt, Ft, kind)


def tate(n: int, label: str | None = None) -> MHS:
    """Q(n): one-dimensional, weight -2n, type (-n, -n)."""
    one = Fraction(1)
    return _make_mhs(
        (label or f"(2*pi*i)^{n}",), {-2 * n: ((one,),)}, {-n: ((one,),)}, ScalarKind("rational")
    )


@_at_input_precision
def is_hodge_tate(m: MHS) -> bool:
    """Odd graded pieces vanish and Gr_{2k} is of type (k, k) by dimension count."""
    z = m.kind.is_zero
    n = m.dim
    a, b = m.weight_range
    p0, p1 = m.hodge_range
    for l in range(a, b + 1):
        Wl, Wm = m.weight_c(l), m.weight_c(l - 1)
        g = len(Wl) - len(Wm)
        if g == 0:
            continue
        if l % 2:
            return False
        k = l // 2
        for p in range(p0 - 1, p1 + 2):
            img = len(la.span_sum(la.intersection(m.hodge(p), Wl, n, z, m.kind.one), Wm, z)) - len(Wm)
            want = g if p <= k else 0
            if img != want:
                return False
    return True


@_at_input_precision
def direct_sum(*parts: MHS) -> MHS:
    """Block direct sum (bases concatenated in order)."""
    kind = parts[0].kind
    for p in parts[1:]:
        kind = _join_kind(kind, p.kind)
    labels = sum((p.labels for p in parts), ())
    n = len(labels)
    offs = []
    o = 0
    for p in parts:
        offs.append(o)
        o += p.dim

    def embed(v, off, conv):
        z = conv(Fraction(0))
        out = [z] * n
        for i, x in enumerate(v):
            out[off + i] = conv(x)
        return tuple(out)

    wl = min(p.weight_range[0] for p in parts)
    wh = max(p.weight_range[1] for p in parts)
    W = {l: [embed(v, off, as_fraction) for p, off in zip(parts, offs) for v in p.weight(l)] for l in range(wl, wh + 1)}
    pl = min(p.hodge_range[0] for p in parts)
    ph = max(p.hodge_range[1] for p in parts)
    F = {
        q: [embed(v, off, kind.coerce) for p, off in zip(parts, offs) for v in p.hodge(q)]
        for q in range(pl, ph + 1)
    }
    return _make_mhs(labels, W, F, kind)


@_at_input_precision
def reorder(m: MHS, order: Sequence[int]) -> MHS:
    """Permute basis vectors: new basis i is old basis ``order[i]``."""
    def perm(v):
        return tuple(v[j] for j in order)

    W = {l: [perm(v) for v in b] for l, b in m.W}
    F = {p: [perm(v) for v in b] for p, b in m.F}
    return _make_mhs(tuple(m.labels[j] for j in order), W, F, m.kind)


def _coords_in(U, x, is_zero) -> tuple:
    """Coefficients c with sum c_i U_i = x (U linearly independent rows)."""
    k = len(U)
    n = len(x)
    rows = [tuple(U[i][j] for i in range(k)) + (x[j],) for j in range(n)]
    R, piv = la.rref(rows, is_zero)
    if k in piv:
        raise MHSError("vector is not in the subspace")
    one = R[0][0] ** 0 if R else Fraction(1)
    c = [one * 0] * k
    for i, p in enumerate(piv):
        c[p] = R[i][k]
    return tuple(c)


@_at_input_precision
def restrict(m: MHS, sub_basis: Sequence[Sequence], labels: Sequence[str]) -> MHS:
    """Induced MHS on the rational subspace spanned by ``sub_basis`` (in its coordinates)."""
    n = m.dim
    z = m.kind.is_zero
    U = tuple(tuple(as_fraction(x) for x in v) for v in sub_basis)
    Uc = tuple(tuple(m.kind.coerce(x) for x in v) for v in U)
    a, b = m.weight_range
    W = {}
    for l in range(a, b + 1):
        inter = la.intersection(m.weight(l), U, n)
        W[l] = [_coords_in(U, v, la.exact_zero) for v in inter]
    p0, p1 = m.hodge_range
    F = {}
    for p in range(p0, p1 + 1):
        inter = la.intersection(m.hodge(p), Uc, n, z, m.kind.one)
        F[p] = [_coords_in(Uc, v, z) for v in inter]
    return _make_mhs(tuple(labels), W, F, m.kind)


@_at_input_precision
def dual_mhs(m: MHS) -> MHS:
    """Dual MHS: ``W_l = ann(W_{-l-1})``, ``F^p = ann(F^{1-p})`` in the dual basis."""
    n = m.dim
    z = m.kind.is_zero
    a, b = m.weight_range
    W = {l: la.annihilator(m.weight(-l - 1), n) for l in range(-b, -a + 1)}
    p0, p1 = m.hodge_range
    F = {p: la.annihilator(m.hodge(1 - p), n, z, m.kind.one) for p in range(-p1, -p0 + 1)}
    labels = tuple(_dual_label(s) for s in m.labels)
    return _make_mhs(labels, W, F, m.kind)


def _dual_label(s: str) -> str:
    return s[:-1] if s.endswith("*") else s + "*"


# ---------------------------------------------------------------------------
# extension classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExtClass:
    """A class in C / (2 pi i)^n Q, stored through a representative ``s``.

    ``zeta3_coeff`` and ``residual`` are the canonical decomposition
    ``s = (2 pi i)^n * rho + zeta3_coeff * zeta(3) + residual`` with rho rational
    removed.  Exact representatives are elements of Q(2 pi i, zeta(3));
    numeric ones are BigComplex.
    """

    n: int
    representative: object
    zeta3_coeff: Fraction | None
    residual: object

    @classmethod
    def from_representative(cls, n: int, s) -> "ExtClass":
        if isinstance(s, BigComplex):
            return cls._numeric(n, s)
        if isinstance(s, (int, Fraction, PeriodScalar)):
            s = to_field(s)
        x = to_field(s) / P2I**n
        # drop the rational constant of x: the class lives modulo (2 pi i)^n Q
        if x.is_polynomial():
            s_red = PeriodElement({k: c for k, c in x.num.items() if k != (0, 0)}) * P2I**n
        else:
            s_red = to_field(s)
        # zeta(3) coefficient: the Z^1 P^0 component of the reduced representative
        zc = s_red.coeff(0, 1) if s_red.is_polynomial() else Fraction(0)
        residual = s_red - ZETA3 * zc
        return cls(n, s, zc, residual)

    @classmethod
    def _numeric(cls, n: int, s: BigComplex) -> "ExtClass":
        p = s.precision
        with mp.workdps(p + 10):
            tpi_n = mpmath.mpc(0, 2 * mp.pi) ** n
            x = s.value / tpi_n
            # rational multiple of (2 pi i)^n sits in the real part of x
            rho = rational_reconstruct(mpmath.mpf(x.real), 10**6, precision=p)
            red = s.value - (tpi_n * (mpmath.mpf(rho.numerator) / rho.denominator) if rho is not None else 0)
            zc = None
            z3 = mpmath.zeta(3)
            if abs(red.imag) < mpmath.mpf(10) ** (-(p // 2)):
                zc = rational_reconstruct(mpmath.mpf(red.real / z3), 10**6, precision=p)
            residual = mpmath.mpc(red - (z3 * mpmath.mpf(zc.numerator) / zc.denominator if zc is not None else 0))
        return cls(n, s, zc, BigComplex(residual, p))

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.representative, BigComplex)

    def is_zero(self) -> bool:
        return self == ExtClass.from_representative(self.n, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtClass) or other.n != self.n:
            return NotImplemented
        if self.is_exact and other.is_exact:
            d = (to_field(self.representative) - to_field(other.representative)) / P2I**self.n
            return field_is_rational(d)
        a = self._num(self.representative)
        b = self._num(other.representative)
        p = min(
            x.precision for x in (self.representative, other.representative) if isinstance(x, BigComplex)
        )
        with mp.workdps(p + 10):
            d = (a - b) / mpmath.mpc(0, 2 * mp.pi) ** self.n
            if abs(d.imag) > mpmath.mpf(10) ** (-(p // 2)):
                return False
            return rational_reconstruct(mpmath.mpf(d.real), 10**6, precision=p) is not None

    def __hash__(self):
        return hash((self.n, self.zeta3_coeff))

    @staticmethod
    def _num(x):
        if isinstance(x, BigComplex):
            return x.value
        return field_evaluate(x, 60)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        """Baer sum, realised on representatives."""
        if other.n != self.n:
            raise ValueError("classes live in different groups")
        if self.is_exact and other.is_exact:
            return ExtClass.from_representative(self.n, to_field(self.representative) + to_field(other.representative))
        p = min(x.precision for x in (self.representative, other.representative) if isinstance(x, BigComplex))
        return ExtClass.from_representative(
            self.n, BigComplex(self._num(self.representative) + self._num(other.representative), p)
        )

    def __neg__(self) -> "ExtClass":
        if self.is_exact:
            return ExtClass.from_representative(self.n, -to_field(self.representative))
        return ExtClass.from_representative(self.n, -self.representative)

    def residual_is_zero(self) -> bool:
        if self.is_exact:
            return self.residual == 0
        return abs(self.residual.value) < mpmath.mpf(10) ** (-(self.residual.precision // 2))

    def to_json(self) -> dict:
        if self.is_exact:
            try:
                res = field_to_period_scalar(self.residual).to_json()
            except ValueError:
                res = str(self.residual)
            rep = str(ScalarKind("period").to_str(to_field(self.representative)))
        else:
            res = complex_str(self.residual.value, self.residual.precision)
            rep = complex_str(self.representative.value, self.representative.precision)
        return {
            "group": f"C/(2*pi*i)^{self.n} Q",
            "tate_twist": self.n,
            "zeta3_coeff": fraction_str(self.zeta3_coeff) if self.zeta3_coeff is not None else None,
            "residual": res,
            "representative": rep,
        }


@_at_input_precision
def construct_extension(n: int, s) -> MHS:
    """Extension of Q(0) by Q(n) with lattice ((2 pi i)^n e_1, e_2) and F^0 = <s e_1 + e_2>."""
    if n < 1:
        raise ValueError("n must be >= 1")
    one = Fraction(1)
    if isinstance(s, BigComplex):
        kind = ScalarKind("numeric", s.precision - 5)
        with mp.workdps(s.precision + 10):
            c = s.value / mpmath.mpc(0, 2 * mp.pi) ** n
        f_vec = (c, mpmath.mpc(1))
    else:
        kind = ScalarKind("period")
        f_vec = (to_field(s) / P2I**n, PERIOD_FIELD(1))
    W = {-2 * n: ((one, Fraction(0)),), 0: ((one, Fraction(0)), (Fraction(0), one))}
    F = {-n: (tuple(kind.coerce(x) for x in (one, Fraction(0))), tuple(kind.coerce(x) for x in (Fraction(0), one)))}
    for p in range(-n + 1, 1):
        F[p] = (f_vec,)
    return _make_mhs((f"(2*pi*i)^{n}*e1", "e2"), W, F, kind)


@_at_input_precision
def ext_class(m: MHS) -> ExtClass:
    """Class of a two-step extension of Q(-b/2) by Q(-a/2) (weights a < b).

    The F^{b/2}-lift of the rational quotient generator minus its rational lift
    lies in the sub; its coordinate times (2 pi i)^n (n = (b - a)/2) is the
    class.  Generators: the echelon generator of W_a and a standard basis
    vector not in W_a.
    """
    if m.dim != 2:
        raise MHSError("ext_class needs a two-dimensional MHS")
    gw = m.graded_weights()
    if len(gw) != 2 or any(w % 2 for w in gw):
        raise MHSError(f"expected two even weights, got {gw}")
    a, b = gw
    n = (b - a) // 2
    if n < 1:
        raise MHSError("weights must differ")
    z = m.kind.is_zero
    sub = m.weight(a)
    if len(sub) != 1 or len(m.weight(b)) != 2:
        raise MHSError("not an extension of one Tate object by another")
    sub_vec = sub[0]
    piv = next(i for i, x in enumerate(sub_vec) if x != 0)
    sub_vec = tuple(x / sub_vec[piv] for x in sub_vec)
    q_idx = 1 - piv
    Fk = m.hodge(b // 2)
    if len(Fk) != 1:
        raise MHSError(f"F^{b // 2} must be a line for a separated extension")
    Fk_in_sub = la.intersection(Fk, [tuple(m.kind.coerce(x) for x in sub_vec)], 2, z, m.kind.one)
    if Fk_in_sub:
        raise MHSError("extension is not separated")
    f = Fk[0]
    if z(f[q_idx]):
        raise MHSError("F-line does not surject onto the quotient")
    f = tuple(x / f[q_idx] for x in f)
    e_q = tuple(m.kind.coerce(Fraction(1 if i == q_idx else 0)) for i in range(2))
    diff = tuple(x - y for x, y in zip(f, e_q))
    coord = diff[piv] / m.kind.coerce(sub_vec[piv])
    if m.kind.name == "numeric":
        p = m.kind.tol_digits + 5
        with mp.workdps(p + 10):
            s = mpmath.mpc(coord * mpmath.mpc(0, 2 * mp.pi) ** n)
        return ExtClass.from_representative(n, BigComplex(s, p))
    s = to_field(coord) * P2I**n
    return ExtClass.from_representative(n, s)


# ---------------------------------------------------------------------------
# the limit MHS on H^3
# ---------------------------------------------------------------------------

LIMIT_LABELS = ("b0", "b1", "b2", "b3")  # b_j = (2 pi i)^(j-3) x^j


def monodromy_log_beta(y: YCoefficients) -> NilpotentOp:
    """N = log Psi(T) in the beta basis, derived from T_K and S1."""
    return _monodromy_log_beta(Fraction(y.Y111), Fraction(y.Y011), Fraction(y.Y001))


@functools.lru_cache(maxsize=256)
def _monodromy_log_beta(Y111: Fraction, Y011: Fraction, Y001: Fraction) -> NilpotentOp:
    # T_K and S1 only see the rational part of Y, so the result is cached on it
    y = YCoefficients(Y111, Y011, Y001)
    TK = build_TK(y)
    psi_alpha = la.inverse(la.transpose(TK))
    N_alpha = _unipotent_log(psi_alpha)
    S1 = build_S1(y)
    N_beta = la.matmul(la.matmul(la.inverse(S1), N_alpha), S1)
    return NilpotentOp(N_beta)


def _y_kind(y: YCoefficients) -> ScalarKind:
    if isinstance(y.Y000, BigComplex):
        return ScalarKind("numeric", y.Y000.precision - 5)
    return ScalarKind("period")


@functools.lru_cache(maxsize=32)
def derivative_limits(basis: FrobeniusBasis) -> list:
    """Limits at 0 of the untwisted ``theta^p varpi`` in the gamma-tilde basis.

    Returns four coordinate vectors (entries in Q(2 pi i)); exact theory gives
    ``p!/(2 pi i)^p`` times the p-th unit vector.
    """
    P = P2I
    out = []
    for p in range(4):
        v_polys = []  # v_k as polynomial in l with field coefficients
        for k in range(4):
            s = basis.rational_period(k)
            for _ in range(p):
                s = logseries_theta(s)
            v_polys.append([to_field(t.coeffs[0]) / P**k for t in s.terms])
        # untwist: u_k = sum_m binom(k, m) (-l/P)^(k-m) v_m
        from math import comb

        u = []
        for k in range(4):
            poly = [PERIOD_FIELD(0)] * 8
            for m in range(k + 1):
                c = comb(k, m) * (-1) ** (k - m)
                for j, vc in enumerate(v_polys[m]):
                    poly[j + k - m] += c * vc / P ** (k - m)
            if any(x != 0 for x in poly[1:]):
                raise MHSError("log terms survive in the derivative limit")
            u.append(poly[0])
        out.append(tuple(u))
    return tuple(out)


@_at_input_precision
def limit_hodge_filtration(basis: FrobeniusBasis, y: YCoefficients) -> dict:
    """``{p: basis}`` for p = 0..3 in the lattice coordinates b_0..b_3."""
    if y.Y111 == 0:
        raise MHSError("Y111 = 0")
    if y.Y000 is None:
        raise MHSError("Y000 is required for the Hodge filtration")
    kind = _y_kind(y)
    lim = derivative_limits(basis)
    S2 = build_S2(y)
    S2k = la.matmap(S2, kind.coerce)
    vecs = []
    for u in lim:
        uk = tuple(kind.coerce(x) for x in u)
        vecs.append(la.matvec(S2k, uk))  # b-coordinates of sum_a u_a gamma~^a
    return {3 - p: la.span(vecs[: p + 1], kind.is_zero) for p in range(4)}


@_at_input_precision
def closed_form_hodge(y: YCoefficients) -> dict:
    """Reference: F^3 = <b0 + Y000/(3 Y111) b3>, then adjoin b1, b2, b3."""
    kind = _y_kind(y)
    c = kind.coerce(y.Y000) / (3 * y.Y111)
    one, zero = kind.one, kind.one * 0
    v0 = (one, zero, zero, c)
    e = [tuple(one if i == j else zero for i in range(4)) for j in range(4)]
    return {3: la.span([v0], kind.is_zero), 2: la.span([v0, e[1]], kind.is_zero),
            1: la.span([v0, e[1], e[2]], kind.is_zero), 0: la.span([v0, e[1], e[2], e[3]], kind.is_zero)}


@_at_input_precision
def assemble_limit_mhs(basis: FrobeniusBasis, y: YCoefficients) -> MHS:
    N = monodromy_log_beta(y)
    W = weight_filtration(N, 3)
    F = limit_hodge_filtration(basis, y)
    m = _make_mhs(LIMIT_LABELS, W, F, _y_kind(y))
    m.validate()
    return m


@_at_input_precision
def split_h3(m: MHS) -> tuple[MHS, MHS, MHS]:
    """(Q(-1) on the x^2-line, Q(-2) on the x^1-line, M on <b0, b3>)."""
    one, zero = Fraction(1), Fraction(0)
    e = [tuple(one if i == j else zero for i in range(4)) for j in range(4)]
    q1 = restrict(m, [e[2]], ("b2",))
    q2 = restrict(m, [e[1]], ("b1",))
    M = restrict(m, [e[0], e[3]], ("b0", "b3"))
    back = reorder(direct_sum(M, q2, q1), (0, 2, 3, 1))
    if not back.same_filtrations(m):
        raise SplittingError("the three summands do not reassemble the limit MHS")
    if not (q1.same_filtrations(tate(-1)) and q2.same_filtrations(tate(-2))):
        raise SplittingError("split-off lines are not Q(-1) and Q(-2)")
    return q1, q2, M
