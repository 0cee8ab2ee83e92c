"""Integer relations between high-precision reals and recognition of Y000.

``pslq`` is the classical one-level PSLQ iteration of Ferguson and Bailey on
mpmath reals; ``lll_relation`` reduces the usual relation lattice with an
exact integer LLL and is used as a fallback for longer vectors.  Relations
are sign-normalized (first nonzero coefficient positive).

``detect_zeta3_form`` recognizes ``y000 = -3 chi zeta(3)/(2 pi i)^3 + r``.
Since ``(2 pi i)^3 = -8 pi^3 i`` the zeta(3) part is purely imaginary and
``Im(y000) * 8 pi^3 = -3 chi zeta(3)``.  Detection runs at half the digits
the input carries; the answer is then checked with all carried digits.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp

from .numerics import BigComplex, BigFloat, fraction_str, rational_reconstruct

log = logging.getLogger(__name__)

DEFAULT_HEIGHT = 10**6
DEFAULT_PRECISION = 100
MIN_RELATION_PRECISION = 30


class RelationPrecisionError(ValueError):
    """The requested height bound cannot be resolved at the given precision."""


@dataclass(frozen=True)
class RelationResult:
    coeffs: tuple  # ints
    residual: object  # mpf, |sum a_i v_i| with all carried digits
    verified: bool
    precision: int

    def to_json(self) -> dict:
        return {
            "coefficients": [str(a) for a in self.coeffs],
            "residual": mpmath.nstr(self.residual, 5),
            "verified": self.verified,
            "precision": self.precision,
        }


def _as_mpf(v):
    if isinstance(v, BigFloat):
        return v.value
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _carried(v, default: int) -> int:
    return v.precision if isinstance(v, (BigFloat, BigComplex)) else default


def _normalize_sign(a: Sequence[int]) -> tuple:
    first = next((x for x in a if x != 0), 0)
    return tuple(-x for x in a) if first < 0 else tuple(a)


def _check_args(values, max_height: int, precision: int):
    if len(values) < 2:
        raise ValueError("need at least two values")
    if precision < MIN_RELATION_PRECISION:
        raise ValueError(f"precision must be at least {MIN_RELATION_PRECISION} digits")
    if max_height < 1:
        raise ValueError("max_height must be positive")
    if len(values) * math.log10(max_height) > precision:
        raise RelationPrecisionError(
            f"{precision} digits cannot resolve relations of height {max_height} among {len(values)} values"
        )


def _finish(coeffs, xs_full, carried: int, precision: int, max_height: int):
    """Residual with all carried digits; None if the relation fails the contract."""
    if coeffs is None or max(abs(a) for a in coeffs) > max_height or all(a == 0 for a in coeffs):
        return None
    coeffs = _normalize_sign(coeffs)
    with mp.workdps(carried + 10):
        scale = max(abs(x) for x in xs_full) or mpmath.mpf(1)
        res = abs(mpmath.fsum(a * x for a, x in zip(coeffs, xs_full)))
        if res > mpmath.mpf(10) ** (-(precision // 2)) * scale:
            return None
        verified = res <= mpmath.mpf(10) ** (-(3 * carried) // 4) * scale
    return RelationResult(coeffs, res, bool(verified), precision)


def pslq(values: Sequence, max_height: int = DEFAULT_HEIGHT, precision: int = DEFAULT_PRECISION,
         maxsteps: int = 10000):
    """Smallest integer relation found by PSLQ, or None.

    Detection uses ``precision`` digits; the residual is recomputed with
    every digit the inputs carry and the result is flagged verified when it
    is below ``10^(-3c/4)`` for c carried digits.
    """
    _check_args(values, max_height, precision)
    carried = min(_carried(v, precision) for v in values)
    with mp.workdps(carried + 10):
        xs_full = [_as_mpf(v) for v in values]
    with mp.workdps(precision + 10):
        xs = [+x for x in xs_full]
        scale = max(abs(x) for x in xs)
        if scale == 0:
            return _finish((1,) + (0,) * (len(xs) - 1), xs_full, carried, precision, max_height)
        for i, x in enumerate(xs):
            if abs(x) <= mpmath.mpf(10) ** (-precision) * scale:
                e = [0] * len(xs)
                e[i] = 1
                return _finish(tuple(e), xs_full, carried, precision, max_height)
        coeffs = _pslq_core(xs, max_height, precision, maxsteps)
    return _finish(coeffs, xs_full, carried, precision, max_height)


def _pslq_core(x, max_height: int, precision: int, maxsteps: int):
    n = len(x)
    gam = mpmath.sqrt(mpmath.mpf(4) / 3)
    tol = mpmath.mpf(10) ** (-(precision * 3) // 4)
    norm = mpmath.sqrt(mpmath.fsum(v * v for v in x))
    x = [v / norm for v in x]
    s = [mpmath.sqrt(mpmath.fsum(v * v for v in x[k:])) for k in range(n)]
    y = list(x)
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]
    H = [[mpmath.mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = s[j + 1] / s[j]
            else:
                H[i][j] = -x[i] * x[j] / (s[j] * s[j + 1])

    def reduce_rows(lo: int):
        for i in range(lo, n):
            for j in range(min(i - 1, n - 2), -1, -1):
                if H[j][j] == 0:
                    continue
                t = int(mpmath.nint(H[i][j] / H[j][j]))
                if t == 0:
                    continue
                y[j] += t * y[i]
                for k in range(j + 1):
                    H[i][k] -= t * H[j][k]
                for k in range(n):
                    A[i][k] -= t * A[j][k]
                    B[k][j] += t * B[k][i]

    def found():
        j = min(range(n), key=lambda j: abs(y[j]))
        return tuple(B[k][j] for k in range(n)) if abs(y[j]) < tol else None

    reduce_rows(1)
    if found():
        return found()
    for _ in range(maxsteps):
        m = max(range(n - 1), key=lambda i: gam ** (i + 1) * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        for k in range(n):
            B[k][m], B[k][m + 1] = B[k][m + 1], B[k][m]
        if m <= n - 3:
            t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                return None
            t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = t1 * t3 + t2 * t4
                H[i][m + 1] = -t2 * t3 + t1 * t4
        reduce_rows(m + 1)
        rel = found()
        if rel:
            return rel
        hmax = max(abs(H[j][j]) for j in range(n - 1))
        if hmax == 0:
            return None
        # every relation has norm at least 1 / max |H_jj|
        if 1 / hmax > max_height * math.sqrt(n):
            return None
        if max(abs(v) for row in A for v in row) > 10 ** (precision // 2):
            return None
    return None


# ---------------------------------------------------------------------------
# lattice reduction fallback
# ---------------------------------------------------------------------------


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list:
    """Exact integer LLL on the rows of ``basis``."""
    b = [list(map(int, r)) for r in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        bstar, mu, norms = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], bstar[j])) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(dot(v, v))
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b


def lll_relation(values: Sequence, max_height: int = DEFAULT_HEIGHT, precision: int = DEFAULT_PRECISION):
    """Integer relation from the reduced lattice ``(e_i | round(10^d v_i))``."""
    _check_args(values, max_height, precision)
    carried = min(_carried(v, precision) for v in values)
    with mp.workdps(carried + 10):
        xs_full = [_as_mpf(v) for v in values]
    n = len(values)
    d = precision - 2
    with mp.workdps(precision + 10):
        scale = max(abs(x) for x in xs_full) or mpmath.mpf(1)
        big = [int(mpmath.nint(x / scale * mpmath.mpf(10) ** d)) for x in xs_full]
    rows = [[int(i == j) for j in range(n)] + [big[i]] for i in range(n)]
    best = None
    for r in lll_reduce(rows):
        cand = _finish(tuple(r[:n]), xs_full, carried, precision, max_height)
        if cand is not None and (best is None or _norm(cand.coeffs) < _norm(best.coeffs)):
            best = cand
    return best


def _norm(a) -> int:
    return sum(x * x for x in a)


def find_relation(values: Sequence, max_height: int = DEFAULT_HEIGHT, precision: int = DEFAULT_PRECISION):
    """PSLQ, with the LLL fallback for four or more values."""
    res = pslq(values, max_height, precision)
    if res is None and len(values) >= 4:
        res = lll_relation(values, max_height, precision)
    return res


# ---------------------------------------------------------------------------
# zeta(3) form of Y000
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zeta3Form:
    chi: int
    r: Fraction
    verified: bool
    relation: RelationResult
    r_residual: object
    precision: int

    def as_tuple(self) -> tuple:
        return (self.chi, self.r)

    def to_json(self) -> dict:
        return {
            "chi": str(self.chi),
            "r": fraction_str(self.r),
            "verified": self.verified,
            "zeta3_relation": self.relation.to_json(),
            "r_residual": mpmath.nstr(self.r_residual, 5),
            "form": "Y000 = -3*chi*zeta(3)/(2*pi*i)^3 + r",
        }


def construct_y000(chi: int, r, precision: int) -> BigComplex:
    """``-3 chi zeta(3)/(2 pi i)^3 + r`` as a BigComplex."""
    r = Fraction(r)
    with mp.workdps(precision + 10):
        v = mpmath.mpc(-3 * chi * mpmath.zeta(3) / mpmath.mpc(0, 2 * mp.pi) ** 3 + mpmath.mpf(r.numerator) / r.denominator)
    return BigComplex(v, precision)


def detect_zeta3_form(y000, precision: int | None = None, max_height: int = DEFAULT_HEIGHT):
    """(chi, r) with ``y000 = -3 chi zeta(3)/(2 pi i)^3 + r``, or None.

    ``precision`` is the number of digits the input carries (defaults to the
    BigComplex precision); detection uses half of them.
    """
    if isinstance(y000, BigComplex):
        carried = y000.precision if precision is None else min(precision, y000.precision)
        z = y000.value
    else:
        if precision is None:
            raise ValueError("precision is required for plain numbers")
        carried = precision
        z = mpmath.mpc(y000)
    detect = max(MIN_RELATION_PRECISION, carried // 2)
    if carried < 2 * MIN_RELATION_PRECISION:
        raise ValueError(f"need at least {2 * MIN_RELATION_PRECISION} carried digits")
    with mp.workdps(carried + 10):
        X = BigFloat(mpmath.im(z) * 8 * mp.pi**3, carried)
        re = BigFloat(mpmath.re(z), carried)
        z3 = BigFloat(mpmath.zeta(3), carried)
    # the relation a X + b zeta(3) = 0 has height up to 3 |chi|
    height = max(3 * max_height, 3)
    try:
        rel = pslq([X, z3], height, detect)
    except RelationPrecisionError:
        raise
    if rel is None:
        log.info("no zeta(3) relation for the imaginary part")
        return None
    a, b = rel.coeffs
    if a == 0 or b % a:
        return None
    three_chi = b // a
    if three_chi % 3:
        log.info("zeta(3) coefficient %s is not a multiple of 3", three_chi)
        return None
    chi = three_chi // 3
    with mp.workdps(detect + 10):
        r = rational_reconstruct(re.value, max_height, precision=detect)
    if r is None:
        return None
    with mp.workdps(carried + 10):
        r_res = abs(re.value - mpmath.mpf(r.numerator) / r.denominator)
        r_ok = r_res <= mpmath.mpf(10) ** (-(3 * carried) // 4) * max(1, abs(re.value))
    return Zeta3Form(chi, r, bool(rel.verified and r_ok), rel, r_res, carried)
