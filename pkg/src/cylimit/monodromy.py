"""Numeric analytic continuation and monodromy in the Frobenius basis.

Conventions
-----------
* Solutions are continued as Taylor data ``(y, y', y'', y''')`` in the
  variable phi.  A transfer matrix maps the data at the start of a path to the
  data at its end.
* Monodromy matrices act on the row vector of canonical periods: continuing
  ``varpi_j`` once around a loop gives ``sum_i varpi_i M[i][j]``.  With this
  convention the counterclockwise loop around 0 gives the upper-triangular
  Pascal matrix ``T_Can``, and the matrix in the integral basis ``Pi = S varpi``
  is ``S^{-t} M S^t``.
* Every loop starts at a small positive basepoint ``b``, passes through the hub
  ``h = b (1 + i)`` and runs counterclockwise around exactly one singularity.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
import mpmath
from mpmath import mp

from . import linalg as la
from .mirror import J, YCoefficients, build_S, build_TK
from .numerics import BigComplex, complex_str
from .picard_fuchs import ORDER, PFOperator, frobenius_basis

log = logging.getLogger(__name__)

#: extra digits carried by every continuation
WORK_GUARD = 30
#: maximal step as a fraction of the distance to the nearest singularity
STEP_RATIO = Fraction(1, 2)
#: waypoints on the polygon around a singularity
POLYGON_SIDES = 12


class ContinuationError(RuntimeError):
    """A continuation step failed (too close to a singularity or no convergence)."""


class RootFindingError(RuntimeError):
    pass


class IntegralStructureError(RuntimeError):
    """No integral symplectic basis matching the T_K template was found."""

    def __init__(self, message: str, candidates: Sequence = ()):
        super().__init__(message)
        self.candidates = list(candidates)


class MatchingError(RuntimeError):
    """The Frobenius data matrix at the basepoint is numerically singular."""


# ---------------------------------------------------------------------------
# singular points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularPointSet:
    points: tuple  # nonzero roots of R_4 (mpc), sorted by modulus then argument
    precision: int
    includes_infinity: bool = True

    @property
    def finite(self) -> tuple:
        return (mpmath.mpc(0),) + self.points

    def nearest_nonzero(self):
        if not self.points:
            return None
        return min(abs(p) for p in self.points)

    def distance(self, z) -> mpmath.mpf:
        return min(abs(z - p) for p in self.finite)

    def to_json(self) -> dict:
        return {
            "finite": [complex_str(p, self.precision) for p in self.finite],
            "infinity": self.includes_infinity,
        }


def singularities(op: PFOperator, precision: int = 50) -> SingularPointSet:
    """0 together with the roots of the leading coefficient R_4."""
    r4 = [c for c in op.R[ORDER]]
    while r4 and r4[-1] == 0:
        r4.pop()
    if not r4:
        raise RootFindingError("leading coefficient R_4 vanishes identically")
    lead_zero = 0
    while lead_zero < len(r4) and r4[lead_zero] == 0:
        lead_zero += 1
    core = r4[lead_zero:]
    dps = precision + WORK_GUARD
    roots = []
    if len(core) > 1:
        with mp.workdps(dps):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(core)]
            try:
                found = mpmath.polyroots(coeffs, maxsteps=200 + 10 * len(core), extraprec=4 * dps)
            except mpmath.libmp.libhyper.NoConvergence as exc:
                raise RootFindingError(f"root finding did not converge: {exc}") from exc
            roots = [mpmath.mpc(z) for z in found]
            # clean imaginary noise on real roots
            tol = mpmath.mpf(10) ** (-(dps - 5))
            roots = [mpmath.mpc(z.real, 0) if abs(z.imag) < tol else z for z in roots]
            for i, a in enumerate(roots):
                for b in roots[i + 1:]:
                    if abs(a - b) < mpmath.mpf(10) ** (-(precision // 2)):
                        raise RootFindingError("R_4 has a repeated root; points are not distinct at working precision")
    roots.sort(key=lambda z: (float(abs(z)), float(mpmath.arg(z))))
    return SingularPointSet(tuple(roots), precision)


# ---------------------------------------------------------------------------
# paths and continuation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuationPath:
    """Waypoints with every step inside half the local radius of convergence."""

    points: tuple

    @classmethod
    def through(cls, corners: Sequence, sing: SingularPointSet, ratio=STEP_RATIO) -> "ContinuationPath":
        """Polygonal path through ``corners``, subdivided to respect the step bound."""
        ratio = mpmath.mpf(ratio.numerator) / ratio.denominator
        pts = [mpmath.mpc(corners[0])]
        for target in corners[1:]:
            target = mpmath.mpc(target)
            while True:
                cur = pts[-1]
                d = sing.distance(cur)
                if d == 0:
                    raise ContinuationError("path meets a singular point")
                gap = abs(target - cur)
                step = ratio * d * mpmath.mpf("0.95")
                if gap <= step:
                    if gap > 0:
                        pts.append(target)
                    break
                pts.append(cur + (target - cur) * step / gap)
                if len(pts) > 100000:
                    raise ContinuationError("path needs too many steps; it runs into a singularity")
        return cls(tuple(pts))

    def reversed(self) -> "ContinuationPath":
        return ContinuationPath(tuple(reversed(self.points)))

    def __add__(self, other: "ContinuationPath") -> "ContinuationPath":
        if self.points and other.points and abs(self.points[-1] - other.points[0]) != 0:
            raise ValueError("paths do not connect")
        return ContinuationPath(self.points + other.points[1:])


def _d_form_numeric(op: PFOperator):
    return [[mpmath.mpf(c.numerator) / c.denominator for c in q] for q in op.to_d_form()]


def _shifted(q: Sequence, z0) -> list:
    """Coefficients of q(z0 + h) in h."""
    out = [mpmath.mpc(0)] * len(q)
    for i, c in enumerate(q):
        if c == 0:
            continue
        for j in range(i + 1):
            out[j] += c * math.comb(i, j) * z0 ** (i - j)
    return out


def _to_gmpy(x) -> gmpy2.mpc:
    x = mpmath.mpc(x)

    def part(v):
        sign, man, exp, _ = mpmath.mpf(v)._mpf_
        return gmpy2.mul_2exp(gmpy2.mpfr(-man if sign else man), exp)

    return gmpy2.mpc(part(x.real), part(x.imag))


def _from_gmpy(z) -> mpmath.mpc:
    def part(v):
        if v == 0:
            return mpmath.mpf(0)
        man, exp = v.as_mantissa_exp()
        return mpmath.mpf((int(man), int(exp)))

    return mpmath.mpc(part(z.real), part(z.imag))


def _taylor_step(Qn, z0, h, dps: int) -> mpmath.matrix:
    """Transfer matrix of one step from z0 to z0 + h for the D-form operator ``Qn``.

    The recurrence runs on the scaled coefficients ``d_m = c_m h^m`` of
    ``y(z0 + x h) = sum d_m x^m``; the inner loop uses gmpy2 scalars.
    """
    A = [_shifted(q, z0) for q in Qn]
    a4 = A[ORDER][0]
    if abs(a4) == 0:
        raise ContinuationError(f"step starts at a singular point {z0}")
    deg = max(len(a) for a in A) - 1
    bits = int(dps * 3.33) + 16
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        # b_kj = a_kj h^(4 - k + j) / a_4(z0): constant weights of d_(n - j + k)
        weights = []
        for k in range(ORDER + 1):
            for j, a in enumerate(A[k]):
                if a == 0 or (k == ORDER and j == 0):
                    continue
                weights.append((k, j, _to_gmpy(a * h ** (ORDER - k + j) / a4)))
        eps = gmpy2.mpfr(10) ** (-dps)
        cols = []
        for col in range(ORDER):
            hc = _to_gmpy(h) ** col
            d = [gmpy2.mpc(0)] * ORDER
            d[col] = hc / math.factorial(col)
            scale = abs(d[col]) if col else gmpy2.mpfr(1)
            n = 0
            small = 0
            while True:
                acc = gmpy2.mpc(0)
                for k, j, w in weights:
                    m = n - j + k
                    if m < k:
                        continue
                    acc += w * (d[m] * _falling(m, k))
                d.append(-acc / _falling(n + ORDER, ORDER))
                n += 1
                term = abs(d[-1])
                scale = max(scale, term)
                if term < eps * scale:
                    small += 1
                    if small >= deg + ORDER:
                        break
                else:
                    small = 0
                if n > 20 * dps + 500:
                    raise ContinuationError("Taylor tail is not decaying; step too long for the radius of convergence")
            cols.append(d)
        hg = _to_gmpy(h)
        T = mpmath.matrix(ORDER, ORDER)
        for col, d in enumerate(cols):
            for r in range(ORDER):
                s = gmpy2.mpc(0)
                for m in range(r, len(d)):
                    s += d[m] * _falling(m, r)
                T[r, col] = _from_gmpy(s / hg**r)
    return T


def _falling(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= m - i
    return out


def continue_along(op: PFOperator, path: ContinuationPath, precision: int = 50,
                   sing: SingularPointSet | None = None) -> mpmath.matrix:
    """Transfer matrix on Taylor data ``(y, y', y'', y''')`` from path start to end."""
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        P = mpmath.eye(ORDER)
        if len(path.points) < 2:
            return P
        sing = sing or singularities(op, precision)
        Qn = _d_form_numeric(op)
        ratio = mpmath.mpf(STEP_RATIO.numerator) / STEP_RATIO.denominator
        for z0, z1 in zip(path.points, path.points[1:]):
            d = sing.distance(z0)
            if abs(z1 - z0) > ratio * d * (1 + mpmath.mpf(10) ** (-10)):
                raise ContinuationError(f"step {z0} -> {z1} exceeds half the local radius of convergence")
            P = _taylor_step(Qn, z0, z1 - z0, dps) * P
        return P


# ---------------------------------------------------------------------------
# monodromy matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonodromyMatrix:
    entries: tuple  # 4x4 mpc
    precision: int
    point: object  # mpc or "infinity"
    index: int | None = None
    orientation: str = "counterclockwise"

    @property
    def matrix(self) -> mpmath.matrix:
        return mpmath.matrix([list(r) for r in self.entries])

    def det(self):
        with mp.workdps(self.precision + WORK_GUARD):
            return mpmath.det(self.matrix)

    def max_error(self, exact) -> mpmath.mpf:
        """max |M - exact| entrywise (exact: rational matrix)."""
        with mp.workdps(self.precision + WORK_GUARD):
            return max(
                abs(self.entries[i][j] - (mpmath.mpf(exact[i][j].numerator) / exact[i][j].denominator
                                          if isinstance(exact[i][j], Fraction) else exact[i][j]))
                for i in range(ORDER) for j in range(ORDER)
            )

    def to_json(self) -> dict:
        p = self.precision
        return {
            "point": self.point if isinstance(self.point, str) else complex_str(self.point, p),
            "index": self.index,
            "orientation": self.orientation,
            "matrix": [[complex_str(x, p) for x in row] for row in self.entries],
        }


def _to_entries(M: mpmath.matrix) -> tuple:
    return tuple(tuple(mpmath.mpc(M[i, j]) for j in range(M.cols)) for i in range(M.rows))


def basepoint(sing: SingularPointSet) -> mpmath.mpf:
    """1/10 of the distance to the nearest nonzero singularity (1/10 if there is none)."""
    r = sing.nearest_nonzero()
    with mp.workdps(sing.precision + WORK_GUARD):
        return mpmath.mpf(r) / 10 if r is not None else mpmath.mpf(1) / 10


def _frobenius_order(sing: SingularPointSet, b, precision: int) -> int:
    r = sing.nearest_nonzero()
    ratio = float(b / r) if r is not None else 0.1
    digits = precision + WORK_GUARD
    return int(math.ceil(digits / -math.log10(ratio))) + 20


def frobenius_data_matrix(op: PFOperator, b, precision: int, order: int | None = None,
                          sing: SingularPointSet | None = None) -> mpmath.matrix:
    """V[d][k]: d-th phi-derivative of varpi_k at the basepoint b."""
    sing = sing or singularities(op, precision)
    order = order or _frobenius_order(sing, b, precision)
    basis = frobenius_basis(op, order)
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        Jt = basis.numeric_jets(b, dps)
        V = mpmath.matrix(ORDER, ORDER)
        b = mpmath.mpc(b)
        for k in range(ORDER):
            t0, t1, t2, t3 = (Jt[p][k] for p in range(ORDER))
            V[0, k] = t0
            V[1, k] = t1 / b
            V[2, k] = (t2 - t1) / b**2
            V[3, k] = (t3 - 3 * t2 + 2 * t1) / b**3
    return V


def _loop_corners(s, h, sing: SingularPointSet, b, sides: int = POLYGON_SIDES) -> list:
    others = [abs(s - p) for p in sing.finite if p != s]
    radius = min(others + [abs(h - s)]) / 2
    direction = (h - s) / abs(h - s)
    start = s + radius * direction
    corners = [b, h, start]
    for k in range(1, sides + 1):
        corners.append(s + radius * direction * mpmath.expjpi(mpmath.mpf(2 * k) / sides))
    corners[-1] = start
    corners += [h, b]
    return corners


def _loop_matrix(op, corners, V, Vinv, sing, precision) -> mpmath.matrix:
    path = ContinuationPath.through(corners, sing)
    P = continue_along(op, path, precision, sing)
    return Vinv * P * V


@dataclass(frozen=True)
class MonodromyData:
    singular_points: SingularPointSet
    basepoint: object
    hub: object
    matrices: tuple  # MonodromyMatrix per finite singular point, same order as singular_points.finite
    infinity: MonodromyMatrix
    order: tuple  # indices of `matrices` in the product order (by argument around the hub)
    relation_error: object
    precision: int

    def around(self, index: int) -> MonodromyMatrix:
        return self.matrices[index]

    def to_json(self) -> dict:
        p = self.precision
        return {
            "singular_points": self.singular_points.to_json(),
            "basepoint": complex_str(self.basepoint, p),
            "hub": complex_str(self.hub, p),
            "loop_orientation": "counterclockwise",
            "monodromy_convention": "continued varpi_j = sum_i varpi_i M[i][j]",
            "matrices": [m.to_json() for m in self.matrices],
            "infinity": self.infinity.to_json(),
            "product_order": list(self.order),
            "product_relation_error": mpmath.nstr(self.relation_error, 5),
        }


def monodromy_around(op: PFOperator, sing_point, base=None, precision: int = 50,
                     order: int | None = None) -> MonodromyMatrix:
    """Counterclockwise monodromy around one finite singular point."""
    sing = singularities(op, precision)
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        b = mpmath.mpf(base) if base is not None else basepoint(sing)
        h = mpmath.mpc(b, b)
        s = mpmath.mpc(sing_point)
        # idx is None for an ordinary point, where the loop is contractible
        idx = next((i for i, p in enumerate(sing.finite) if abs(p - s) < mpmath.mpf(10) ** (-(precision // 2))), None)
        V = frobenius_data_matrix(op, b, precision, order, sing)
        Vinv = _checked_inverse(V, precision)
        M = _loop_matrix(op, _loop_corners(s, h, sing, b), V, Vinv, sing, precision)
        return MonodromyMatrix(_to_entries(M), precision, s, idx)


def _checked_inverse(V, precision):
    c = mpmath.mnorm(V, 1) * mpmath.mnorm(V**-1, 1)
    if c > mpmath.mpf(10) ** (WORK_GUARD - 5):
        raise MatchingError(f"Frobenius data matrix is ill-conditioned (condition number {mpmath.nstr(c, 5)})")
    return V**-1


def all_monodromies(op: PFOperator, precision: int = 50, order: int | None = None) -> MonodromyData:
    """Monodromy around every finite singular point and around infinity."""
    sing = singularities(op, precision)
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        b = basepoint(sing)
        h = mpmath.mpc(b, b)
        V = frobenius_data_matrix(op, b, precision, order, sing)
        Vinv = _checked_inverse(V, precision)
        mats = []
        for i, s in enumerate(sing.finite):
            M = _loop_matrix(op, _loop_corners(s, h, sing, b), V, Vinv, sing, precision)
            mats.append(MonodromyMatrix(_to_entries(M), precision, s, i))
            log.info("monodromy around %s done", mpmath.nstr(s, 8))
        # the loops are composed in order of decreasing argument seen from the hub
        # (all singularities lie below h, so the arguments are in (-pi, 0])
        order_idx = sorted(range(len(mats)), key=lambda i: -float(mpmath.arg(sing.finite[i] - h)))
        prod = mpmath.eye(ORDER)
        for i in order_idx:
            prod = mats[i].matrix * prod
        # clockwise big circle around the hub
        R = max(abs(p - h) for p in sing.finite) * 2
        corners = [b, h]
        start = h + R * (b - h) / abs(b - h)
        corners.append(start)
        dirn = (b - h) / abs(b - h)
        n = 4 * POLYGON_SIDES
        for k in range(1, n + 1):
            corners.append(h + R * dirn * mpmath.expjpi(-mpmath.mpf(2 * k) / n))
        corners[-1] = start
        corners += [h, b]
        Minf = _loop_matrix(op, corners, V, Vinv, sing, precision)
        rel = Minf * prod - mpmath.eye(ORDER)
        err = max(abs(rel[i, j]) for i in range(ORDER) for j in range(ORDER))
        inf_mat = MonodromyMatrix(_to_entries(Minf), precision, "infinity", None, "clockwise around all finite points")
        return MonodromyData(sing, b, h, tuple(mats), inf_mat, tuple(order_idx), err, precision)


# ---------------------------------------------------------------------------
# integral structure
# ---------------------------------------------------------------------------


def _num(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, BigComplex):
        return x.value
    if hasattr(x, "evaluate"):
        return x.evaluate(mp.dps).value
    return mpmath.mpc(x)


def numeric_S(y: YCoefficients) -> mpmath.matrix:
    return mpmath.matrix([[_num(x) for x in row] for row in build_S(y)])


def integral_matrices(mons: Sequence[MonodromyMatrix], y: YCoefficients) -> list:
    """``S^{-t} M S^t`` for each monodromy (numeric)."""
    S = numeric_S(y)
    St = S.T
    Sti = St**-1
    return [Sti * m.matrix * St for m in mons]


def _near_integer(x, tol) -> int | None:
    if abs(mpmath.im(x)) > tol:
        return None
    n = int(mpmath.nint(mpmath.re(x)))
    return n if abs(mpmath.re(x) - n) <= tol else None


def _round_matrix(T, tol):
    out = []
    for i in range(T.rows):
        row = []
        for j in range(T.cols):
            n = _near_integer(T[i, j], tol)
            if n is None:
                return None
            row.append(Fraction(n))
        out.append(tuple(row))
    return tuple(out)


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]), reverse=True)


def _is_mum_loop(m: MonodromyMatrix) -> bool:
    return m.index == 0 or (not isinstance(m.point, str) and abs(m.point) == 0)


@dataclass(frozen=True)
class IntegralStructure:
    y: YCoefficients
    S: tuple  # numeric S (mpc entries)
    integral: tuple  # rounded integral monodromy matrices (Fractions), same order as input
    max_deviation: object
    candidates: tuple  # every Y that passed (canonical)
    precision: int

    def to_json(self) -> dict:
        p = self.precision
        return {
            "Y": self.y.to_json(p),
            "S": [[complex_str(x, p) for x in row] for row in self.S],
            "integral_monodromies": [[[str(x) for x in row] for row in T] for T in self.integral],
            "max_deviation_from_integers": mpmath.nstr(self.max_deviation, 5),
            "candidates": [c.to_json(p) for c in self.candidates],
        }


def integral_structure(mons: Sequence[MonodromyMatrix], Y111_hint: int | None = None,
                       precision: int | None = None, height: int = 10**6) -> IntegralStructure:
    """Find Y (with numeric Y000) making every ``S^{-t} M S^t`` integral symplectic.

    The loop around 0 must be among ``mons``; its conjugate must equal T_K.
    Writing ``A = S K S^{-1}`` with ``K = M^t``, rows 2 and 3 of ``A S = S K``
    give ``6 v_3 = Y111 A_{r0}`` and ``-2 v_2 = Y111 A_{r1}`` for
    ``v = e_0 K`` (r = 2) and ``v = e_1 K`` (r = 3), so Y111 divides those
    integers.  Y011 and Y001 are fixed up to integral shifts by admissibility,
    and the entry ``A_{22}`` gives a linear integrality condition for Y000.
    Each candidate is verified on all matrices; the canonical representatives
    are reported.
    """
    if not mons:
        raise IntegralStructureError("no monodromy matrices")
    precision = precision or min(m.precision for m in mons)
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        tol = mpmath.mpf(10) ** (-(precision // 2))
        if not any(_is_mum_loop(m) for m in mons):
            raise IntegralStructureError("the loop around 0 is required")
        others = [m for m in mons if not _is_mum_loop(m)]
        ints = []
        rows = []  # (c0 value, v) pairs used for Y000
        for m in others:
            K = m.matrix.T
            for r in (0, 1):
                v = [K[r, j] for j in range(ORDER)]
                a = _near_integer(6 * v[3], tol)
                c = _near_integer(-2 * v[2], tol)
                if a is None or c is None:
                    raise IntegralStructureError("monodromy entries are not compatible with any integral structure "
                                                 "(6 v3 or 2 v2 is not an integer)")
                ints += [a, c]
                rows.append((a, c, v))
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        if Y111_hint is not None:
            y111s = [int(Y111_hint)]
            if g % Y111_hint:
                raise IntegralStructureError(f"Y111 = {Y111_hint} does not divide the observed integers (gcd {g})")
        elif g == 0:
            raise IntegralStructureError("Y111 is not determined by the data; pass a hint")
        else:
            y111s = _divisors(g)
        y111s = [d for d in y111s if d <= height]
        passed = []
        for y111 in y111s:
            if any(a6 % y111 or c2 % y111 for a6, c2, _ in rows):
                continue
            y011 = Fraction(y111, 2) % 1
            r = Fraction(y111, 6) % 1
            for y001 in (r, r + 1):
                if not _entry_23_integral(rows, y111, y011, y001, tol):
                    continue
                for y000 in _y000_candidates(rows, y111, y001, tol):
                    y = YCoefficients(y111, y011, y001, BigComplex(y000, precision)).canonical()
                    res = _verify(mons, y, tol)
                    if res is not None:
                        passed.append((y,) + res)
        if not passed:
            raise IntegralStructureError("no integral symplectic structure matches the T_K template")
        # conifold-type loops (rank(T - I) = 1) must be unit symplectic transvections
        unit = [p for p in passed if all(is_unit_transvection(T) for T in p[1] if _rank_one(T))]
        pool = unit or passed
        # among the survivors the largest Y111 (the coarsest lattice) is preferred
        top = max(p[0].Y111 for p in pool)
        chosen = [p for p in pool if p[0].Y111 == top]
        if len(chosen) > 1:
            raise IntegralStructureError(
                f"{len(chosen)} inequivalent integral structures with Y111 = {top} fit the data",
                [p[0] for p in chosen],
            )
        y, Ts, dev = chosen[0]
        S = _to_entries(numeric_S(y))
        log.info("integral structure: Y111=%s Y011=%s Y001=%s", y.Y111, y.Y011, y.Y001)
        return IntegralStructure(y, S, tuple(Ts), dev, tuple(p[0] for p in passed), precision)


def _frac_num(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _entry_23_integral(rows, y111: int, y011: Fraction, y001: Fraction, tol) -> bool:
    """``v_1 + c_0 Y001/2 + c_1 Y011`` (an entry of the integral matrix) must be an integer."""
    for a6, c2, v in rows:
        c0, c1 = a6 // y111, c2 // y111
        if _near_integer(v[1] + c0 * _frac_num(y001) / 2 + c1 * _frac_num(y011), tol) is None:
            return False
    return True


def _y000_candidates(rows, y111: int, y001: Fraction, tol) -> list:
    """Values of Y000 (mod 3) with ``v_0 - a c_0 - b c_1`` integral for every row.

    Here ``a = -Y000/3`` and ``b = -Y001/2``.  Each row says
    ``a c_0 = x (mod 1)``; a Bezout combination of the rows gives ``a G = X (mod 1)``
    with G the gcd of the c_0, and the G resulting values of a mod 1 are
    filtered against every row.
    """
    b = -_frac_num(y001) / 2
    eqs = []
    for a6, c2, v in rows:
        c0, c1 = a6 // y111, c2 // y111
        if c0 != 0:
            eqs.append((c0, v[0] - b * c1))
    if not eqs:
        raise IntegralStructureError("Y000 is not determined by the data (no monodromy mixes the top period)")
    G, X = eqs[0]
    for c, x in eqs[1:]:
        g, u, w = _ext_gcd(G, c)
        G, X = g, u * X + w * x
    if G < 0:
        G, X = -G, -X
    out = []
    for N in range(G):
        a = (X + N) / G
        if all(_near_integer(a * c - x, tol) is not None for c, x in eqs):
            out.append(-3 * a)
    return out


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, w) with u a + w b = g = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_w, w = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_w, w = w, old_w - q * w
    return old_r, old_u, old_w


def _verify(mons, y: YCoefficients, tol):
    Ts = integral_matrices(mons, y)
    rounded = []
    dev = mpmath.mpf(0)
    TK = build_TK(y)
    for m, T in zip(mons, Ts):
        R = _round_matrix(T, tol)
        if R is None:
            return None
        if la.matmul(la.matmul(la.transpose(R), J), R) != J:
            return None
        if _is_mum_loop(m) and R != TK:
            return None
        dev = max(dev, max(abs(T[i, j] - _num(R[i][j])) for i in range(ORDER) for j in range(ORDER)))
        rounded.append(R)
    return rounded, dev


def _rank_one(T) -> bool:
    return la.rank(la.matsub(T, la.identity(ORDER))) == 1


def is_unit_transvection(T) -> bool:
    """``T - I = +-v (J v)^t`` for a primitive integral vector v (Picard-Lefschetz form)."""
    N = la.matsub(T, la.identity(ORDER))
    if la.rank(N) != 1:
        return False
    col = next(c for c in la.transpose(N) if any(x != 0 for x in c))
    g = 0
    for x in col:
        g = math.gcd(g, int(x))
    v = [x / g for x in col]
    i = next(i for i in range(ORDER) if v[i] != 0)
    u = [N[i][j] / v[i] for j in range(ORDER)]
    Jv = list(la.matvec(J, v))
    return u == Jv or u == [-x for x in Jv]


def conifold_partner(v, sign: int = 1) -> tuple:
    """Unit transvection ``x -> x + sign (v^t J^t x) v`` in Sp(4, Z) for an integral vector v."""
    v = [Fraction(x) for x in v]
    Jv = la.matvec(J, v)
    return tuple(tuple(Fraction(int(i == j)) + sign * v[i] * Jv[j] for j in range(ORDER)) for i in range(ORDER))


def synthetic_monodromies(y: YCoefficients, partners: Sequence, precision: int = 50) -> list:
    """Row-convention monodromies ``S^t T S^{-t}`` from integral matrices.

    The first entry is the loop around 0 (from T_K), followed by one matrix
    per integral symplectic partner.
    """
    dps = precision + WORK_GUARD
    with mp.workdps(dps):
        S = numeric_S(y)
        St = S.T
        Sti = St**-1
        out = []
        for i, T in enumerate([build_TK(y)] + list(partners)):
            Tm = mpmath.matrix([[_num(Fraction(x)) for x in row] for row in T])
            out.append(MonodromyMatrix(_to_entries(St * Tm * Sti), precision, mpmath.mpc(i), i))
        return out


def random_symplectic(rng, steps: int = 6, bound: int = 3) -> tuple:
    """A random element of Sp(4, Z) as a product of elementary transvections."""
    M = la.identity(ORDER)
    for _ in range(steps):
        v = [Fraction(rng.randint(-bound, bound)) for _ in range(ORDER)]
        if all(x == 0 for x in v):
            continue
        k = Fraction(rng.choice([-1, 1]))
        # transvection x -> x + k (v^t J x) v preserves J
        Jv = la.vecmat(v, J)
        Tv = tuple(tuple((1 if i == j else 0) + k * v[i] * Jv[j] for j in range(ORDER)) for i in range(ORDER))
        M = la.matmul(Tv, M)
    return la.matmap(M, Fraction)
