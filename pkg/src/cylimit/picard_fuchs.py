"""Order-4 Picard-Fuchs operators in theta-form and their Frobenius basis at 0.

An operator is ``L = sum_i R_i(phi) theta^i`` with ``theta = phi d/dphi`` and
polynomial coefficients ``R_i`` given by ascending rational coefficient lists.

The Frobenius basis is built with the deformation method: write
``L(phi^e sum_n c_n(e) phi^n)`` and solve the coefficient recurrence with
``c_n(e)`` carried as a jet (a polynomial in ``e`` truncated after ``e^3``).
Then ``f_j = j! [e^j] sum_n c_n(e) phi^n`` and the canonical periods are

    varpi_k = (2 pi i)^(-k) sum_{j<=k} binom(k, j) f_{k-j} l^j,   l = log(phi).

The package keeps the rational part ``D_k = (2 pi i)^k varpi_k`` as a
:class:`~cylimit.series.LogSeries`.
"""
from __future__ import annotations

import functools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Sequence

import mpmath
from mpmath import mp

from .numerics import as_fraction, fraction_str
from .series import LogSeries, TruncSeries, logseries_theta

log = logging.getLogger(__name__)

ORDER = 4
INFINITY = "infinity"


class OperatorError(ValueError):
    """Malformed operator input."""


class NotMUMError(ValueError):
    """The point 0 is not a point of maximally unipotent monodromy."""


class NormalizationError(ValueError):
    """R_4(0) = 0 although 0 is a regular singular point; the user must rescale."""


class IrregularSingularityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# small polynomial helpers (ascending coefficient lists)
# ---------------------------------------------------------------------------


def _trim(p: Sequence) -> tuple:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (Fraction(0),)


def poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_scale(a, c):
    return _trim([c * x for x in a])


def poly_eval(p, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_shift(p, a):
    """Coefficients of ``p(a + x)`` in ``x``."""
    n = len(p)
    out = [0 * a] * n
    for k in range(n):
        s = 0 * a
        for i in range(k, n):
            if p[i] != 0:
                s += p[i] * comb(i, k) * a ** (i - k)
        out[k] = s
    return tuple(out)


def poly_order(p) -> int | None:
    """Order of vanishing at 0 (None for the zero polynomial)."""
    for i, c in enumerate(p):
        if c != 0:
            return i
    return None


def poly_str(p, var="x") -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        cs = fraction_str(c) if isinstance(c, Fraction) else str(c)
        terms.append(cs if i == 0 else f"{cs}*{var}^{i}" if i > 1 else f"{cs}*{var}")
    return " + ".join(terms) or "0"


@functools.lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind: theta^n = sum_k S(n,k) phi^k D^k."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@functools.lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind: phi^n D^n = sum_k s(n,k) theta^k."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


# ---------------------------------------------------------------------------
# operator type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PFOperator:
    """``sum_{i=0}^{4} R_i(phi) theta^i`` with exact rational polynomial coefficients."""

    R: tuple
    description: str = ""

    def __post_init__(self):
        if len(self.R) != ORDER + 1:
            raise OperatorError(f"expected {ORDER + 1} coefficient polynomials, got {len(self.R)}")
        R = tuple(_trim([as_fraction(c) for c in row]) if len(row) else (Fraction(0),) for row in self.R)
        if all(c == 0 for c in R[ORDER]):
            raise OperatorError("R_4 vanishes identically")
        object.__setattr__(self, "R", R)

    # -- construction / IO -------------------------------------------------
    @classmethod
    def from_dict(cls, d: dict) -> "PFOperator":
        if "theta_coefficients" not in d:
            raise OperatorError("missing field 'theta_coefficients'")
        rows = d["theta_coefficients"]
        if not isinstance(rows, list) or len(rows) != ORDER + 1:
            raise OperatorError("'theta_coefficients' must be a list of 5 rows")
        parsed = []
        for i, row in enumerate(rows):
            if not isinstance(row, list):
                raise OperatorError(f"theta_coefficients[{i}] must be a list")
            try:
                parsed.append(tuple(as_fraction(c if not isinstance(c, int) else int(c)) for c in row))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise OperatorError(f"theta_coefficients[{i}]: {exc}") from exc
        return cls(tuple(parsed), str(d.get("description", "")))

    @classmethod
    def from_file(cls, path) -> "PFOperator":
        text = Path(path).read_text()
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise OperatorError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        return {
            "theta_coefficients": [[fraction_str(c) for c in row] for row in self.R],
            "description": self.description,
        }

    @classmethod
    def quintic(cls) -> "PFOperator":
        """theta^4 - 5 phi (5 theta + 1)(5 theta + 2)(5 theta + 3)(5 theta + 4)."""
        return cls.hypergeometric((Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)), Fraction(3125),
                                  "quintic threefold mirror")

    @classmethod
    def hypergeometric(cls, alphas, C, description="") -> "PFOperator":
        """theta^4 - C phi prod_j (theta + alpha_j)."""
        prod = (Fraction(1),)
        for a in alphas:
            prod = poly_mul(prod, (as_fraction(a), Fraction(1)))
        C = as_fraction(C)
        R = []
        for i in range(ORDER + 1):
            c = prod[i] if i < len(prod) else 0
            R.append((Fraction(1 if i == ORDER else 0), -C * c))
        return cls(tuple(R), description)

    @classmethod
    def from_d_form(cls, Q: Sequence[Sequence], description="") -> "PFOperator":
        """Convert ``sum_k Q_k(phi) (d/dphi)^k`` to theta-form.

        Uses ``phi^k D^k = sum_i s(k, i) theta^i`` after multiplying through by the
        smallest power of phi that makes every ``Q_k / phi^k`` polynomial; a
        common power of phi is then removed on the left.
        """
        if len(Q) != ORDER + 1:
            raise OperatorError("expected 5 coefficient polynomials")
        Q = [_trim([as_fraction(c) for c in q]) for q in Q]
        M = 0
        for k, q in enumerate(Q):
            o = poly_order(q)
            if o is not None:
                M = max(M, k - o)
        R = [(Fraction(0),)] * (ORDER + 1)
        for k, q in enumerate(Q):
            if poly_order(q) is None:
                continue
            shift = M - k  # phi^M Q_k / phi^k
            if shift >= 0:
                qk = (Fraction(0),) * shift + tuple(q)
            else:
                qk = tuple(q[-shift:])
            for i in range(k + 1):
                R[i] = poly_add(R[i], poly_scale(qk, stirling1(k, i)))
        common = min(o for o in (poly_order(r) for r in R) if o is not None)
        R = [tuple(r[common:]) if poly_order(r) is not None else (Fraction(0),) for r in R]
        return cls(tuple(R), description)

    def to_d_form(self) -> tuple:
        """Coefficients ``Q_k`` with ``L = sum_k Q_k(phi) (d/dphi)^k``."""
        Q = []
        for k in range(ORDER + 1):
            q = (Fraction(0),)
            for i in range(k, ORDER + 1):
                s = stirling2(i, k)
                if s:
                    q = poly_add(q, poly_scale((Fraction(0),) * k + tuple(self.R[i]), s))
            Q.append(q)
        return tuple(Q)

    @property
    def degree(self) -> int:
        return max(len(r) - 1 for r in self.R)

    def coeff(self, i: int, m: int) -> Fraction:
        """``r_{i,m}``, the phi^m coefficient of R_i."""
        r = self.R[i]
        return r[m] if m < len(r) else Fraction(0)

    def P(self, m: int) -> tuple:
        """The polynomial ``P_m(s) = sum_i r_{i,m} s^i`` (ascending in s)."""
        return _trim([self.coeff(i, m) for i in range(ORDER + 1)])

    def __str__(self):
        parts = []
        for i, r in enumerate(self.R):
            if any(c != 0 for c in r):
                parts.append(f"({poly_str(r, 'phi')})*theta^{i}")
        return " + ".join(parts)


def load_operator(path) -> PFOperator:
    return PFOperator.from_file(path)


def data_path(name: str) -> Path:
    return Path(__file__).parent / "data" / name


# ---------------------------------------------------------------------------
# indicial polynomials
# ---------------------------------------------------------------------------


def _monic(p):
    p = _trim(p)
    lead = p[-1]
    return tuple(c / lead for c in p)


def _indicial_theta_form(R: Sequence[Sequence]) -> tuple:
    orders = [poly_order(r) for r in R]
    m0 = min(o for o in orders if o is not None)
    if orders[ORDER] != m0:
        raise IrregularSingularityError(
            f"indicial polynomial has degree < {ORDER} (leading coefficient vanishes to order {orders[ORDER]} > {m0})"
        )
    return _monic([R[i][m0] if len(R[i]) > m0 else Fraction(0) for i in range(ORDER + 1)])


def _falling(k: int) -> tuple:
    """lambda (lambda - 1) ... (lambda - k + 1) as ascending coefficients."""
    p = (Fraction(1),)
    for j in range(k):
        p = poly_mul(p, (Fraction(-j), Fraction(1)))
    return p


def indicial_polynomial(op: PFOperator, point=0) -> tuple:
    """Monic indicial polynomial (ascending coefficients in lambda) at ``point``.

    ``point`` is a rational number or the string ``"infinity"``.  At a finite
    point p the local exponent variable refers to ``phi - p``; at infinity to
    ``1/phi``.
    """
    if isinstance(point, str) and point.lower() in ("inf", "infinity", "oo"):
        D = op.degree
        Rt = []
        for i, r in enumerate(op.R):
            row = [Fraction(0)] * (D + 1)
            for m, c in enumerate(r):
                row[D - m] = c * (-1) ** i
            Rt.append(_trim(row))
        return _indicial_theta_form(Rt)
    p = as_fraction(point) if not isinstance(point, Fraction) else point
    if p == 0:
        return _indicial_theta_form(op.R)
    Q = op.to_d_form()
    Qs = [poly_shift(q, p) for q in Q]
    s = poly_order(Qs[ORDER])
    if s is None:
        raise IrregularSingularityError("leading coefficient vanishes identically")
    poly = (Fraction(0),)
    for k in range(ORDER + 1):
        o = poly_order(Qs[k])
        if o is not None and o < s - (ORDER - k):
            raise IrregularSingularityError(f"Fuchs condition fails at {p} for the D^{k} coefficient")
        idx = s - ORDER + k
        if 0 <= idx < len(Qs[k]) and Qs[k][idx] != 0:
            poly = poly_add(poly, poly_scale(_falling(k), Qs[k][idx]))
    return _monic(poly)


def is_mum(op: PFOperator) -> bool:
    """True iff the indicial polynomial at 0 is lambda^4."""
    try:
        ind = indicial_polynomial(op, 0)
    except IrregularSingularityError:
        return False
    return ind == (0, 0, 0, 0, 1)


# ---------------------------------------------------------------------------
# Frobenius basis
# ---------------------------------------------------------------------------

JET = 4  # jets in epsilon truncated after epsilon^3


def _jet_mul(a, b):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(JET)]


def _jet_inv(a):
    b0 = 1 / a[0]
    b = [b0]
    for k in range(1, JET):
        b.append(-sum(a[j] * b[k - j] for j in range(1, k + 1)) * b0)
    return b


def _poly_at_jet(p, n: int):
    """Jet of ``p(n + e)``: coefficient of e^k is sum_i p_i binom(i,k) n^(i-k)."""
    return [sum((p[i] * comb(i, k) * n ** (i - k) for i in range(k, len(p))), Fraction(0)) for k in range(JET)]


@dataclass(frozen=True)
class FrobeniusBasis:
    """The series ``f_0..f_3`` at the MUM point and the implied periods.

    ``rational_period(k)`` returns ``D_k = sum_j binom(k, j) f_{k-j} l^j`` so
    that ``varpi_k = D_k / (2 pi i)^k``.
    """

    f: tuple
    order: int
    op: PFOperator

    def rational_period(self, k: int) -> LogSeries:
        T = self.order
        terms = []
        for j in range(k + 1):
            terms.append(self.f[k - j] * comb(k, j))
        return LogSeries(tuple(terms))

    @property
    def periods(self) -> tuple:
        return tuple(self.rational_period(k) for k in range(ORDER))

    def truncate(self, order: int) -> "FrobeniusBasis":
        return FrobeniusBasis(tuple(s.truncate(order) for s in self.f), order, self.op)

    def numeric_jets(self, phi, dps: int):
        """Values of ``theta^p varpi_k`` at a point ``phi`` (principal log).

        Returns a 4x4 list ``J[p][k]`` of mpc at ``dps`` digits.
        """
        with mp.workdps(dps):
            phi = mpmath.mpc(phi)
            lg = mpmath.log(phi)
            tpi = mpmath.mpc(0, 2 * mp.pi)
            out = [[None] * ORDER for _ in range(ORDER)]
            for k in range(ORDER):
                s = self.rational_period(k)
                s_num = LogSeries(tuple(t.map(lambda c: mpmath.mpf(c.numerator) / c.denominator) for t in s.terms))
                cur = s_num
                for p in range(ORDER):
                    out[p][k] = cur.evaluate(phi, lg) / tpi**k
                    cur = logseries_theta(cur)
            return out


@functools.lru_cache(maxsize=32)
def _frobenius_coeff_jets(op: PFOperator, order: int) -> tuple:
    D = op.degree
    P = [op.P(m) for m in range(D + 1)]
    jets = [[Fraction(1), Fraction(0), Fraction(0), Fraction(0)]]
    for N in range(1, order + 1):
        acc = [Fraction(0)] * JET
        for m in range(1, min(N, D) + 1):
            if all(c == 0 for c in P[m]):
                continue
            t = _jet_mul(_poly_at_jet(P[m], N - m), jets[N - m])
            acc = [x + y for x, y in zip(acc, t)]
        piv = _poly_at_jet(P[0], N)
        if piv[0] == 0:
            raise NormalizationError(f"recurrence pivot vanishes at n = {N}")
        c = _jet_mul(acc, _jet_inv(piv))
        jets.append([-x for x in c])
    return tuple(tuple(j) for j in jets)


def frobenius_basis(op: PFOperator, order: int = 50) -> FrobeniusBasis:
    """Canonical Frobenius basis ``f_0..f_3`` to truncation ``order``."""
    if order < ORDER:
        raise ValueError(f"truncation order must be >= {ORDER}")
    r40 = op.coeff(ORDER, 0)
    if r40 == 0:
        try:
            ind = indicial_polynomial(op, 0)
        except IrregularSingularityError as exc:
            raise NotMUMError(f"0 is an irregular singular point: {exc}") from exc
        m = min(o for o in (poly_order(r) for r in op.R) if o is not None)
        hint = f"; divide every R_i by phi^{m}" if m > 0 else ""
        raise NormalizationError(f"R_4(0) = 0 (indicial polynomial {poly_str(ind, 'lambda')}){hint}")
    if not is_mum(op):
        raise NotMUMError(f"indicial polynomial at 0 is {poly_str(indicial_polynomial(op, 0), 'lambda')}, not lambda^4")
    jets = _frobenius_coeff_jets(op, order)
    f = []
    for j in range(ORDER):
        fj = factorial(j)
        f.append(TruncSeries(tuple(c[j] * fj for c in jets), "phi"))
    log.debug("Frobenius basis to order %d computed", order)
    return FrobeniusBasis(tuple(f), order, op)


def apply(op: PFOperator, s: LogSeries) -> LogSeries:
    """Exact application of ``sum_i R_i theta^i`` to a LogSeries."""
    out = None
    cur = s
    for i in range(ORDER + 1):
        term = cur.mul_poly(op.R[i])
        out = term if out is None else out + term
        if i < ORDER:
            cur = logseries_theta(cur)
    return out
