"""Truncated power series and polynomials in log(phi) with series coefficients.

Coefficients are usually ``Fraction`` (everything in the exact pipeline) but
any field type with ``+ - * /`` works, which the numeric code uses with mpc.
All arithmetic is the naive O(T^2) convolution.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

log = logging.getLogger(__name__)


class SeriesError(ValueError):
    pass


def _zero_like(c):
    return c * 0


@dataclass(frozen=True)
class TruncSeries:
    """``c_0 + c_1 x + ... + c_T x^T + O(x^(T+1))`` in the variable ``tag``."""

    coeffs: tuple
    tag: str = "phi"

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise SeriesError("a truncated series needs at least one coefficient")
        coeffs = tuple(Fraction(c) if type(c) is int else c for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_list(cls, coeffs: Sequence, order: int, tag: str = "phi", zero=Fraction(0)) -> "TruncSeries":
        """Pad or cut ``coeffs`` to ``order + 1`` entries."""
        c = list(coeffs[: order + 1])
        c += [zero] * (order + 1 - len(c))
        return cls(tuple(c), tag)

    @classmethod
    def constant(cls, c, order: int, tag: str = "phi") -> "TruncSeries":
        return cls.from_list([c], order, tag, zero=_zero_like(c))

    @classmethod
    def variable(cls, order: int, tag: str = "phi", one=Fraction(1)) -> "TruncSeries":
        return cls.from_list([_zero_like(one), one], order, tag, zero=_zero_like(one))

    @classmethod
    def geometric(cls, order: int, tag: str = "phi") -> "TruncSeries":
        return cls(tuple(Fraction(1) for _ in range(order + 1)), tag)

    # -- basic properties -------------------------------------------------
    @property
    def order(self) -> int:
        """The truncation order T (coefficients c_0..c_T are valid)."""
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series of order {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1], self.tag)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def _check(self, other: "TruncSeries"):
        if self.tag != other.tag:
            raise SeriesError(f"variable mismatch: {self.tag} vs {other.tag}")

    def map(self, fn: Callable) -> "TruncSeries":
        return TruncSeries(tuple(fn(c) for c in self.coeffs), self.tag)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.tag)
        self._check(other)
        T = min(self.order, other.order)
        return TruncSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(T + 1)), self.tag)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(tuple(-c for c in self.coeffs), self.tag)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        return TruncSeries(tuple(c * other for c in self.coeffs), self.tag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, series_inverse(other))
        return TruncSeries(tuple(c / other for c in self.coeffs), self.tag)

    def __pow__(self, n: int):
        if n < 0:
            return series_inverse(self) ** (-n)
        result = TruncSeries.constant(self.coeffs[0] ** 0, self.order, self.tag)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.tag == other.tag and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.tag))

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``x**k`` (k >= 0), keeping the truncation order."""
        z = _zero_like(self.coeffs[0])
        return TruncSeries(((z,) * k + self.coeffs)[: self.order + 1], self.tag)

    def mul_poly(self, poly: Sequence) -> "TruncSeries":
        """Multiply by a polynomial given as a coefficient list (sparse-friendly)."""
        T = self.order
        z = _zero_like(self.coeffs[0])
        out = [z] * (T + 1)
        for j, p in enumerate(poly):
            if p == 0 or j > T:
                continue
            for n in range(T + 1 - j):
                out[n + j] += p * self.coeffs[n]
        return TruncSeries(tuple(out), self.tag)

    def evaluate(self, x):
        """Horner evaluation of the truncated polynomial at ``x``."""
        acc = _zero_like(self.coeffs[0])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"TruncSeries([{head}{more}], order={self.order}, tag={self.tag!r})"


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at ``min(T_a, T_b)``."""
    a._check(b)
    T = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    # skip leading zeros of either factor; this is exact and saves work on shifted series
    va = next((i for i in range(T + 1) if ac[i] != 0), T + 1)
    vb = next((i for i in range(T + 1) if bc[i] != 0), T + 1)
    z = _zero_like(ac[0])
    out = [z] * (T + 1)
    for n in range(va + vb, T + 1):
        s = z
        for i in range(va, n - vb + 1):
            s += ac[i] * bc[n - i]
        out[n] = s
    return TruncSeries(tuple(out), a.tag)


def series_inverse(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; requires a nonzero constant term."""
    c0 = a.coeffs[0]
    if c0 == 0:
        raise SeriesError("series with zero constant term has no inverse")
    T = a.order
    inv0 = 1 / c0 if not isinstance(c0, int) else Fraction(1, c0)
    b = [inv0]
    for n in range(1, T + 1):
        s = _zero_like(c0)
        for i in range(1, n + 1):
            if a.coeffs[i] != 0:
                s += a.coeffs[i] * b[n - i]
        b.append(-s * inv0)
    return TruncSeries(tuple(b), a.tag)


def series_compose(outer: TruncSeries, inner: TruncSeries) -> TruncSeries:
    """``outer(inner(x))`` by Horner's rule; ``inner`` must have zero constant term.

    The result carries ``inner``'s variable tag and the smaller truncation order.
    """
    if inner.coeffs[0] != 0:
        raise SeriesError("inner series must have zero constant term")
    T = min(outer.order, inner.order)
    inner = inner.truncate(T)
    z = _zero_like(inner.coeffs[1] if T >= 1 else inner.coeffs[0])
    acc = TruncSeries.from_list([outer.coeffs[T]], T, inner.tag, zero=z)
    for k in range(T - 1, -1, -1):
        acc = series_mul(acc, inner) + outer.coeffs[k]
    return acc


def series_compose_naive(outer: TruncSeries, inner: TruncSeries) -> TruncSeries:
    """Reference composition by summing ``c_k * inner**k``; used as a test oracle."""
    if inner.coeffs[0] != 0:
        raise SeriesError("inner series must have zero constant term")
    T = min(outer.order, inner.order)
    inner = inner.truncate(T)
    z = _zero_like(inner.coeffs[0])
    total = TruncSeries.from_list([], T, inner.tag, zero=z)
    power = TruncSeries.from_list([z + 1], T, inner.tag, zero=z)
    for k in range(T + 1):
        total = total + power * outer.coeffs[k]
        power = series_mul(power, inner)
    return total


def series_revert(a: TruncSeries, tag: str | None = None) -> TruncSeries:
    """Compositional inverse by Lagrange inversion.

    For ``a = c_1 x + c_2 x^2 + ...`` with ``c_1 != 0`` returns ``b`` with
    ``a(b(y)) = y`` to the truncation order.  ``b_n = [x^(n-1)] (x/a)^n / n``.
    """
    if a.coeffs[0] != 0:
        raise SeriesError("series to revert must have zero constant term")
    if a.order < 1 or a.coeffs[1] == 0:
        raise SeriesError("series to revert must have nonzero linear term")
    T = a.order
    tag = tag or a.tag
    z = _zero_like(a.coeffs[1])
    # h = x / a(x) as a series of order T - 1
    a_over_x = TruncSeries(a.coeffs[1:], a.tag)
    h = series_inverse(a_over_x)
    out = [z]
    power = h
    for n in range(1, T + 1):
        # power = h^n, truncated to order T - 1
        out.append(power.coeffs[n - 1] / n)
        if n < T:
            power = series_mul(power, h)
    return TruncSeries(tuple(out), tag)


def theta(a: TruncSeries) -> TruncSeries:
    """The Euler operator ``x d/dx``: ``c_n -> n c_n``."""
    return TruncSeries(tuple(n * c for n, c in enumerate(a.coeffs)), a.tag)


def derivative(a: TruncSeries) -> TruncSeries:
    """``d/dx``; the truncation order drops by one."""
    if a.order == 0:
        raise SeriesError("derivative of an order-0 series is not defined")
    return TruncSeries(tuple(n * a.coeffs[n] for n in range(1, a.order + 1)), a.tag)


def series_exp(a: TruncSeries) -> TruncSeries:
    """Formal exponential of a series with zero constant term (via theta(E) = theta(a) E)."""
    if a.coeffs[0] != 0:
        raise SeriesError("exp requires zero constant term")
    T = a.order
    ta = theta(a).coeffs
    one = _zero_like(a.coeffs[0]) + 1
    e = [one]
    for n in range(1, T + 1):
        s = _zero_like(one)
        for k in range(1, n + 1):
            if ta[k] != 0:
                s += ta[k] * e[n - k]
        e.append(s / n)
    return TruncSeries(tuple(e), a.tag)


def series_log(a: TruncSeries) -> TruncSeries:
    """Formal logarithm of a series with constant term 1."""
    if a.coeffs[0] != 1:
        raise SeriesError("log requires constant term 1")
    t = series_mul(theta(a), series_inverse(a))
    z = _zero_like(a.coeffs[0])
    return TruncSeries((z,) + tuple(t.coeffs[n] / n for n in range(1, a.order + 1)), a.tag)


# ---------------------------------------------------------------------------
# LogSeries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogSeries:
    """``sum_j g_j(phi) * l**j`` with ``l = log(phi)``.

    ``terms[j]`` is the TruncSeries ``g_j``.  Trailing zero coefficients are
    stripped, so ``log_degree`` is exact; the zero value keeps the single
    term ``g_0 = 0`` and has degree 0.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise SeriesError("LogSeries needs at least one coefficient series")
        tags = {t.tag for t in terms}
        if len(tags) != 1:
            raise SeriesError(f"mixed variable tags {tags}")
        T = min(t.order for t in terms)
        terms = tuple(t.truncate(T) for t in terms)
        while len(terms) > 1 and terms[-1].is_zero():
            terms = terms[:-1]
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_series(cls, g: TruncSeries) -> "LogSeries":
        return cls((g,))

    @classmethod
    def log_power(cls, j: int, order: int, tag: str = "phi") -> "LogSeries":
        """The value ``l**j``."""
        zero = TruncSeries.from_list([], order, tag)
        one = TruncSeries.constant(Fraction(1), order, tag)
        return cls(tuple([zero] * j + [one]))

    @property
    def log_degree(self) -> int:
        return len(self.terms) - 1

    @property
    def order(self) -> int:
        return self.terms[0].order

    @property
    def tag(self) -> str:
        return self.terms[0].tag

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        if isinstance(other, TruncSeries):
            other = LogSeries.from_series(other)
        n = max(len(self.terms), len(other.terms))
        out = []
        for j in range(n):
            if j < len(self.terms) and j < len(other.terms):
                out.append(self.terms[j] + other.terms[j])
            elif j < len(self.terms):
                out.append(self.terms[j])
            else:
                out.append(other.terms[j])
        return LogSeries(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return LogSeries(tuple(-t for t in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LogSeries):
            n = len(self.terms) + len(other.terms) - 1
            T = min(self.order, other.order)
            zero = self.terms[0].truncate(T) * 0
            out = [zero] * n
            for i, a in enumerate(self.terms):
                for j, b in enumerate(other.terms):
                    out[i + j] = out[i + j] + series_mul(a, b)
            return LogSeries(tuple(out))
        if isinstance(other, TruncSeries):
            return LogSeries(tuple(series_mul(t, other) for t in self.terms))
        return LogSeries(tuple(t * other for t in self.terms))

    __rmul__ = __mul__

    def mul_poly(self, poly: Sequence) -> "LogSeries":
        return LogSeries(tuple(t.mul_poly(poly) for t in self.terms))

    def substitute_log_shift(self, shift) -> "LogSeries":
        """Replace ``l`` by ``l + shift`` (shift a scalar); used for monodromy."""
        k = len(self.terms)
        out = [t * 0 for t in self.terms]
        from math import comb

        for j, g in enumerate(self.terms):
            for i in range(j + 1):
                out[i] = out[i] + g * (comb(j, i) * shift ** (j - i))
        return LogSeries(tuple(out[:k]))

    def evaluate(self, x, log_x):
        acc = self.terms[-1].evaluate(x)
        for t in reversed(self.terms[:-1]):
            acc = acc * log_x + t.evaluate(x)
        return acc

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)


def logseries_theta(a: LogSeries) -> LogSeries:
    """theta(g l^j) = theta(g) l^j + j g l^(j-1)."""
    out = [theta(t) for t in a.terms]
    for j in range(1, len(a.terms)):
        out[j - 1] = out[j - 1] + a.terms[j] * j
    return LogSeries(tuple(out))
