"""Scalars used throughout the package.

Three families of scalars appear:

* exact rationals (``fractions.Fraction``, aliased as :data:`Rational`),
* high-precision floats carrying their own decimal precision
  (:class:`BigFloat`, :class:`BigComplex`),
* :class:`PeriodScalar`, the small exact ring element
  ``(2*pi*i)**k * (rational + kappa * zeta(3)/(2*pi*i)**3)``.

For exact linear algebra with transcendental entries the module also exposes
``PERIOD_FIELD``, the rational function field Q(P, Z) in which ``P`` stands for
2*pi*i and ``Z`` for zeta(3).  Both are treated as algebraically independent,
which is the working hypothesis for every identity tested here.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

from .periodfield import P2I, PERIOD_FIELD, ZETA3, PeriodElement  # noqa: F401  (re-exported)

log = logging.getLogger(__name__)

Rational = Fraction

#: extra decimal digits used internally whenever a value is computed
GUARD_DIGITS = 10
MIN_PRECISION = 10


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fraction_str(x: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of a finite mpf to a Fraction."""
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("non-finite value")
    sign, man, exp, _ = x._mpf_  # man_exp drops the sign
    man = -int(man) if sign else int(man)
    exp = int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


# ---------------------------------------------------------------------------
# precision-tracking floats
# ---------------------------------------------------------------------------


def _check_precision(p: int) -> int:
    if not isinstance(p, int) or p < MIN_PRECISION:
        raise ValueError(f"precision must be an integer >= {MIN_PRECISION}, got {p!r}")
    return p


@dataclass(frozen=True)
class BigFloat:
    """A real number known to ``precision`` decimal digits.

    Binary operations are evaluated with guard digits and the result carries
    the smaller of the two operand precisions.
    """

    value: mpmath.mpf
    precision: int

    def __post_init__(self):
        _check_precision(self.precision)

    @classmethod
    def from_value(cls, x, precision: int) -> "BigFloat":
        with mp.workdps(precision + GUARD_DIGITS):
            if isinstance(x, Fraction):
                v = mpmath.mpf(x.numerator) / x.denominator
            else:
                v = mpmath.mpf(x)
        return cls(v, precision)

    def _coerce(self, other):
        if isinstance(other, (BigFloat, BigComplex)):
            return other
        return BigFloat.from_value(other, self.precision)

    def _binop(self, other, fn):
        other = self._coerce(other)
        p = min(self.precision, other.precision)
        with mp.workdps(p + GUARD_DIGITS):
            v = fn(self.value, other.value)
        return _wrap(v, p)

    def __add__(self, o):
        return self._binop(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, o):
        return self._binop(o, lambda a, b: a - b)

    def __rsub__(self, o):
        return self._binop(o, lambda a, b: b - a)

    def __mul__(self, o):
        return self._binop(o, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._binop(o, lambda a, b: a / b)

    def __rtruediv__(self, o):
        return self._binop(o, lambda a, b: b / a)

    def __neg__(self):
        return BigFloat(-self.value, self.precision)

    def __abs__(self):
        return BigFloat(abs(self.value), self.precision)

    def __lt__(self, o):
        return self.value < self._coerce(o).value

    def __gt__(self, o):
        return self.value > self._coerce(o).value

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return mpmath.nstr(self.value, self.precision, strip_zeros=False)

    def __repr__(self):
        return f"BigFloat({self}, precision={self.precision})"

    def round_to(self, precision: int) -> "BigFloat":
        """Same value, tagged (and printed) with a lower precision."""
        return BigFloat(self.value, min(precision, self.precision))


@dataclass(frozen=True)
class BigComplex:
    """A complex number known to ``precision`` decimal digits."""

    value: mpmath.mpc
    precision: int

    def __post_init__(self):
        _check_precision(self.precision)

    @classmethod
    def from_value(cls, x, precision: int) -> "BigComplex":
        with mp.workdps(precision + GUARD_DIGITS):
            if isinstance(x, Fraction):
                v = mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
            elif isinstance(x, (BigFloat, BigComplex)):
                v = mpmath.mpc(x.value)
            else:
                v = mpmath.mpc(x)
        return cls(v, precision)

    @property
    def real(self) -> BigFloat:
        return BigFloat(self.value.real, self.precision)

    @property
    def imag(self) -> BigFloat:
        return BigFloat(self.value.imag, self.precision)

    def _coerce(self, other):
        if isinstance(other, (BigFloat, BigComplex)):
            return other
        return BigComplex.from_value(other, self.precision)

    def _binop(self, other, fn):
        other = self._coerce(other)
        p = min(self.precision, other.precision)
        with mp.workdps(p + GUARD_DIGITS):
            v = fn(mpmath.mpc(self.value), mpmath.mpc(other.value))
        return BigComplex(v, p)

    def __add__(self, o):
        return self._binop(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, o):
        return self._binop(o, lambda a, b: a - b)

    def __rsub__(self, o):
        return self._binop(o, lambda a, b: b - a)

    def __mul__(self, o):
        return self._binop(o, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._binop(o, lambda a, b: a / b)

    def __rtruediv__(self, o):
        return self._binop(o, lambda a, b: b / a)

    def __neg__(self):
        return BigComplex(-self.value, self.precision)

    def __abs__(self):
        return BigFloat(abs(self.value), self.precision)

    def conjugate(self) -> "BigComplex":
        return BigComplex(mpmath.conj(self.value), self.precision)

    def __str__(self):
        return complex_str(self.value, self.precision)

    def __repr__(self):
        return f"BigComplex({self}, precision={self.precision})"


def _wrap(v, precision):
    if isinstance(v, mpmath.mpc):
        return BigComplex(v, precision)
    return BigFloat(v, precision)


def real_str(x, digits: int) -> str:
    """Deterministic scientific-notation string of a real mp number."""
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False, min_fixed=1, max_fixed=0)


def complex_str(z, digits: int) -> str:
    z = mpmath.mpc(z)
    return f"{real_str(z.real, digits)}{'-' if z.imag < 0 else '+'}{real_str(abs(z.imag), digits)}j"


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def const_pi(precision: int) -> BigFloat:
    """pi to ``precision`` significant digits."""
    _check_precision(precision)
    with mp.workdps(precision + GUARD_DIGITS):
        v = +mp.pi
    return BigFloat(v, precision)


def const_zeta3(precision: int) -> BigFloat:
    """Apery's constant zeta(3) to ``precision`` significant digits."""
    _check_precision(precision)
    with mp.workdps(precision + GUARD_DIGITS):
        v = mpmath.zeta(3)
    return BigFloat(v, precision)


def two_pi_i(dps: int) -> mpmath.mpc:
    """2*pi*i as an mpc evaluated at ``dps`` digits (plain mpmath value)."""
    with mp.workdps(dps):
        return mpmath.mpc(0, 2 * mp.pi)


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------


def _simplest_in_open_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational of least denominator (then least |numerator|) in (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -_simplest_in_open_interval(-hi, -lo)
    # 0 <= lo < hi; continued-fraction descent, iterative form.
    # Maintain x = (a*y + b)/(c*y + d) where y ranges over the current interval.
    a, b, c, d = 1, 0, 0, 1
    lo_, hi_ = lo, hi  # hi_ may become None for +infinity
    while True:
        n = math.floor(lo_)
        if hi_ is None or n + 1 < hi_:
            y = n + 1
            return Fraction(a * y + b, c * y + d)
        # interval lies inside [n, n+1]; y = n + 1/y'
        a, b, c, d = a * n + b, a, c * n + d, c
        new_lo = 1 / (hi_ - n)
        new_hi = None if lo_ == n else 1 / (lo_ - n)
        lo_, hi_ = new_lo, new_hi


def rational_reconstruct(x, max_height: int, precision: int | None = None) -> Fraction | None:
    """Recover a small rational from a high-precision approximation.

    Returns ``p/q`` with ``|p|, q <= max_height`` and
    ``|x - p/q| < 10**(-precision/2)``, or ``None`` when no such fraction
    exists.  Among admissible fractions the one with the smallest denominator
    is returned.  ``precision`` defaults to the precision carried by ``x``.
    """
    if max_height < 1:
        raise ValueError("max_height must be >= 1")
    if isinstance(x, Fraction):
        exact = x
        precision = precision or 2 * 10**6
    elif isinstance(x, BigFloat):
        exact = mpf_to_fraction(x.value)
        precision = precision or x.precision
    else:
        if precision is None:
            raise ValueError("precision required for untagged values")
        exact = mpf_to_fraction(x)
    tol = Fraction(1, 10 ** ((precision + 1) // 2))
    cand = _simplest_in_open_interval(exact - tol, exact + tol)
    if abs(cand.numerator) <= max_height and cand.denominator <= max_height:
        return cand
    return None


# ---------------------------------------------------------------------------
# PeriodScalar and the formal period field
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodScalar:
    """``(2*pi*i)**tate_power * (rational_part + zeta3_coeff * zeta(3)/(2*pi*i)**3)``.

    Only Q-linear combinations and multiplication by pure ``(2*pi*i)**m *
    rational`` factors are supported; multiplying two zeta(3)-carrying
    scalars raises ``TypeError``.
    """

    rational_part: Fraction = Fraction(0)
    zeta3_coeff: Fraction = Fraction(0)
    tate_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rational_part", as_fraction(self.rational_part))
        object.__setattr__(self, "zeta3_coeff", as_fraction(self.zeta3_coeff))

    @classmethod
    def from_chi_r(cls, chi: int, r) -> "PeriodScalar":
        """The value ``-3*chi*zeta(3)/(2*pi*i)**3 + r``."""
        return cls(as_fraction(r), Fraction(-3 * chi), 0)

    @property
    def is_pure(self) -> bool:
        """True when no zeta(3) term is present."""
        return self.zeta3_coeff == 0

    def is_zero(self) -> bool:
        return self.rational_part == 0 and self.zeta3_coeff == 0

    def __add__(self, other):
        other = _as_period_scalar(other, self.tate_power)
        if other.tate_power != self.tate_power:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError("cannot add PeriodScalars with different tate_power")
        return PeriodScalar(
            self.rational_part + other.rational_part, self.zeta3_coeff + other.zeta3_coeff, self.tate_power
        )

    __radd__ = __add__

    def __neg__(self):
        return PeriodScalar(-self.rational_part, -self.zeta3_coeff, self.tate_power)

    def __sub__(self, other):
        return self + (-_as_period_scalar(other, self.tate_power))

    def __rsub__(self, other):
        return _as_period_scalar(other, self.tate_power) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PeriodScalar(self.rational_part * other, self.zeta3_coeff * other, self.tate_power)
        if isinstance(other, PeriodScalar):
            if other.is_pure:
                a, b = self, other
            elif self.is_pure:
                a, b = other, self
            else:
                raise TypeError("product of two zeta(3)-carrying PeriodScalars is outside the supported ring")
            # b = (2 pi i)^m * rho
            rho = b.rational_part
            return PeriodScalar(a.rational_part * rho, a.zeta3_coeff * rho, a.tate_power + b.tate_power)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, PeriodScalar) and other.is_pure and other.rational_part != 0:
            return PeriodScalar(
                self.rational_part / other.rational_part,
                self.zeta3_coeff / other.rational_part,
                self.tate_power - other.tate_power,
            )
        return NotImplemented

    def mul_two_pi_i(self, m: int = 1) -> "PeriodScalar":
        """Multiply by ``(2*pi*i)**m``."""
        return PeriodScalar(self.rational_part, self.zeta3_coeff, self.tate_power + m)

    def to_field(self):
        """Image in the formal field Q(P, Z)."""
        k = self.tate_power
        return PeriodElement.make({(k, 0): self.rational_part, (k - 3, 1): self.zeta3_coeff}, {(0, 0): Fraction(1)})

    def evaluate(self, precision: int) -> BigComplex:
        with mp.workdps(precision + GUARD_DIGITS):
            tpi = mpmath.mpc(0, 2 * mp.pi)
            z3 = mpmath.zeta(3)
            v = tpi**self.tate_power * (
                mpmath.mpf(self.rational_part.numerator) / self.rational_part.denominator
                + mpmath.mpf(self.zeta3_coeff.numerator) / self.zeta3_coeff.denominator * z3 / tpi**3
            )
        return BigComplex(v, precision)

    def to_json(self) -> dict:
        return {
            "rational_part": fraction_str(self.rational_part),
            "zeta3_coeff": fraction_str(self.zeta3_coeff),
            "tate_power": self.tate_power,
        }

    def __str__(self):
        parts = []
        if self.rational_part:
            parts.append(fraction_str(self.rational_part))
        if self.zeta3_coeff:
            parts.append(f"({fraction_str(self.zeta3_coeff)})*zeta(3)/(2*pi*i)^3")
        body = " + ".join(parts) or "0"
        if self.tate_power:
            return f"(2*pi*i)^{self.tate_power}*({body})"
        return body


def _as_period_scalar(x, tate_power: int = 0) -> PeriodScalar:
    if isinstance(x, PeriodScalar):
        return x
    if isinstance(x, (int, Fraction)):
        if x == 0:
            return PeriodScalar(Fraction(0), Fraction(0), tate_power)
        return PeriodScalar(Fraction(x), Fraction(0), 0)
    raise TypeError(f"cannot interpret {x!r} as a PeriodScalar")


def to_field(x):
    """Map an int, Fraction, PeriodScalar or field element into Q(P, Z)."""
    if isinstance(x, PeriodElement):
        return x
    if isinstance(x, PeriodScalar):
        return x.to_field()
    if isinstance(x, (int, Fraction)):
        return PeriodElement.const(x)
    raise TypeError(f"cannot map {x!r} into the period field")


def field_conjugate(x):
    """Complex conjugation on Q(P, Z): P -> -P, Z fixed."""
    return to_field(x).conjugate()


def field_is_rational(x) -> bool:
    return to_field(x).is_rational()


def field_to_fraction(x) -> Fraction:
    return to_field(x).to_fraction()


def field_to_period_scalar(x) -> PeriodScalar:
    """Inverse of :meth:`PeriodScalar.to_field` on its image; raises otherwise."""
    x = to_field(x)
    if not x.is_polynomial():
        raise ValueError(f"{x} is not a PeriodScalar")
    terms = dict(x.terms())
    if not terms:
        return PeriodScalar()
    z_terms = {k: v for k, v in terms.items() if k[1] == 1}
    r_terms = {k: v for k, v in terms.items() if k[1] == 0}
    if len(terms) != len(z_terms) + len(r_terms) or len(z_terms) > 1 or len(r_terms) > 1:
        raise ValueError(f"{x} is not a PeriodScalar")
    if r_terms:
        (kp, _), rv = next(iter(r_terms.items()))
        if z_terms:
            (zp, _), zv = next(iter(z_terms.items()))
            if zp != kp - 3:
                raise ValueError(f"{x} is not a PeriodScalar")
            return PeriodScalar(rv, zv, kp)
        return PeriodScalar(rv, Fraction(0), kp)
    (zp, _), zv = next(iter(z_terms.items()))
    return PeriodScalar(Fraction(0), zv, zp + 3)


def field_evaluate(x, dps: int) -> mpmath.mpc:
    """Numeric value of an element of Q(P, Z) at ``dps`` digits."""
    return to_field(x).evaluate(dps)


Scalar = Union[Fraction, PeriodScalar, BigComplex, BigFloat]
