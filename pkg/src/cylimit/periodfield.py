"""The rational function field Q(P, Z) used for exact filtrations.

``P`` stands for 2*pi*i and ``Z`` for zeta(3); both are treated as
algebraically independent.  An element is stored as a Laurent polynomial
numerator (a dict from exponent pairs to gmpy2 rationals) over an optional
non-monomial polynomial denominator.  Monomial denominators are folded into
the numerator, which covers every value met in the limit mixed Hodge structure
pipeline, so the common path never computes polynomial gcds.  Equality is
decided by cross multiplication and therefore does not need reduced forms.
"""
from __future__ import annotations

from fractions import Fraction

import gmpy2
import mpmath
from mpmath import mp

_Q = gmpy2.mpq
_NUMBER = (int, Fraction, type(_Q(0)))
# evaluation point used for hashing: equal elements take equal values there
_HASH_POINT = (_Q(3, 7), _Q(5, 11))


def _padd(a: dict, b: dict, neg: bool = False) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) - v if neg else out.get(k, 0) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    if len(a) == 1 and len(b) == 1:
        ((ka, ca),), ((kb, cb),) = a.items(), b.items()
        return {(ka[0] + kb[0], ka[1] + kb[1]): ca * cb}
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            w = out.get(k, 0) + c1 * c2
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def _pscale(a: dict, c, shift=(0, 0)) -> dict:
    di, dj = shift
    return {(i + di, j + dj): v * c for (i, j), v in a.items()}


def _coerce_coeff(x):
    if isinstance(x, _NUMBER):
        return _Q(x)
    raise TypeError(f"cannot use {x!r} as a rational coefficient")


class PeriodElement:
    """An element of Q(P, Z)."""

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict | None = None):
        self.num = num
        self.den = den

    # -- construction --------------------------------------------------------------

    @classmethod
    def make(cls, num: dict, den: dict | None) -> "PeriodElement":
        num = {k: _Q(v) for k, v in num.items() if v}
        if den is None or not num:
            return cls(num, None)
        if len(den) == 1:
            ((i, j), c), = den.items()
            return cls(_pscale(num, 1 / c, (-i, -j)), None)
        # normalise the denominator: no monomial content, leading coefficient 1
        mi = min(i for i, _ in den)
        mj = min(j for _, j in den)
        lead = den[max(den)]
        den = _pscale(den, 1 / lead, (-mi, -mj))
        num = _pscale(num, 1 / lead, (-mi, -mj))
        q = _exact_quotient(num, den)
        if q is not None:
            return cls(q, None)
        return cls(num, den)

    @classmethod
    def const(cls, x) -> "PeriodElement":
        x = _coerce_coeff(x)
        return cls({(0, 0): x} if x else {}, None)

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "PeriodElement":
        return cls({(i, j): _coerce_coeff(c)}, None)

    # -- arithmetic ----------------------------------------------------------------

    @staticmethod
    def _wrap(x) -> "PeriodElement | None":
        if isinstance(x, PeriodElement):
            return x
        if isinstance(x, _NUMBER):
            return PeriodElement.const(x)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den is None and o.den is None:
            return PeriodElement(_padd(self.num, o.num), None)
        if self.den == o.den:
            return PeriodElement.make(_padd(self.num, o.num), self.den)
        return PeriodElement.make(
            _padd(_pmul(self.num, o.den or {(0, 0): 1}), _pmul(o.num, self.den or {(0, 0): 1})),
            _pmul(self.den or {(0, 0): 1}, o.den or {(0, 0): 1}),
        )

    __radd__ = __add__

    def __neg__(self):
        return PeriodElement({k: -v for k, v in self.num.items()}, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _NUMBER):
            if not other:
                return PeriodElement({}, None)
            other = _Q(other)
            return PeriodElement({k: v * other for k, v in self.num.items()}, self.den)
        if not isinstance(other, PeriodElement):
            return NotImplemented
        num = _pmul(self.num, other.num)
        if self.den is None and other.den is None:
            return PeriodElement(num, None)
        den = _pmul(self.den or {(0, 0): 1}, other.den or {(0, 0): 1})
        return PeriodElement.make(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "PeriodElement":
        if not self.num:
            raise ZeroDivisionError("division by zero in Q(P, Z)")
        return PeriodElement.make(dict(self.den) if self.den else {(0, 0): _Q(1)}, self.num)

    def __truediv__(self, other):
        if isinstance(other, _NUMBER):
            if not other:
                raise ZeroDivisionError("division by zero in Q(P, Z)")
            inv = 1 / _Q(other)
            return PeriodElement({k: v * inv for k, v in self.num.items()}, self.den)
        if not isinstance(other, PeriodElement):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if self.den is None and len(self.num) == 1:
            ((i, j), c), = self.num.items()
            return PeriodElement({(i * n, j * n): c**n}, None)
        out = PeriodElement.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, _NUMBER) and self.den is None:
            if not other:
                return not self.num
            return len(self.num) == 1 and self.num.get((0, 0)) == other
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den is None and o.den is None:
            return self.num == o.num
        return _pmul(self.num, o.den or {(0, 0): 1}) == _pmul(o.num, self.den or {(0, 0): 1})

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __bool__(self):
        return bool(self.num)

    def __hash__(self):
        if self.den is None and set(self.num) <= {(0, 0)}:
            return hash(self.num.get((0, 0), _Q(0)))
        v = _eval_dict(self.den, *_HASH_POINT) if self.den else _Q(1)
        if v == 0:
            return 0
        return hash(_eval_dict(self.num, *_HASH_POINT) / v)

    # -- structure -----------------------------------------------------------------

    def is_polynomial(self) -> bool:
        """True when the element is a Laurent polynomial (no denominator)."""
        return self.den is None

    def is_rational(self) -> bool:
        return self.den is None and set(self.num) <= {(0, 0)}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeff(0, 0)

    def coeff(self, i: int, j: int) -> Fraction:
        """Coefficient of P^i Z^j in the numerator."""
        c = self.num.get((i, j), 0)
        return Fraction(int(c.numerator), int(c.denominator)) if c else Fraction(0)

    def terms(self) -> list:
        """Sorted ``((i, j), c)`` pairs of the numerator, with Fraction coefficients."""
        return [(k, Fraction(int(c.numerator), int(c.denominator))) for k, c in sorted(self.num.items())]

    def conjugate(self) -> "PeriodElement":
        """Complex conjugation: P -> -P, Z fixed."""
        flip = lambda d: {k: (-v if k[0] % 2 else v) for k, v in d.items()}
        return PeriodElement(flip(self.num), flip(self.den) if self.den else None)

    def evaluate(self, dps: int) -> mpmath.mpc:
        """Numeric value with P = 2*pi*i and Z = zeta(3)."""
        with mp.workdps(dps + 10):
            pv = mpmath.mpc(0, 2 * mp.pi)
            zv = mpmath.zeta(3)

            def ev(d):
                s = mpmath.mpc(0)
                for (i, j), c in d.items():
                    s += mpmath.mpf(c.numerator) / c.denominator * pv**i * zv**j
                return s

            return ev(self.num) / ev(self.den) if self.den else ev(self.num)

    # -- printing ------------------------------------------------------------------

    def __str__(self):
        s = _poly_str(self.num)
        if self.den is None:
            return s
        return f"({s})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"PeriodElement({self})"


def _eval_dict(d: dict, p, z):
    return sum((c * p**i * z**j for (i, j), c in d.items()), _Q(0))


def _exact_quotient(num: dict, den: dict) -> dict | None:
    """``num / den`` when it is a Laurent polynomial, found by leading-term division."""
    if len(num) > 4 * len(den) + 8:
        return None
    rem = dict(num)
    q: dict = {}
    dk = max(den)
    dc = den[dk]
    for _ in range(4 * len(num) + 8):
        if not rem:
            return q
        rk = max(rem)
        c = rem[rk] / dc
        shift = (rk[0] - dk[0], rk[1] - dk[1])
        q[shift] = q.get(shift, 0) + c
        rem = _padd(rem, _pscale(den, c, shift), neg=True)
        if rem and max(rem) >= rk:
            return None
    return None


def _mono_str(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("P" if i == 1 else f"P**{i}" if i > 0 else f"P**({i})")
    if j:
        parts.append("Z" if j == 1 else f"Z**{j}" if j > 0 else f"Z**({j})")
    return "*".join(parts)


def _poly_str(d: dict) -> str:
    if not d:
        return "0"
    out = []
    for (i, j), c in sorted(d.items(), reverse=True):
        m = _mono_str(i, j)
        cs = str(c) if c.denominator == 1 else f"({c})"
        out.append(cs if not m else (m if c == 1 else f"-{m}" if c == -1 else f"{cs}*{m}"))
    return " + ".join(out).replace("+ -", "- ")


def PERIOD_FIELD(x=0) -> PeriodElement:
    """Coerce an int, Fraction or field element into Q(P, Z)."""
    if isinstance(x, PeriodElement):
        return x
    return PeriodElement.const(x)


P2I = PeriodElement.monomial(1, 0)
ZETA3 = PeriodElement.monomial(0, 1)
