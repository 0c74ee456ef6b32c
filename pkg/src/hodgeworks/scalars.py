"""Exact scalar arithmetic over the rationals and the Gaussian rationals.

Rational numbers are gmpy2.mpq when available (much faster) and
fractions.Fraction otherwise; both are exact, reduced, with positive
denominators.  The complex coefficient field is modelled by Q(i),
which is closed under conjugation, so every dimension count and
equality test in the library is exact and decidable.
"""

from __future__ import annotations

import re

try:
    from gmpy2 import mpq as _mpq

    def rational(num=0, den=1):
        return _mpq(num, den)

    _RATIONAL_TYPES = (type(_mpq(0)), int)
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _Fraction

    def rational(num=0, den=1):
        return _Fraction(num, den)

    _RATIONAL_TYPES = (_Fraction, int)


RAT_ZERO = rational(0)
RAT_ONE = rational(1)
_RAT_T = type(rational(0))


class Gaussian:
    """An element a + b*i of Q(i), with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is _RAT_T else rational(re))
        object.__setattr__(self, "im", im if type(im) is _RAT_T else rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian values are immutable")

    # -- arithmetic -------------------------------------------------
    def __add__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return Gaussian(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = _as_gaussian(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    # -- comparisons ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gaussian({self.re!r}, {self.im!r})"


def _as_gaussian(x):
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, _RATIONAL_TYPES):
        return Gaussian(x)
    return NotImplemented


I = Gaussian(0, 1)

_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_GAUSS_RE = re.compile(
    r"^(-?\d+)(?:/(\d+))?(?:([+-]\d+)(?:/(\d+))?\*i)?$"
)
_PURE_IM_RE = re.compile(r"^(-?\d+)(?:/(\d+))?\*i$")


class FieldQ:
    """The field of rational numbers."""

    name = "rational"

    zero = RAT_ZERO
    one = RAT_ONE

    @staticmethod
    def coerce(x):
        if isinstance(x, int):
            return rational(x)
        if isinstance(x, Gaussian):
            if x.im != 0:
                raise ValueError("cannot coerce a non-real Gaussian rational to Q")
            return x.re
        if isinstance(x, _RATIONAL_TYPES):
            return x
        raise ValueError(f"cannot coerce {x!r} to Q")

    @staticmethod
    def conj(x):
        return x

    @staticmethod
    def parse(s: str):
        m = _RAT_RE.match(s.strip())
        if not m:
            raise ValueError(f"not a rational scalar: {s!r}")
        return rational(int(m.group(1)), int(m.group(2) or 1))

    @staticmethod
    def fmt(x) -> str:
        return f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return "QQ"


class FieldQi:
    """The field Q(i) of Gaussian rationals, a conjugation-closed model of C."""

    name = "gaussian"

    zero = Gaussian(0)
    one = Gaussian(1)

    @staticmethod
    def coerce(x):
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, _RATIONAL_TYPES):
            return Gaussian(x)
        raise ValueError(f"cannot coerce {x!r} to Q(i)")

    @staticmethod
    def conj(x):
        return x.conjugate()

    @staticmethod
    def parse(s: str):
        s = s.strip().replace(" ", "")
        m = _PURE_IM_RE.match(s)
        if m:
            return Gaussian(0, rational(int(m.group(1)), int(m.group(2) or 1)))
        m = _GAUSS_RE.match(s)
        if not m:
            raise ValueError(f"not a Gaussian rational scalar: {s!r}")
        re_part = rational(int(m.group(1)), int(m.group(2) or 1))
        im_part = rational(int(m.group(3) or 0), int(m.group(4) or 1))
        return Gaussian(re_part, im_part)

    @staticmethod
    def fmt(x) -> str:
        re_p, im_p = x.re, x.im
        sign = "-" if im_p < 0 else "+"
        return (
            f"{re_p.numerator}/{re_p.denominator}"
            f"{sign}{abs(im_p.numerator)}/{im_p.denominator}*i"
        )

    def __repr__(self):
        return "QQI"


QQ = FieldQ()
QQI = FieldQi()

FIELDS = {QQ.name: QQ, QQI.name: QQI}


def field_by_name(name: str):
    try:
        return FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown field {name!r}") from None
