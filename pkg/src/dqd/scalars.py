"""Exact and floating scalar backends for flat-surface geometry.

The exact backend works in the real quadratic field Q(sqrt 2).  The builtin
surface families have all edge directions horizontal, vertical or at 45
degrees, so every coordinate they ever produce lies in this field and every
geometric predicate (sign, comparison) is decided exactly.  User surfaces may
instead carry plain float64 coordinates together with a tolerance; the same
geometry code runs over either backend through the small `Ops` facade.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QSqrt2",
    "SQRT2",
    "ExactOps",
    "FloatOps",
    "ops_for_backend",
    "format_scalar",
    "parse_scalar",
]


@lru_cache(maxsize=1)
def _sqrt2_rational() -> Fraction:
    # 50 decimal digits; enough that float(a + b*approx) is the correctly
    # rounded double for any coefficients this library produces.
    scale = 10 ** 50
    return Fraction(math.isqrt(2 * scale * scale), scale)


class QSqrt2:
    """An element a + b*sqrt(2) with rational a, b.

    Immutable; closed under +, -, *, and / (the field inverse of a nonzero
    element is (a - b*sqrt2)/(a^2 - 2 b^2)).  Sign evaluation never rounds:
    it compares a^2 with 2 b^2 when a and b have opposite signs.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", a if type(a) is Fraction else Fraction(a))
        object.__setattr__(self, "b", b if type(b) is Fraction else Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt2 is immutable")

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QSqrt2):
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrt2(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.a * o.a - 2 * o.b * o.b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return self * QSqrt2(o.a / n, -o.b / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- predicates ---------------------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # opposite strict signs: compare a^2 with 2 b^2
        big_a = a * a > 2 * b * b
        if a > 0:
            return 1 if big_a else -1
        return -1 if big_a else 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return float(self.a + self.b * _sqrt2_rational())

    def __repr__(self):
        return f"QSqrt2({self.a!r}, {self.b!r})"

    def __str__(self):
        return format_scalar(self)


SQRT2 = QSqrt2(0, 1)


# -- literal syntax ---------------------------------------------------------
#
# Exact values in the `dqd v1` file format are written `p/q+r/s r2` without
# spaces, e.g. `1/2+3/4r2`, `0+1r2`, `-1+0r2`, `3-1/2r2`.  Floats are plain
# decimal literals (anything Python's float() accepts, without `r2`).

_RAT = r"[+-]?\d+(?:/\d+)?"
_EXACT_RE = re.compile(rf"^(?P<a>{_RAT})(?P<sgn>[+-])(?P<b>\d+(?:/\d+)?)r2$")


def format_scalar(value) -> str:
    if isinstance(value, QSqrt2):
        a, b = value.a, value.b
        sgn = "-" if b < 0 else "+"
        return f"{a}{sgn}{abs(b)}r2"
    return repr(float(value))


def parse_scalar(text: str, exact: bool):
    text = text.strip()
    if exact:
        m = _EXACT_RE.match(text)
        if m is None:
            raise ValueError(f"bad exact scalar literal: {text!r}")
        b = Fraction(m.group("b"))
        if m.group("sgn") == "-":
            b = -b
        return QSqrt2(Fraction(m.group("a")), b)
    return float(text)


# -- backend facade ----------------------------------------------------------


class ExactOps:
    """Predicates for exact Q(sqrt2) coordinates."""

    backend = "exact-qsqrt2"
    exact = True
    tol = 0.0

    @staticmethod
    def coerce(v):
        if isinstance(v, QSqrt2):
            return v
        if isinstance(v, (int, Fraction)):
            return QSqrt2(v, 0)
        raise TypeError(f"not exact-backend material: {v!r}")

    @staticmethod
    def sign(v) -> int:
        if isinstance(v, QSqrt2):
            return v.sign()
        if isinstance(v, (int, Fraction)):
            return (v > 0) - (v < 0)
        raise TypeError(f"not exact-backend material: {v!r}")

    @staticmethod
    def to_float(v) -> float:
        return float(v)

    def eq(self, u, v) -> bool:
        return self.sign(u - v) == 0

    def describe(self) -> str:
        return "scalar exact-qsqrt2"


class FloatOps:
    """Predicates for float64 coordinates with an explicit tolerance."""

    backend = "f64"
    exact = False

    def __init__(self, tol: float = 1e-9):
        self.tol = float(tol)

    @staticmethod
    def coerce(v):
        return float(v)

    def sign(self, v) -> int:
        v = float(v)
        if abs(v) <= self.tol:
            return 0
        return 1 if v > 0 else -1

    @staticmethod
    def to_float(v) -> float:
        return float(v)

    def eq(self, u, v) -> bool:
        return abs(float(u) - float(v)) <= self.tol

    def describe(self) -> str:
        return f"scalar f64 tol {self.tol:g}"


def ops_for_backend(backend: str, tol: float = 1e-9):
    if backend == "exact-qsqrt2":
        return ExactOps()
    if backend == "f64":
        return FloatOps(tol)
    raise ValueError(f"unknown scalar backend: {backend!r}")
