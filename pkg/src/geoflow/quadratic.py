"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

Only what the Hecke-group code needs: ring operations, division, exact
sign/order, ``floor``, and conversion to float.  Mixing with ``int`` and
``Fraction`` operands is supported; mixing two different radicands is an
error.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


class QuadraticNumber:
    """``a + b*sqrt(D)`` with rational ``a, b`` and squarefree ``D > 1``."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 2):
        if D < 2 or math.isqrt(D) ** 2 == D:
            raise ValueError(f"radicand must be a positive non-square, got {D}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.D = D

    @classmethod
    def sqrt(cls, D: int) -> "QuadraticNumber":
        return cls(0, 1, D)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.D != self.D:
                raise ValueError("cannot mix quadratic fields with different radicands")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(other, 0, self.D)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return float(self) + other
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return float(self) - other
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return float(self) * other
        return QuadraticNumber(self.a * o.a + self.D * self.b * o.b,
                               self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return float(self) / other
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(D))")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / n, num.b / n, self.D)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return other / float(self)
        return o / self

    def sign(self) -> int:
        # sign of a + b*sqrt(D) without rounding
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        lhs, rhs = self.a * self.a, self.D * self.b * self.b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            f = float(self)
            return (f > other) - (f < other)
        return (self - o).sign()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is NotImplemented:
            return float(self) == other
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __floor__(self) -> int:
        # bracket lo <= self < hi around the float guess, then bisect exactly
        guess = math.floor(float(self))
        width = 1
        lo, hi = guess, guess + 1
        while self < lo:
            lo, width = lo - width, width * 2
        while self >= hi:
            hi, width = hi + width, width * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self < mid:
                hi = mid
            else:
                lo = mid
        return lo

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, D={self.D})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.D})"
