"""Small 2x2 matrices acting by Moebius transformations.

Entries may be ints, :class:`fractions.Fraction`, floats, or
:class:`geoflow.quadratic.QuadraticNumber`; every operation stays inside
whatever arithmetic the entries use, so exact inputs give exact results.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Any


class SingularityError(ZeroDivisionError):
    """A Moebius action or coordinate change hit its singular locus."""


@dataclass(frozen=True)
class Mat2:
    a: Any
    b: Any
    c: Any
    d: Any

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, p, q) -> "Mat2":
        return cls(p, 0, 0, q)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat2.identity()
        for _ in range(k):
            out = out @ self
        return out

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise SingularityError("matrix is not invertible")
        if det == 1:
            return Mat2(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return Mat2(-self.d, self.b, self.c, -self.a)
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def inverse_transpose(self) -> "Mat2":
        return self.inverse().transpose()

    def act(self, z):
        """Moebius action ``z -> (a z + b) / (c z + d)``."""
        den = self.c * z + self.d
        if den == 0:
            raise SingularityError(f"Moebius pole at z={z!r}")
        num = self.a * z + self.b
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def to_float(self) -> "Mat2":
        return Mat2(*(float(e) for e in self.entries()))

    def normalized(self) -> "Mat2":
        """Representative of the PSL2 class with first nonzero entry positive."""
        for e in self.entries():
            if e != 0:
                return self if e > 0 else -self
        return self

    def is_integral(self, tol: float = 0.0) -> bool:
        for e in self.entries():
            if tol == 0 and not isinstance(e, float):
                if e != math.floor(e):
                    return False
            elif abs(float(e) - round(float(e))) > tol:
                return False
        return True


def equal_pm(m: Mat2, n: Mat2, rtol: float = 0.0) -> bool:
    """Equality in PSL2: ``m == n`` or ``m == -n``.

    With ``rtol == 0`` the comparison is exact; otherwise entries are
    compared as floats relative to the larger entry magnitude.
    """
    if rtol == 0:
        return m == n or m == -n
    scale = max(1.0, *(abs(float(e)) for e in n.entries()))
    for sign in (1, -1):
        if all(abs(float(p) - sign * float(q)) <= rtol * scale
               for p, q in zip(m.entries(), n.entries())):
            return True
    return False
