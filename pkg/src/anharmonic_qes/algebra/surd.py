"""Exact arithmetic in Q(sqrt 5)."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import RationalEntryError
from .upoly import UPoly

_RADICAND = 5


class Surd:
    """The real number a + b*sqrt(5) with rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def from_PQ(cls, P: int, Q: int, sign: int = 1) -> "Surd":
        """(P + sign*sqrt(5)*Q) / 2."""
        return cls(Fraction(P, 2), Fraction(sign * Q, 2))

    @staticmethod
    def _lift(x) -> "Surd":
        return x if isinstance(x, Surd) else Surd(x, 0)

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 5 b^2 (product with the conjugate)."""
        return self.a * self.a - _RADICAND * self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other) -> "Surd":
        o = self._lift(other)
        return Surd(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b)

    def __sub__(self, other) -> "Surd":
        o = self._lift(other)
        return Surd(self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> "Surd":
        return self._lift(other) - self

    def __mul__(self, other) -> "Surd":
        o = self._lift(other)
        return Surd(self.a * o.a + _RADICAND * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        return Surd(self.a / n, -self.b / n)

    def __truediv__(self, other) -> "Surd":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "Surd":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "Surd":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Surd(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        d = self.a * self.a - _RADICAND * self.b * self.b
        return sa if d > 0 else (sb if d < 0 else 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b)) if self.b else hash(self.a)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def to_mpf(self):
        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * mpmath.sqrt(_RADICAND)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 5 ** 0.5

    def __repr__(self) -> str:
        return f"Surd({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        P, Q = 2 * self.a, 2 * self.b
        sign = "-" if Q < 0 else "+"
        q = abs(Q)
        rad = "sqrt(5)" if q == 1 else f"{q}*sqrt(5)"
        return f"({P} {sign} {rad})/2"


def surd_min_poly(entry, var: str = "s") -> UPoly:
    """Monic s^2 - P s + (P^2 - 5 Q^2)/4 whose roots are (P +- sqrt5 Q)/2.

    ``entry`` is anything with integer attributes ``P`` and ``Q``.
    """
    P, Q = Fraction(entry.P), Fraction(entry.Q)
    if Q == 0:
        raise RationalEntryError("rational entry, use linear factor")
    return UPoly([(P * P - _RADICAND * Q * Q) / 4, -P, 1], var)
