"""Dense univariate polynomials over the rationals.

Coefficients are stored low degree first as :class:`fractions.Fraction`.
Heavy routines (gcd, squarefree part, Sturm chains) work on primitive
integer coefficient lists internally, which keeps Python big-int
arithmetic cheap and avoids Fraction normalisation in inner loops.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from ..errors import NotADivisorError


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def format_coeff_term(c: Fraction, mono: str, first: bool) -> str:
    """Render one signed term of a canonical polynomial string."""
    neg = c < 0
    a = -c if neg else c
    if mono:
        body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
    else:
        body = _fmt_rat(a)
    if first:
        return f"-{body}" if neg else body
    return f" - {body}" if neg else f" + {body}"


def _fmt_rat(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class UPoly:
    """Immutable univariate polynomial with rational coefficients."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "s"):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.var = var

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, deg: int, coeff=1, var: str = "s") -> "UPoly":
        return cls([0] * deg + [coeff], var)

    @classmethod
    def from_roots(cls, roots: Sequence, var: str = "s") -> "UPoly":
        p = cls([1], var)
        for r in roots:
            p = p * cls([-_frac(r), 1], var)
        return p

    # -- basic queries --------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly([other], self.var)

    def __add__(self, other) -> "UPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UPoly([x + y for x, y in zip(a, b)], self.var)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other) -> "UPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            c = _frac(other)
            return UPoly([c * x for x in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return UPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UPoly":
        result = UPoly([1], self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, d: "UPoly") -> tuple["UPoly", "UPoly"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dd = d.degree
        inv = 1 / d.lc
        q = [Fraction(0)] * max(len(r) - dd, 0)
        for k in range(len(r) - 1 - dd, -1, -1):
            c = r[k + dd] * inv
            q[k] = c
            if c:
                for i, b in enumerate(d.coeffs):
                    r[k + i] -= c * b
        return UPoly(q, self.var), UPoly(r[:dd], self.var)

    def __floordiv__(self, d) -> "UPoly":
        return self.divmod(self._coerce(d))[0]

    def __mod__(self, d) -> "UPoly":
        return self.divmod(self._coerce(d))[1]

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_with(self, x, convert):
        """Horner evaluation after mapping each coefficient through ``convert``."""
        acc = convert(0)
        for c in reversed(self.coeffs):
            acc = acc * x + convert(c)
        return acc

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of P(x) for rational x, using integer arithmetic only."""
        x = _frac(x)
        ints = self.integer_coeffs()
        a, b = x.numerator, x.denominator
        # homogenised Horner: b^d * P(a/b) = sum c_i a^i b^(d-i), and b > 0
        acc = 0
        bp = 1
        for c in reversed(ints):
            acc = acc * a + c * bp
            bp *= b
        return (acc > 0) - (acc < 0)

    # -- calculus and normalisation -------------------------------------
    def derivative(self) -> "UPoly":
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive in Z[x]."""
        if self.is_zero():
            return Fraction(0)
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(gcd, (int(c * den) for c in self.coeffs), 0)
        return Fraction(abs(num), den)

    def primitive(self) -> "UPoly":
        """Integer primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        p = self * (1 / c)
        return -p if p.lc < 0 else p

    def integer_coeffs(self) -> list[int]:
        """Coefficients of an integer multiple of self (sign preserved)."""
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        return [int(c * den) for c in self.coeffs]

    def with_var(self, var: str) -> "UPoly":
        return UPoly(self.coeffs, var)

    def compose_power(self, k: int) -> "UPoly":
        """Return self(x**k)."""
        out = [Fraction(0)] * (k * max(self.degree, 0) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return UPoly(out, self.var)

    # -- gcd family ---------------------------------------------------------
    def gcd(self, other: "UPoly") -> "UPoly":
        """Monic greatest common divisor (primitive PRS over Z)."""
        a, b = _prim(self.integer_coeffs()), _prim(other.integer_coeffs())
        g = _int_gcd(a, b)
        return UPoly(g, self.var).monic() if g else UPoly([], self.var)

    def squarefree_part(self) -> "UPoly":
        """Primitive squarefree part: self / gcd(self, self')."""
        if self.degree <= 0:
            return self.primitive()
        g = self.gcd(self.derivative())
        return exact_div(self, g).primitive()

    def to_text(self, var: str | None = None) -> str:
        """Canonical text: descending powers, explicit signs, ``*`` and ``^``."""
        v = var or self.var
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (v if i == 1 else f"{v}^{i}")
            parts.append(format_coeff_term(c, mono, not parts))
        return "".join(parts)


def exact_div(p: UPoly, d: UPoly) -> UPoly:
    """Quotient q with p == q*d exactly; raises NotADivisorError otherwise."""
    q, r = p.divmod(d)
    if not r.is_zero():
        raise NotADivisorError("not a divisor")
    return q


# ---------------------------------------------------------------------------
# integer-list helpers (low degree first)


def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _prim(a: list[int]) -> list[int]:
    a = _strip(list(a))
    if not a:
        return a
    g = reduce(gcd, a, 0)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r.pop()
        _strip(r)
        e -= 1
    if e > 0 and r:
        m = lb**e
        r = [c * m for c in r]
    return r


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    if not a:
        return _prim(b)
    if not b:
        return _prim(a)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = int_prem(a, b)
        a, b = b, _prim(r)
    return _prim(a)
