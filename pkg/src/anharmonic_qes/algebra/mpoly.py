"""Sparse multivariate polynomials, resultants and gcds over the rationals.

An :class:`MPoly` is a mapping from exponent tuples to nonzero rational
coefficients over a fixed tuple of generator names.  Coefficients are
kept as Python ints whenever they are integral, since every elimination
in this package runs on primitive integer polynomials.

Resultants follow the Sylvester-determinant sign convention::

    res(A, B) = lc(A)^deg(B) * prod_{A(a)=0} B(a)

so ``res(v - c, v - d) == c - d`` and ``res(A, B) == (-1)^(deg A deg B)
res(B, A)``.  They are computed with the subresultant polynomial
remainder sequence, never by expanding the Sylvester determinant.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

from ..errors import NotADivisorError, UndefinedResultantError
from .upoly import UPoly, format_coeff_term


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class MPoly:
    """Immutable sparse polynomial in ``gens``."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.gens = tuple(gens)
        if terms is None:
            self.terms = {}
        else:
            self.terms = {e: _norm(c) for e, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, gens, terms):
        p = cls.__new__(cls)
        p.gens = gens
        p.terms = terms
        return p

    @classmethod
    def const(cls, gens, c) -> "MPoly":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens, i: int) -> "MPoly":
        e = [0] * len(gens)
        e[i] = 1
        return cls(gens, {tuple(e): 1})

    @classmethod
    def variables(cls, gens) -> list["MPoly"]:
        return [cls.var(gens, i) for i in range(len(gens))]

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self):
        return self.terms.get((0,) * len(self.gens), 0)

    def degree(self, i: int) -> int:
        """Degree in generator i (-1 for the zero polynomial)."""
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def nterms(self) -> int:
        return len(self.terms)

    def variables_used(self) -> list[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.const(self.gens, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.gens, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.gens != self.gens:
                raise ValueError("generator mismatch")
            return other
        return MPoly.const(self.gens, other)

    def __add__(self, other) -> "MPoly":
        o = self._coerce(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return MPoly._raw(self.gens, t)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly._raw(self.gens, {})
            return MPoly._raw(self.gens, {e: _norm(c * other) for e, c in self.terms.items()})
        if len(other.terms) == 1:
            (eo, co), = other.terms.items()
            return MPoly._raw(
                self.gens,
                {tuple(a + b for a, b in zip(e, eo)): _norm(c * co) for e, c in self.terms.items()},
            )
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly._raw(self.gens, {e: _norm(c) for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        result = MPoly.const(self.gens, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- division -------------------------------------------------------------
    def leading(self) -> tuple[tuple, object]:
        """Lexicographically largest term."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, d: "MPoly") -> "MPoly":
        """Quotient of an exact division; raises NotADivisorError otherwise."""
        d = self._coerce(d)
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if len(d.terms) == 1:
            (ed, cd), = d.terms.items()
            out = {}
            for e, c in self.terms.items():
                ne = tuple(a - b for a, b in zip(e, ed))
                if min(ne, default=0) < 0:
                    raise NotADivisorError("not a divisor")
                out[ne] = _divc(c, cd)
            return MPoly._raw(self.gens, out)
        ed, cd = d.leading()
        rem = dict(self.terms)
        quot: dict = {}
        dterms = list(d.terms.items())
        while rem:
            er = max(rem)
            cr = rem[er]
            ne = tuple(a - b for a, b in zip(er, ed))
            if min(ne) < 0:
                raise NotADivisorError("not a divisor")
            cq = _divc(cr, cd)
            quot[ne] = cq
            for e2, c2 in dterms:
                e = tuple(a + b for a, b in zip(ne, e2))
                v = rem.get(e, 0) - cq * c2
                if v:
                    rem[e] = v
                else:
                    rem.pop(e, None)
        return MPoly._raw(self.gens, quot)

    # -- views by one variable ------------------------------------------------
    def coeffs_in(self, i: int) -> list["MPoly"]:
        """Coefficients as a polynomial in generator i, low degree first."""
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            buckets.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        n = max(buckets, default=-1) + 1
        return [MPoly._raw(self.gens, buckets.get(k, {})) for k in range(n)]

    @classmethod
    def from_coeffs_in(cls, gens, i: int, coeffs: Sequence["MPoly"]) -> "MPoly":
        t: dict = {}
        for k, c in enumerate(coeffs):
            for e, v in c.terms.items():
                ne = e[:i] + (e[i] + k,) + e[i + 1:]
                t[ne] = v
        return cls._raw(tuple(gens), t)

    def derivative(self, i: int) -> "MPoly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                t[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MPoly._raw(self.gens, t)

    # -- substitution and evaluation ------------------------------------------
    def subs(self, values: Mapping[int, object]) -> "MPoly":
        """Substitute rational values for some generators (result keeps gens)."""
        t: dict = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, x in values.items():
                if e[i]:
                    v = v * x ** e[i]
                    ne[i] = 0
            ne = tuple(ne)
            t[ne] = t.get(ne, 0) + v
        return MPoly(self.gens, t)

    def evaluate(self, point: Sequence, convert: Callable | None = None):
        """Evaluate at a full point in any ring supporting + and * (ints, Surds, mpf)."""
        acc = None
        for e, c in self.terms.items():
            term = convert(c) if convert else c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            acc = term if acc is None else acc + term
        if acc is None:
            return convert(0) if convert else 0
        return acc

    def magnitude(self, point: Sequence, absval: Callable, convert: Callable):
        """Sum of absolute term values at a point (scale for relative residuals)."""
        acc = convert(0)
        for e, c in self.terms.items():
            term = absval(convert(c))
            for x, k in zip(point, e):
                if k:
                    term = term * absval(x) ** k
            acc = acc + term
        return acc

    def to_upoly(self, i: int) -> UPoly:
        """View as a univariate polynomial; all other generators must be absent."""
        cs = self.coeffs_in(i)
        out = []
        for c in cs:
            if not c.is_const():
                raise ValueError("polynomial is not univariate in the requested generator")
            out.append(c.const_value())
        return UPoly(out, self.gens[i])

    @classmethod
    def from_upoly(cls, gens, i: int, p: UPoly) -> "MPoly":
        return cls.from_coeffs_in(gens, i, [cls.const(gens, c) for c in p.coeffs])

    # -- normalisation ---------------------------------------------------------
    def content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        cs = [Fraction(c) for c in self.terms.values()]
        den = reduce(lcm, (c.denominator for c in cs), 1)
        num = reduce(gcd, (int(c * den) for c in cs), 0)
        return Fraction(abs(num), den)

    def primitive(self) -> "MPoly":
        """Integer primitive part with positive lex-leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        p = self * (1 / c)
        if p.leading()[1] < 0:
            p = -p
        return p

    def monomial_content(self) -> tuple:
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.gens)))

    def to_text(self) -> str:
        """Canonical text: graded-lex order, explicit signs."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e), reverse=True):
            mono = "*".join(
                (g if k == 1 else f"{g}^{k}") for g, k in zip(self.gens, e) if k
            )
            parts.append(format_coeff_term(Fraction(self.terms[e]), mono, not parts))
        return "".join(parts)


def _divc(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _norm(Fraction(a) / b)


# ---------------------------------------------------------------------------
# univariate-over-MPoly helpers: lists of MPoly coefficients, low degree first


def _trim(a: list) -> list:
    while a and a[-1].is_zero():
        a.pop()
    return a


def prem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] = r[i + shift] - lr * c
        r.pop()
        _trim(r)
        e -= 1
    if e > 0 and r:
        m = lb**e
        r = [c * m for c in r]
    return r


def _resultant_lists(a: list, b: list, one: MPoly) -> MPoly:
    da, db = len(a) - 1, len(b) - 1
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -s
    if db == 0:
        return b[0] ** da * s
    g = h = one
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = prem(a, b)
        a = b
        if not r:
            return one * 0
        div = g * h**delta
        b = [c.exact_div(div) for c in r]
        g = a[-1]
        if delta != 0:
            h = g**delta if delta == 1 else (g**delta).exact_div(h ** (delta - 1))
        if len(b) - 1 == 0:
            break
    da = len(a) - 1
    lb = b[-1]
    h = lb**da if da == 1 else (lb**da).exact_div(h ** (da - 1))
    return h * s


def resultant(A: MPoly, B: MPoly, i: int) -> MPoly:
    """Sylvester resultant of A and B with respect to generator i.

    Sign convention: res(A, B) = lc(A)^deg(B) * prod over roots a of A of B(a).
    """
    if A.is_zero() or B.is_zero():
        raise UndefinedResultantError("undefined resultant")
    if A.gens != B.gens:
        raise ValueError("generator mismatch")
    da, db = A.degree(i), B.degree(i)
    if da == 0 and db == 0:
        return MPoly.const(A.gens, 1)
    if da == 0:
        return A**db
    if db == 0:
        return B**da
    one = MPoly.const(A.gens, 1)
    return _resultant_lists(A.coeffs_in(i), B.coeffs_in(i), one)


def _last_prs(a: list, b: list, one: MPoly) -> list:
    """Last nonzero member of the subresultant PRS of a, b (deg a >= deg b)."""
    g = h = one
    while True:
        delta = len(a) - len(b)
        r = prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        a, b = b, [c.exact_div(g * h**delta) for c in r]
        g = a[-1]
        if delta != 0:
            h = g**delta if delta == 1 else (g**delta).exact_div(h ** (delta - 1))


def mgcd(A: MPoly, B: MPoly) -> MPoly:
    """Greatest common divisor in Z[gens], primitive with positive leading term."""
    if A.is_zero():
        return B.primitive()
    if B.is_zero():
        return A.primitive()
    A, B = A.primitive(), B.primitive()
    used = sorted(set(A.variables_used()) | set(B.variables_used()))
    if not used:
        return MPoly.const(A.gens, 1)
    v = used[-1]
    ca, cb = _content_in(A, v), _content_in(B, v)
    c = mgcd(ca, cb)
    pa, pb = A.exact_div(ca), B.exact_div(cb)
    if pa.degree(v) == 0 or pb.degree(v) == 0:
        return c.primitive()
    la, lb = pa.coeffs_in(v), pb.coeffs_in(v)
    if len(la) < len(lb):
        la, lb = lb, la
    last = _last_prs(la, lb, MPoly.const(A.gens, 1))
    if len(last) == 1:
        return c.primitive()
    g = MPoly.from_coeffs_in(A.gens, v, last)
    g = g.exact_div(_content_in(g, v))
    return (g * c).primitive()


def _content_in(P: MPoly, v: int) -> MPoly:
    """Gcd of the coefficients of P viewed as a polynomial in generator v."""
    cs = [c for c in P.coeffs_in(v) if not c.is_zero()]
    cs.sort(key=lambda c: (c.nterms(), c.total_degree()))
    g = cs[0].primitive()
    for c in cs[1:]:
        if g.is_const():
            break
        g = mgcd(g, c)
    if g.is_const():
        return MPoly.const(P.gens, 1)
    return g


def squarefree_part(P: MPoly) -> MPoly:
    """Primitive part of P with repeated factors removed.

    Splits P into its content and primitive part with respect to the last
    generator present; the primitive part is reduced by gcd with its
    derivative, the content recursively.
    """
    P = P.primitive()
    used = P.variables_used()
    if not used:
        return MPoly.const(P.gens, 1)
    v = used[-1]
    c = _content_in(P, v)
    pp = P.exact_div(c)
    g = mgcd(pp, pp.derivative(v))
    if not g.is_const():
        pp = pp.exact_div(g)
    return (squarefree_part(c) * pp).primitive()


def sylvester_matrix(a: Sequence, b: Sequence) -> list[list]:
    """Sylvester matrix of two coefficient lists (low degree first)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for k in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[k + j] = c
        rows.append(row)
    for k in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[k + j] = c
        rows.append(row)
    return rows


def polys_from_gens(gens: Iterable[str]) -> list[MPoly]:
    return MPoly.variables(tuple(gens))
