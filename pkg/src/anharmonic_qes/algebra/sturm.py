"""Real-root isolation with Sturm sequences in exact integer arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import floor, gcd

import mpmath

from .upoly import UPoly, _prim, int_prem

DEFAULT_WIDTH = Fraction(1, 10**30)


def _sign_at(ints: list[int], x: Fraction) -> int:
    a, b = x.numerator, x.denominator
    acc = 0
    bp = 1
    for c in reversed(ints):
        acc = acc * a + c * bp
        bp *= b
    return (acc > 0) - (acc < 0)


def sturm_chain(p: UPoly) -> list[list[int]]:
    """Sturm sequence of a squarefree polynomial, each member primitive in Z[x].

    Members are rescaled by positive factors only (after normalising p to a
    positive leading coefficient, which negates every member and leaves the
    sign variations unchanged).
    """
    chain = [_prim(p.integer_coeffs())]
    d = _prim(p.derivative().integer_coeffs())
    if not d:
        return chain
    chain.append(d)
    while len(chain[-1]) > 1:
        a, b = chain[-2], chain[-1]
        r = int_prem(a, b)
        if not r:
            break
        # prem carries the factor lc(b)^(delta+1); keep only positive rescalings
        if b[-1] < 0 and (len(a) - len(b) + 1) % 2:
            r = [-c for c in r]
        g = reduce(gcd, r, 0)
        chain.append([-(c // g) for c in r])
    return chain


def _variations(chain: list[list[int]], x: Fraction) -> int:
    signs = [s for s in (_sign_at(c, x) for c in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def cauchy_bound(p: UPoly) -> Fraction:
    """A power of two strictly larger than the modulus of every root."""
    ints = p.integer_coeffs()
    lead = abs(ints[-1])
    m = max((abs(c) for c in ints[:-1]), default=0)
    bound = 1 + Fraction(m, lead)
    b = Fraction(1)
    while b <= bound:
        b *= 2
    return b


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval [lo, hi] for exactly one real root of ``poly``.

    Either lo == hi (an exact rational root) or poly changes sign strictly
    between the endpoints, which are not roots.
    """

    lo: Fraction
    hi: Fraction
    poly: UPoly

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self, width: Fraction) -> "RootInterval":
        """Bisect until hi - lo <= width."""
        lo, hi = self.lo, self.hi
        if lo == hi:
            return self
        ints = self.poly.integer_coeffs()
        slo = _sign_at(ints, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = _sign_at(ints, mid)
            if sm == 0:
                return RootInterval(mid, mid, self.poly)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return RootInterval(lo, hi, self.poly)

    def contains(self, x) -> bool:
        """Exact containment test for a rational or a Surd."""
        return self.lo <= x <= self.hi

    def exact_rational(self, width: Fraction = DEFAULT_WIDTH) -> Fraction | None:
        """The root as a rational if it is one (simplest rational test), else None."""
        if self.is_exact:
            return self.lo
        iv = self.refine(width)
        if iv.is_exact:
            return iv.lo
        cand = simplest_between(iv.lo, iv.hi)
        return cand if self.poly.sign_at(cand) == 0 else None

    def to_mpf(self, dps: int = 64):
        iv = self.refine(Fraction(1, 10 ** (dps + 5)))
        m = iv.midpoint
        with mpmath.workdps(dps + 10):
            return mpmath.mpf(m.numerator) / m.denominator


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi] (Stern-Brocot descent)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi share integer part; recurse on reciprocals of fractional parts
    rest = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


def count_roots(chain, a: Fraction, b: Fraction) -> int:
    """Number of distinct roots in (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def sturm_isolate(p: UPoly, width: Fraction | None = DEFAULT_WIDTH) -> list[RootInterval]:
    """Disjoint isolating intervals for all distinct real roots, in increasing order.

    Intervals are refined to ``width`` (pass None to skip refinement).
    """
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    sq = p.squarefree_part()
    if sq.degree <= 0:
        return []
    chain = sturm_chain(sq)
    ints = chain[0]
    B = cauchy_bound(sq)
    found: list[RootInterval] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = count_roots(chain, a, b)
        if n == 0:
            continue
        if n == 1:
            found.append(RootInterval(a, b, sq))
            continue
        mid = (a + b) / 2
        if _sign_at(ints, mid) == 0:
            found.append(RootInterval(mid, mid, sq))
            eps = (b - a) / 4
            while count_roots(chain, mid - eps, mid + eps) != 1 or not (
                _sign_at(ints, mid - eps) and _sign_at(ints, mid + eps)
            ):
                eps /= 2
            stack.append((a, mid - eps))
            stack.append((mid + eps, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    found.sort(key=lambda iv: iv.lo)
    if width is not None:
        found = [iv.refine(width) for iv in found]
    return found


def real_root_count(p: UPoly) -> int:
    sq = p.squarefree_part()
    if sq.degree <= 0:
        return 0
    chain = sturm_chain(sq)
    B = cauchy_bound(sq)
    return count_roots(chain, -B, B)
