"""Polynomial potentials, the coupling correspondence alpha <-> g, and the ansatz.

The canonical potential of degree 4q+2 is written as

    V(r) = g_0 r^2 + g_1 r^4 + ... + g_{2q} r^{4q+2} = Omega(r)^2 r^2 + S(r)

with Omega(r) = alpha_0 + alpha_1 r^2 + ... + alpha_q r^{2q} and
S(r) = G_0 r^2 + ... + G_{q-1} r^{2q}.  Matching powers gives
g_m = sum_{i+j=m} alpha_i alpha_j (+ G_m for m < q).

Everything here is exact (``Fraction``) unless a function says otherwise;
wavefunction values are computed with mpmath at a configurable precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import mpmath

from .errors import CouplingError

DEFAULT_DPS = 64

# The r^2 = x style changes of variable map V onto these equivalent pictures;
# they are carried as labels only.
PICTURES = {
    "V": "V(r) = g_0 r^2 + ... + g_2q r^(4q+2)",
    "U": "U(x) = f_0/x + f_1 x + ... + f_2q x^(2q)",
    "W": "W(z) = h_0 z^(-3/2) + ... + h_2q z^(q-1)",
}


def convolution(alphas: Sequence, m: int):
    """sum_{i+j=m} alpha_i alpha_j with indices in [0, q]."""
    q = len(alphas) - 1
    total = 0
    for i in range(max(0, m - q), min(m, q) + 1):
        total += alphas[i] * alphas[m - i]
    return total


def alpha_to_g(alphas: Sequence, Gs: Sequence) -> tuple:
    """Full couplings g_0..g_{2q} from the exponent couplings and the residual ones."""
    q = len(alphas) - 1
    if len(Gs) != q:
        raise CouplingError(f"expected {q} residual couplings, got {len(Gs)}")
    if not alphas[-1] > 0:
        raise CouplingError("leading coupling must be positive")
    return tuple(convolution(alphas, m) + (Gs[m] if m < q else 0) for m in range(2 * q + 1))


def _exact_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def g_to_alpha(gs: Sequence, exact: bool = True, dps: int = DEFAULT_DPS) -> tuple[tuple, tuple]:
    """Invert :func:`alpha_to_g`: recover (alphas, Gs) by downward recursion.

    With ``exact=False`` an irrational sqrt(g_2q) is evaluated with mpmath.
    """
    if len(gs) % 2 != 1:
        raise CouplingError("need an odd number 2q+1 of couplings")
    q = (len(gs) - 1) // 2
    top = gs[-1]
    if not top > 0:
        raise CouplingError("not a confining canonical potential")
    if isinstance(top, (int, Fraction)):
        root = _exact_sqrt(Fraction(top))
        if root is None:
            if exact:
                raise CouplingError("irrational leading exponent")
            with mpmath.workdps(dps):
                root = mpmath.sqrt(mpmath.mpf(top.numerator) / top.denominator) \
                    if isinstance(top, Fraction) else mpmath.sqrt(top)
    else:
        root = mpmath.sqrt(top)
    alphas = [None] * (q + 1)
    alphas[q] = root
    for k in range(1, q + 1):
        m = 2 * q - k
        # g_m = 2 alpha_q alpha_{q-k} + sum over inner pairs with both indices in (q-k, q)
        inner = 0
        for i in range(q - k + 1, q):
            j = m - i
            if q - k < j < q:
                inner += alphas[i] * alphas[j]
        alphas[q - k] = (gs[m] - inner) / (2 * root)
    Gs = tuple(gs[m] - convolution(alphas, m) for m in range(q))
    return tuple(alphas), Gs


@dataclass(frozen=True)
class PotentialSpec:
    """A canonical potential with its exceptional energy.

    ``gs`` is always derived from ``alphas`` and ``Gs``; it is never stored
    independently (and never read back from serialised documents).
    """

    q: int
    alphas: tuple
    Gs: tuple = ()
    E: object = 0
    gs: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "Gs", tuple(self.Gs))
        if self.q < 0 or len(self.alphas) != self.q + 1:
            raise CouplingError("alphas must have q+1 entries")
        object.__setattr__(self, "gs", alpha_to_g(self.alphas, self.Gs))

    @property
    def omega(self):
        """Harmonic frequency alpha_0 (the q = 0 reading)."""
        return self.alphas[0]

    def potential(self, r):
        """V(r) = sum g_m r^(2m+2)."""
        r2 = r * r
        acc = 0
        p = r2
        for g in self.gs:
            acc += g * p
            p *= r2
        return acc

    def to_json(self) -> str:
        return json.dumps(
            {
                "q": self.q,
                "alphas": [str(a) for a in self.alphas],
                "Gs": [str(G) for G in self.Gs],
                "E": str(self.E),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "PotentialSpec":
        doc = json.loads(text)
        return cls(
            q=int(doc["q"]),
            alphas=tuple(Fraction(a) for a in doc["alphas"]),
            Gs=tuple(Fraction(G) for G in doc.get("Gs", [])),
            E=Fraction(doc.get("E", 0)),
        )


@dataclass(frozen=True)
class AnsatzState:
    """Terminating Taylor factor h_0..h_{N-1} at angular momentum ell."""

    ell: Fraction
    N: int
    hs: tuple

    def __post_init__(self):
        object.__setattr__(self, "hs", tuple(self.hs))
        if self.N < 1 or len(self.hs) != self.N:
            raise ValueError("need N >= 1 coefficients")


def ell_from_D(D: int, j: int = 0) -> Fraction:
    """Angular momentum (D-3)/2 + j of the j-th partial wave in D dimensions."""
    if D < 1:
        raise ValueError("dimension must be positive")
    return Fraction(D - 3, 2) + j


def bwkb_eval(r, alphas: Sequence):
    """WKB exponent B(r) = sum_k alpha_k r^(2k+2) / (2k+2)."""
    r2 = r * r
    acc = 0
    p = r2
    for k, a in enumerate(alphas):
        acc += a * p / (2 * k + 2)
        p *= r2
    return acc


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def psi_eval(r, state: AnsatzState, alphas: Sequence, dps: int = DEFAULT_DPS):
    """psi(r) = sum_n h_n r^(2n+ell+1) exp(-B(r)) at ``dps`` decimal digits."""
    with mpmath.workdps(dps):
        r = _mp(r)
        if r <= 0:
            raise ValueError("psi is evaluated at r > 0")
        al = [_mp(a) for a in alphas]
        r2 = r * r
        poly = mpmath.mpf(0)
        for h in reversed(state.hs):
            poly = poly * r2 + _mp(h)
        return poly * r ** (_mp(state.ell) + 1) * mpmath.exp(-bwkb_eval(r, al))
