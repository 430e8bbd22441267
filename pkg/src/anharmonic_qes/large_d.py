"""Leading-order large-D reduction of the recurrence to the trapezoidal system.

With h_n = p_n / mu^n, mu = (D / (2 alpha_q))^(1/(q+1)),
tau = (2^(q+2) D^q alpha_q)^(1/(q+1)) and the linear reparametrisation

    g_{k-2} = -alpha_{k-1} D - tau s_k / mu^(k-1),   k = 1..q   (g_{-1} = -E)

each recurrence row n, multiplied by mu^n / tau, tends to a row of an
(N+q-1) x N band matrix in the unknowns s_1..s_q: the super-diagonal
carries 1, 2, ..., N-1 (from C_n / (mu tau)), the diagonal s_1 (from
B_n / tau), sub-band k carries s_{k+1} (from A^(k) mu^k / tau), and
sub-band q the descending integers N-1, ..., 1 (from A^(q) mu^q / tau
once the last row has fixed g_{q-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .algebra import MPoly
from .errors import ScalingError
from .model import convolution, ell_from_D
from .recurrence import last_row_G

DEFAULT_DPS = 64


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def exact_root(x: Fraction, k: int) -> Fraction | None:
    """x^(1/k) if it is rational, else None."""
    x = Fraction(x)
    a, b = _int_root(x.numerator, k), _int_root(x.denominator, k)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class ScalingMap:
    D: object
    q: int
    alpha_q: object
    mu: object
    tau: object

    @property
    def exact(self) -> bool:
        return isinstance(self.mu, Fraction) and isinstance(self.tau, Fraction)


def scaling(D, q: int, alpha_q, dps: int = DEFAULT_DPS) -> ScalingMap:
    """mu(D) and tau(D); exact rationals when both roots are rational."""
    if q < 1:
        raise ScalingError("scaling defined for q >= 1")
    if D < 1 or not alpha_q > 0:
        raise ScalingError("need D >= 1 and alpha_q > 0")
    if isinstance(D, (int, Fraction)) and isinstance(alpha_q, (int, Fraction)):
        mu = exact_root(Fraction(D) / (2 * Fraction(alpha_q)), q + 1)
        tau = exact_root(Fraction(2) ** (q + 2) * Fraction(D) ** q * Fraction(alpha_q), q + 1)
        if mu is not None and tau is not None:
            return ScalingMap(D, q, alpha_q, mu, tau)
    with mpmath.workdps(dps):
        Dm, aq = _mpf(D), _mpf(alpha_q)
        mu = mpmath.root(Dm / (2 * aq), q + 1)
        tau = mpmath.root(mpmath.mpf(2) ** (q + 2) * Dm**q * aq, q + 1)
    return ScalingMap(D, q, alpha_q, mu, tau)


def g_from_s(D, alphas: Sequence, s: Sequence, dps: int = DEFAULT_DPS):
    """(E, [g_0..g_{q-2}]) from the rescaled multi-eigenvalue s_1..s_q."""
    q = len(alphas) - 1
    if len(s) != q:
        raise ValueError("need q values s_1..s_q")
    sc = scaling(D, q, alphas[q], dps)
    with mpmath.workdps(dps):
        if not sc.exact:
            alphas, s = [_mpf(a) for a in alphas], [_mpf(x) for x in s]
        E = alphas[0] * D + sc.tau * s[0]
        gs = [-alphas[k - 1] * D - sc.tau / sc.mu ** (k - 1) * s[k - 1] for k in range(2, q + 1)]
    return E, gs


def s_from_g(D, alphas: Sequence, E, gs_low: Sequence, dps: int = DEFAULT_DPS) -> tuple:
    """Inverse of :func:`g_from_s`."""
    q = len(alphas) - 1
    sc = scaling(D, q, alphas[q], dps)
    with mpmath.workdps(dps):
        if not sc.exact:
            alphas, E, gs_low = [_mpf(a) for a in alphas], _mpf(E), [_mpf(g) for g in gs_low]
        s = [(E - alphas[0] * D) / sc.tau]
        for k in range(2, q + 1):
            s.append((-gs_low[k - 2] - alphas[k - 1] * D) * sc.mu ** (k - 1) / sc.tau)
    return tuple(s)


@dataclass(frozen=True)
class TrapSystem:
    """Leading-order (N+q-1) x N band matrix.

    ``entries`` maps (row, col) to either an int or a string 's<k>'.
    """

    q: int
    N: int
    entries: dict

    @property
    def shape(self) -> tuple[int, int]:
        return (self.N + self.q - 1, self.N)

    def entry(self, n: int, j: int):
        return self.entries.get((n, j), 0)

    def symbolic(self, gens: Sequence[str] | None = None) -> list[list[MPoly]]:
        gens = tuple(gens or [f"s{k}" for k in range(1, self.q + 1)])
        svars = MPoly.variables(gens)
        rows, cols = self.shape
        out = []
        for n in range(rows):
            row = []
            for j in range(cols):
                e = self.entry(n, j)
                row.append(svars[int(e[1:]) - 1] if isinstance(e, str) else MPoly.const(gens, e))
            out.append(row)
        return out

    def numeric(self, s: Sequence) -> list[list]:
        rows, cols = self.shape
        return [
            [s[int(e[1:]) - 1] if isinstance(e, str) else e for e in (self.entry(n, j) for j in range(cols))]
            for n in range(rows)
        ]

    def pretty(self) -> str:
        """Band layout with blank cells off the band."""
        rows, cols = self.shape
        cells = [[("" if self.entry(n, j) == 0 else str(self.entry(n, j))) for j in range(cols)] for n in range(rows)]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("| " + " ".join(c.rjust(w) for c in r) + " |" for r in cells)


def build_trap(q: int, N: int) -> TrapSystem:
    """The trapezoidal system; for N = 1 this is the single column (s_1..s_q)."""
    if q < 1 or N < 1:
        raise ValueError("need q >= 1 and N >= 1")
    entries = {}
    for n in range(N + q - 1):
        if n + 1 <= N - 1:
            entries[(n, n + 1)] = n + 1
        for k in range(q):
            j = n - k
            if 0 <= j <= N - 1:
                entries[(n, j)] = f"s{k + 1}"
        j = n - q
        if 0 <= j <= N - 1 and N - 1 - j:
            entries[(n, j)] = N - 1 - j
    return TrapSystem(q, N, entries)


def s_orbit(z, q: int, dps: int = DEFAULT_DPS) -> list:
    """All (q+1)-th roots of z, real ones returned as exact-real mpf values."""
    m = q + 1
    with mpmath.workdps(dps):
        z = mpmath.mpmathify(z)
        if z == 0:
            return [mpmath.mpf(0)] * m
        r = mpmath.root(abs(z), m)
        theta = mpmath.arg(z)
        out = []
        for k in range(m):
            ang = (theta + 2 * mpmath.pi * k) / m
            # angle is a multiple of pi exactly when 2 k (or 2k+1 for z < 0) is a multiple of m
            turns2 = (2 * k + (1 if (mpmath.im(z) == 0 and mpmath.re(z) < 0) else 0))
            if mpmath.im(z) == 0 and turns2 % m == 0:
                out.append(r if (turns2 // m) % 2 == 0 else -r)
            else:
                out.append(r * mpmath.expj(ang))
        return out


def rescaled_entries(D, alphas: Sequence, s: Sequence, N: int, j: int = 0, dps: int = DEFAULT_DPS):
    """Finite-D recurrence entries (n, col) scaled by mu^(n-col)/tau.

    Couplings are taken from :func:`g_from_s`, g_{q-1} from the final row
    and ell = (D-3)/2 + j.  Returns a dict keyed like TrapSystem.entries
    (all band positions of the trap matrix).
    """
    q = len(alphas) - 1
    with mpmath.workdps(dps):
        al = [_mpf(a) for a in alphas]
        ell = _mpf(ell_from_D(D, j))
        sc = scaling(D, q, alphas[q], dps)
        mu, tau = _mpf(sc.mu), _mpf(sc.tau)
        E, glow = g_from_s(D, al, [_mpf(x) for x in s], dps)
        g_qm1 = convolution(al, q - 1) + last_row_G(al, ell, N)
        gs = list(glow) + [g_qm1]
        out = {}
        for n in range(N + q - 1):
            if n + 1 <= N - 1:
                C = (2 * n + 2) * (2 * n + 2 * ell + 3)
                out[(n, n + 1)] = C / (mu * tau)
            if n <= N - 1:
                out[(n, n)] = (E - al[0] * (4 * n + 2 * ell + 3)) / tau
            for k in range(1, q + 1):
                col = n - k
                if 0 <= col <= N - 1:
                    A = -al[k] * (4 * n + 2 * ell + 3 - 2 * k) + convolution(al, k - 1) - gs[k - 1]
                    out[(n, col)] = A * mu**k / tau
        return out


@dataclass(frozen=True)
class SpectrumPoint:
    """One real solution (s_1..s_q) of the trap system.

    ``s`` holds mpmath reals; ``exact`` holds Fraction/Surd components when
    they were recognised and confirmed by exact substitution.
    """

    s: tuple
    exact: tuple | None = None
    residual: object = None

    def key(self, digits: int = 20) -> tuple:
        return tuple(mpmath.nstr(x, digits) for x in self.s)
