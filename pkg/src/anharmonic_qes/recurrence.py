"""Finite-dimension banded recurrences for terminating solutions.

Inserting psi = sum_{n<N} h_n r^(2n+ell+1) exp(-B(r)) into the radial
equation gives, for every n >= 0,

    sum_{k=1..q} A_n^(k) h_{n-k} + B_n h_n + C_n h_{n+1} = 0

with C_n = (2n+2)(2n+2 ell+3), B_n = E - alpha_0 (4n+2 ell+3) and
A_n^(k) = -alpha_k (4n+2 ell+3-2k) + sum_{i+j=k-1} alpha_i alpha_j - g_{k-1}.
Termination at degree N leaves rows n = 0..N+q-1, i.e. N+q conditions on
the N+q unknowns E, G_0..G_{q-1}, h_1..h_{N-1} (h_0 = 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import DegenerateRootError, DivergedError
from .model import PotentialSpec, alpha_to_g, convolution

DEFAULT_DPS = 64
NEWTON_TOL = mpmath.mpf("1e-30")
MAX_ITER = 200


@dataclass(frozen=True)
class BandRow:
    n: int
    C: object
    B: object
    A: tuple  # A^(1)..A^(q)


@dataclass(frozen=True)
class QESCandidate:
    """A finite-D terminating solution: energy, residual couplings and Taylor factor."""

    E: object
    Gs: tuple
    hs: tuple
    kind: str = "exact"  # "exact" (Fraction) or "mp" (mpmath real)
    residual_norm: object = None

    def __post_init__(self):
        object.__setattr__(self, "Gs", tuple(self.Gs))
        object.__setattr__(self, "hs", tuple(self.hs))

    def to_json(self, dps: int = DEFAULT_DPS) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            return mpmath.nstr(x, dps, min_fixed=-mpmath.inf, max_fixed=mpmath.inf) \
                if isinstance(x, mpmath.mpf) else str(x)

        doc = {
            "E": enc(self.E),
            "Gs": [enc(G) for G in self.Gs],
            "hs": [enc(h) for h in self.hs],
            "kind": self.kind,
        }
        if self.residual_norm is not None:
            doc["residual_norm"] = mpmath.nstr(self.residual_norm, 5)
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, dps: int = DEFAULT_DPS) -> "QESCandidate":
        doc = json.loads(text)
        if doc.get("kind", "exact") == "exact":
            dec = Fraction
        else:
            def dec(s):
                with mpmath.workdps(dps):
                    return mpmath.mpf(s)
        return cls(
            E=dec(doc["E"]),
            Gs=tuple(dec(G) for G in doc["Gs"]),
            hs=tuple(dec(h) for h in doc["hs"]),
            kind=doc.get("kind", "exact"),
        )


def _row(alphas, gs, E, ell, n: int) -> BandRow:
    q = len(alphas) - 1
    C = (2 * n + 2) * (2 * n + 2 * ell + 3)
    B = E - alphas[0] * (4 * n + 2 * ell + 3)
    A = tuple(
        -alphas[k] * (4 * n + 2 * ell + 3 - 2 * k) + convolution(alphas, k - 1) - gs[k - 1]
        for k in range(1, q + 1)
    )
    return BandRow(n, C, B, A)


def build_rows(spec: PotentialSpec, ell, N: int) -> list[BandRow]:
    """Rows n = 0..N+q-1 of the recurrence for the given potential and energy."""
    if N < 1:
        raise ValueError("N must be positive")
    return [_row(spec.alphas, spec.gs, spec.E, ell, n) for n in range(N + spec.q)]


def _rows_for(alphas, ell, N, E, Gs) -> list[BandRow]:
    # Fraction and mpf do not mix; promote everything once any value is inexact
    if not all(isinstance(x, (int, Fraction)) for x in (E, ell, *Gs, *alphas)):
        alphas, ell, E, Gs = [_mpf(a) for a in alphas], _mpf(ell), _mpf(E), [_mpf(G) for G in Gs]
    gs = alpha_to_g(alphas, Gs)
    return [_row(alphas, gs, E, ell, n) for n in range(N + len(alphas) - 1)]


def _apply(rows: Sequence[BandRow], hs: Sequence) -> list:
    N = len(hs)

    def h(j):
        return hs[j] if 0 <= j < N else 0

    out = []
    for r in rows:
        acc = r.B * h(r.n) + r.C * h(r.n + 1)
        for k, a in enumerate(r.A, start=1):
            acc += a * h(r.n - k)
        out.append(acc)
    return out


def residual(spec: PotentialSpec, ell, N: int, cand: QESCandidate) -> list:
    """Row sums of the N+q termination conditions; zero for a true solution.

    The candidate's E and Gs override those stored in ``spec``.
    """
    if len(cand.hs) != N:
        raise ValueError("candidate must carry N Taylor coefficients")
    rows = _rows_for(spec.alphas, ell, N, cand.E, cand.Gs)
    hs = cand.hs
    if rows and not isinstance(rows[0].B, (int, Fraction)):
        hs = [_mpf(h) for h in hs]
    return _apply(rows, hs)


def last_row_G(alphas, ell, N: int):
    """G_{q-1} forced by the final row A^(q)_{N+q-1} h_{N-1} = 0."""
    q = len(alphas) - 1
    n = N + q - 1
    return -alphas[q] * (4 * n + 2 * ell + 3 - 2 * q)


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _scaled_norm(rows, hs, res):
    """Max |row sum| relative to the largest term magnitude in that row set."""
    scale = mpmath.mpf(1)
    N = len(hs)
    for r in rows:
        for j, coef in ((r.n, r.B), (r.n + 1, r.C)):
            if 0 <= j < N:
                scale = max(scale, abs(coef * hs[j]))
        for k, a in enumerate(r.A, start=1):
            if 0 <= r.n - k < N:
                scale = max(scale, abs(a * hs[r.n - k]))
    return max(abs(x) for x in res) / scale


def newton_solve(
    alphas: Sequence,
    ell,
    N: int,
    seed: QESCandidate,
    dps: int = DEFAULT_DPS,
    tol=NEWTON_TOL,
    max_iter: int = MAX_ITER,
) -> QESCandidate:
    """Newton iteration on (E, G_0..G_{q-1}, h_1..h_{N-1}) with h_0 = 1.

    The residual is bilinear in the unknowns, so the Jacobian is assembled
    analytically.  Steps are halved while the residual norm grows.  The
    returned candidate carries its relative residual max-norm.
    """
    q = len(alphas) - 1
    with mpmath.workdps(dps):
        al = [_mpf(a) for a in alphas]
        ell = _mpf(ell)
        x = [_mpf(seed.E)] + [_mpf(G) for G in seed.Gs] + [_mpf(h) for h in seed.hs[1:]]
        nunk = 1 + q + (N - 1)

        def unpack(x):
            return x[0], x[1:1 + q], [mpmath.mpf(1)] + list(x[1 + q:])

        def evaluate(x):
            E, Gs, hs = unpack(x)
            rows = _rows_for(al, ell, N, E, Gs)
            res = _apply(rows, hs)
            return rows, hs, res, _scaled_norm(rows, hs, res)

        rows, hs, res, norm = evaluate(x)
        for _ in range(max_iter):
            if norm < tol:
                break
            J = mpmath.zeros(N + q, nunk)
            for i, r in enumerate(rows):
                n = r.n
                J[i, 0] = hs[n] if n < N else 0
                for k in range(1, q + 1):
                    if 0 <= n - k < N:
                        J[i, k] = -hs[n - k]
                for j in range(1, N):
                    col = q + j
                    if j == n:
                        J[i, col] += r.B
                    elif j == n + 1:
                        J[i, col] += r.C
                    elif 1 <= n - j <= q:
                        J[i, col] += r.A[n - j - 1]
            try:
                dx = mpmath.lu_solve(J, mpmath.matrix([-v for v in res]))
            except ZeroDivisionError as exc:
                raise DegenerateRootError("degenerate root, refine seed") from exc
            step = mpmath.mpf(1)
            while True:
                xn = [a + step * d for a, d in zip(x, dx)]
                rows_n, hs_n, res_n, norm_n = evaluate(xn)
                if norm_n < norm or step < mpmath.mpf(2) ** -30:
                    break
                step /= 2
            x, rows, hs, res, norm = xn, rows_n, hs_n, res_n, norm_n
        if not norm < tol:
            raise DivergedError("diverged")
        E, Gs, hs = unpack(x)
        return QESCandidate(E=E, Gs=tuple(Gs), hs=tuple(hs), kind="mp", residual_norm=norm)


def harmonic_solution(alpha0, ell, N: int) -> QESCandidate:
    """Exact q = 0 solution: E = alpha_0 (4(N-1) + 2 ell + 3), h by forward recursion."""
    E = alpha0 * (4 * (N - 1) + 2 * ell + 3)
    hs = [Fraction(1)]
    for n in range(N - 1):
        C = (2 * n + 2) * (2 * n + 2 * ell + 3)
        B = E - alpha0 * (4 * n + 2 * ell + 3)
        hs.append(-B * hs[-1] / C)
    return QESCandidate(E=E, Gs=(), hs=tuple(hs))


def quartic_doublet(alphas, ell, sign: int = 1, dps: int = DEFAULT_DPS) -> QESCandidate:
    """Closed-form q = 1, N = 2 pair (mpmath).

    G_0 = -alpha_1 (9 + 2 ell) from the last row, A_1 = 4 alpha_1, and
    B_0 B_1 = C_0 A_1 gives E = alpha_0(2 ell+5) +- 2 sqrt(alpha_0^2 + 2 alpha_1(2 ell+3)).
    """
    with mpmath.workdps(dps):
        a0, a1 = (_mpf(a) for a in alphas)
        ell = _mpf(ell)
        E = a0 * (2 * ell + 5) + sign * 2 * mpmath.sqrt(a0 * a0 + 2 * a1 * (2 * ell + 3))
        G0 = -a1 * (9 + 2 * ell)
        C0 = 2 * (2 * ell + 3)
        B0 = E - a0 * (2 * ell + 3)
        return QESCandidate(E=E, Gs=(G0,), hs=(mpmath.mpf(1), -B0 / C0), kind="mp")


def with_residual(cand: QESCandidate, spec: PotentialSpec, ell, N: int, dps: int = DEFAULT_DPS) -> QESCandidate:
    with mpmath.workdps(dps):
        return _with_residual(cand, spec, ell, N)


def _with_residual(cand, spec, ell, N):
    rows = _rows_for(spec.alphas, ell, N, cand.E, cand.Gs)
    res = _apply(rows, [_mpf(h) for h in cand.hs])
    return replace(cand, residual_norm=_scaled_norm(rows, [_mpf(h) for h in cand.hs], res))
