"""Cross-checks between the closed forms, the eliminants and finite D."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from types import SimpleNamespace
from typing import Sequence

import mpmath

from . import catalog
from .algebra import Surd, UPoly, exact_div, sturm_isolate, surd_min_poly
from .algebra.sturm import DEFAULT_WIDTH
from .elimination import Budget, eliminant, residual_system, solve_tuples
from .errors import DivergedError, DegenerateRootError, NotADivisorError
from .large_d import g_from_s, s_from_g, scaling
from .model import PotentialSpec, alpha_to_g, convolution, ell_from_D
from .recurrence import QESCandidate, last_row_G, newton_solve

DEFAULT_DPS = 64
DEFAULT_GRID = (10**4, 10**5, 10**6, 10**7, 10**8)


def _text(v) -> str:
    return str(v)


@dataclass
class CrossValidationReport:
    q: int
    N: int
    eliminant: str
    predicted: list
    computed: list
    extra: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    divisibility: dict = field(default_factory=dict)
    note: str = ""

    @property
    def match(self) -> bool:
        return not self.extra and not self.missing and all(self.divisibility.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["match"] = self.match
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _interval_text(iv, digits: int = 20) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(iv.to_mpf(digits + 10), digits)


def _is_root(P: UPoly, v) -> bool:
    if isinstance(v, Surd) and not v.is_rational():
        try:
            exact_div(P, surd_min_poly(SimpleNamespace(P=2 * v.a, Q=abs(2 * v.b)), P.var))
            return True
        except NotADivisorError:
            return False
    return P.sign_at(Fraction(v.a) if isinstance(v, Surd) else Fraction(v)) == 0


def _match_sets(intervals, predicted, P: UPoly):
    """Exact containment of predicted values in isolating intervals."""
    extra, missing = [], []
    used = set()
    for v in predicted:
        hits = [i for i, iv in enumerate(intervals) if iv.contains(v)]
        if len(hits) != 1 or hits[0] in used or not _is_root(P, v):
            missing.append(_text(v))
        else:
            used.add(hits[0])
    for i, iv in enumerate(intervals):
        if i not in used:
            extra.append(_interval_text(iv))
    return extra, missing


def cross_validate(
    q: int,
    N: int,
    width: Fraction = DEFAULT_WIDTH,
    dps: int = DEFAULT_DPS,
    budget: Budget | None = None,
    inject_error: bool = False,
) -> CrossValidationReport:
    """Compare the real roots of the s_1 eliminant with the closed forms.

    Every predicted value must lie in exactly one isolating interval and be
    an exact root (surds via division by their minimal polynomial); every
    interval must be claimed.  For q = 4 the linear and quadratic factors
    of each catalog entry are also divided out of the eliminant exactly.
    ``inject_error`` perturbs one eliminant coefficient first (a sabotage
    hook for testing that mismatches are caught).
    """
    sec = eliminant(q, N, budget=budget, dps=dps)
    P = sec.P
    if inject_error:
        cs = list(P.coeffs)
        cs[0] += 1
        P = UPoly(cs, P.var)
    intervals = sturm_isolate(P, width)
    computed = [_interval_text(iv) for iv in intervals]
    note = ""
    if q == 3:
        # the closed form is for the middle component; s_1 comes from the tables
        s2 = catalog.spectrum_q3_s2(N)
        got = sorted({t.exact[1] for t in solve_tuples(q, N, width, dps, budget) if t.exact}, reverse=True)
        predicted_s1 = catalog.predicted_s1(q, N)
        extra, missing = [], []
        if set(got) != set(s2):
            extra += [f"s2={x}" for x in got if x not in s2]
            missing += [f"s2={x}" for x in s2 if x not in got]
        if predicted_s1 is not None:
            e2, m2 = _match_sets(intervals, predicted_s1, P)
            extra += e2
            missing += m2
        else:
            note = "no tabulated s1 values; only s2 compared"
        predicted = [f"s2={x}" for x in s2] + [str(x) for x in (predicted_s1 or [])]
        return CrossValidationReport(q, N, P.to_text(), predicted, computed, extra, missing, {}, note)
    predicted = catalog.predicted_s1(q, N)
    extra, missing = _match_sets(intervals, predicted, P)
    div = {}
    if q == 4:
        for e in catalog.spectrum_q4(N):
            f = UPoly([Fraction(-e.P, 2), 1], P.var) if e.Q == 0 else surd_min_poly(e, P.var)
            try:
                exact_div(P, f)
                div[f.primitive().to_text()] = True
            except NotADivisorError:
                div[f.primitive().to_text()] = False
    return CrossValidationReport(q, N, P.to_text(), [_text(v) for v in predicted], computed, extra, missing, div, note)


# -- finite-D continuation ----------------------------------------------------------

@dataclass
class ContinuationReport:
    q: int
    N: int
    branch: str
    target: list
    D: list = field(default_factory=list)
    s: list = field(default_factory=list)
    deviation: list = field(default_factory=list)
    truncated: bool = False
    message: str = ""

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.deviation, self.deviation[1:]))

    def to_json(self) -> str:
        doc = asdict(self)
        doc["monotone"] = self.monotone
        return json.dumps(doc, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["D"] + [f"s{k}" for k in range(1, self.q + 1)] + ["deviation"])
        for D, s, dev in zip(self.D, self.s, self.deviation):
            w.writerow([D] + list(s) + [dev])
        return buf.getvalue()


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, Surd):
        return x.to_mpf()
    return mpmath.mpf(x)


def branch_tuple(q: int, N: int, branch, dps: int = DEFAULT_DPS) -> tuple:
    """Full real trap solution whose s_1 is closest to ``branch``."""
    if q == 1:
        return (_mpf(branch),)
    pts = solve_tuples(q, N, dps=dps)
    if not pts:
        raise ValueError("no real tuples")
    with mpmath.workdps(dps):
        b = _mpf(branch)
        best = min(pts, key=lambda p: abs(p.s[0] - b))
    return tuple(best.s)


def seed_candidate(q: int, N: int, D, alphas, s: Sequence, dps: int = DEFAULT_DPS) -> QESCandidate:
    """Large-D seed: couplings from g_from_s and h_n = p_n(s) / mu^n."""
    with mpmath.workdps(dps):
        al = [_mpf(a) for a in alphas]
        ell = _mpf(ell_from_D(D))
        E, glow = g_from_s(D, al, list(s), dps)
        Gs = [glow[k] - convolution(al, k) for k in range(q - 1)] + [last_row_G(al, ell, N)]
        sc = scaling(D, q, alphas[q], dps)
        mu = _mpf(sc.mu)
        ps = residual_system(q, N).ps
        hs = [p.evaluate(list(s), _mpf) / mu**n for n, p in enumerate(ps)]
        hs = [h / hs[0] for h in hs]
        return QESCandidate(E=E, Gs=tuple(Gs), hs=tuple(hs), kind="mp")


def continuation(
    q: int,
    N: int,
    alphas: Sequence,
    branch,
    D_grid: Sequence = DEFAULT_GRID,
    dps: int = DEFAULT_DPS,
) -> ContinuationReport:
    """Newton-solve the finite-D recurrence along ``D_grid`` from the large-D seed.

    At each D the solution is mapped back to (s_1..s_q); the deviation is the
    largest component distance to the limiting tuple.
    """
    if q < 1:
        raise ValueError("continuation needs q >= 1")
    if any(b <= a for a, b in zip(D_grid, D_grid[1:])):
        raise ValueError("D grid must be strictly increasing")
    target = branch_tuple(q, N, branch, dps)
    rep = ContinuationReport(q, N, str(branch), [mpmath.nstr(t, 20) for t in target])
    with mpmath.workdps(dps):
        al = [_mpf(a) for a in alphas]
        for D in D_grid:
            seed = seed_candidate(q, N, D, alphas, target, dps)
            try:
                sol = newton_solve(al, ell_from_D(D), N, seed, dps=dps)
            except (DivergedError, DegenerateRootError) as exc:
                rep.truncated = True
                rep.message = f"D={D}: {exc}"
                break
            gs_low = [sol.Gs[k] + convolution(al, k) for k in range(q - 1)]
            s = s_from_g(D, al, sol.E, gs_low, dps)
            dev = max(abs(a - b) for a, b in zip(s, target))
            rep.D.append(D)
            rep.s.append([mpmath.nstr(x, 20) for x in s])
            rep.deviation.append(float(dev))
    return rep


# -- Schroedinger residual ---------------------------------------------------------

def default_samples(spec: PotentialSpec, E) -> list:
    """Geometric grid 2^-3..2^3 scaled by (|E| / alpha_q^2)^(1/(4q+2))."""
    aq = _mpf(spec.alphas[-1])
    E = abs(_mpf(E))
    scale = (E / (aq * aq)) ** (mpmath.mpf(1) / (4 * spec.q + 2)) if E else mpmath.mpf(1)
    return [scale * mpmath.mpf(2) ** k for k in range(-3, 4)]


def schrodinger_residual(spec: PotentialSpec, ell, cand: QESCandidate, r_samples=None, dps: int = DEFAULT_DPS):
    """max over samples of |-psi'' + (l(l+1)/r^2 + V - E) psi| / max term.

    psi = u exp(-B) with u = sum h_n r^(2n+l+1); psi'' is assembled from the
    exact derivatives u'' - 2 u' B' + u (B'^2 - B''), and the common factor
    exp(-B) is dropped.  The couplings are the candidate's.
    """
    with mpmath.workdps(dps):
        al = [_mpf(a) for a in spec.alphas]
        l = _mpf(ell)
        E = _mpf(cand.E)
        gs = alpha_to_g(al, [_mpf(G) for G in cand.Gs])
        hs = [_mpf(h) for h in cand.hs]
        samples = r_samples if r_samples is not None else default_samples(spec, E)
        worst = mpmath.mpf(0)
        for r in samples:
            r = _mpf(r)
            u = du = d2u = mpmath.mpf(0)
            for n, h in enumerate(hs):
                a = 2 * n + l + 1
                u += h * r**a
                du += h * a * r ** (a - 1)
                d2u += h * a * (a - 1) * r ** (a - 2)
            dB = sum(a * r ** (2 * k + 1) for k, a in enumerate(al))
            d2B = sum(a * (2 * k + 1) * r ** (2 * k) for k, a in enumerate(al))
            psi2 = d2u - 2 * du * dB + u * (dB * dB - d2B)
            V = sum(g * r ** (2 * m + 2) for m, g in enumerate(gs))
            cent = l * (l + 1) / (r * r) * u
            # pieces of psi'' count separately so that a node of psi is not a 0/0
            terms = [d2u, 2 * du * dB, u * dB * dB, u * d2B, cent, V * u, E * u]
            res = -psi2 + cent + V * u - E * u
            scale = max(abs(t) for t in terms)
            if scale:
                worst = max(worst, abs(res) / scale)
        return worst
