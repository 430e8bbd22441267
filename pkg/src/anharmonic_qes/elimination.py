"""Exact solution of the trapezoidal system.

Forward substitution expresses p_1..p_{N-1} through s_1..s_q and leaves q
residual polynomials F_1..F_q.  Iterated resultants reduce them to one
univariate eliminant; every root of that eliminant is then checked for
extendability to a full solution by numeric back-substitution through the
recorded elimination levels, and the factors carrying non-extendable roots
are divided out exactly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .algebra import MPoly, Surd, UPoly, exact_div, resultant, simplest_between, squarefree_part, sturm_isolate
from .algebra.sturm import DEFAULT_WIDTH
from .errors import BudgetExceededError, EliminationError, NotADivisorError
from .large_d import SpectrumPoint, TrapSystem, build_trap, s_orbit

log = logging.getLogger(__name__)

DEFAULT_DPS = 64


@dataclass(frozen=True)
class Budget:
    """Caps on intermediate polynomial size during elimination."""

    max_degree: int = 2000
    max_terms: int = 2_000_000

    def __post_init__(self):
        if self.max_degree < 1 or self.max_terms < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class ResidualSystem:
    """p_0..p_{N-1} (with p_0 = 1) and the residual polynomials F_1..F_q."""

    q: int
    N: int
    gens: tuple
    ps: tuple
    F: tuple


@dataclass(frozen=True)
class SecularPolynomial:
    """Squarefree primitive eliminant P in one variable.

    When P(s) = s^e F(s^(q+1)) the pair (e, F) is kept as the z-form.
    ``raw`` is the resultant output before spurious factors were removed
    and ``removed`` the factor that was divided out (1 if none).
    """

    variable: str
    P: UPoly
    q: int
    e: int | None = None
    F: UPoly | None = None
    raw: UPoly | None = None
    removed: UPoly | None = None

    def __post_init__(self):
        if self.e is None and self.F is None:
            zs = z_structure(self.P, self.q)
            if zs is not None:
                object.__setattr__(self, "e", zs[0])
                object.__setattr__(self, "F", zs[1])

    @property
    def degree(self) -> int:
        return self.P.degree

    @property
    def has_z_form(self) -> bool:
        return self.F is not None

    def expand_z_form(self) -> UPoly:
        """s^e F(s^(q+1)) rebuilt from the z-form."""
        if self.F is None:
            raise ValueError("no z-form")
        return UPoly.monomial(self.e, 1, self.P.var) * self.F.with_var(self.P.var).compose_power(self.q + 1)

    def text(self) -> str:
        return self.P.to_text()

    def z_text(self) -> str | None:
        if self.F is None:
            return None
        z = self.F.with_var("z").to_text()
        if self.F.degree == 0:
            # no z dependence: the eliminant is a bare power of the variable
            return self.P.to_text()
        pre = f"{self.P.var}*" if self.e else ""
        return f"{pre}({z}) at z = {self.P.var}^{self.q + 1}"


@dataclass(frozen=True)
class _Level:
    var: int
    polys: tuple


@dataclass(frozen=True)
class _Chain:
    """Recorded elimination: input polynomials, one level per eliminated variable."""

    gens: tuple
    polys: tuple
    keep: int
    order: tuple
    levels: tuple
    final: UPoly


# -- forward substitution ---------------------------------------------------

def forward_substitute(trap: TrapSystem) -> ResidualSystem:
    """Solve rows 0..N-2 for p_1..p_{N-1} with p_0 = 1; the last q rows give F."""
    q, N = trap.q, trap.N
    gens = tuple(f"s{k}" for k in range(1, q + 1))
    M = trap.symbolic(gens)
    ps = [MPoly.const(gens, 1)]
    for n in range(N - 1):
        acc = MPoly(gens)
        for j in range(n + 1):
            if not M[n][j].is_zero():
                acc = acc + M[n][j] * ps[j]
        ps.append(acc * Fraction(-1, n + 1))
    F = []
    for n in range(N - 1, N + q - 1):
        acc = MPoly(gens)
        for j in range(N):
            if not M[n][j].is_zero():
                acc = acc + M[n][j] * ps[j]
        F.append(acc)
    return ResidualSystem(q, N, gens, tuple(ps), tuple(F))


@lru_cache(maxsize=None)
def residual_system(q: int, N: int) -> ResidualSystem:
    return forward_substitute(build_trap(q, N))


# -- z structure ---------------------------------------------------------------

def z_structure(P: UPoly, q: int) -> tuple[int, UPoly] | None:
    """(e, F) with P(s) = s^e F(s^(q+1)) and e in {0, 1}, or None."""
    m = q + 1
    degs = [d for d, c in enumerate(P.coeffs) if c]
    if not degs:
        return None
    for e in (0, 1):
        if all(d % m == e for d in degs):
            coeffs = [Fraction(0)] * ((degs[-1] - e) // m + 1)
            for d in degs:
                coeffs[(d - e) // m] = P.coeffs[d]
            return e, UPoly(coeffs, "z")
    return None


# -- elimination -------------------------------------------------------------------

def _check_budget(P: MPoly, budget: Budget, var_name: str, polys) -> None:
    deg = max((P.degree(i) for i in range(len(P.gens))), default=0)
    if deg > budget.max_degree or P.nterms() > budget.max_terms:
        raise BudgetExceededError(
            "elimination budget exhausted",
            partial={
                "eliminating": var_name,
                "degree": deg,
                "terms": P.nterms(),
                "pending": [(Q.total_degree(), Q.nterms()) for Q in polys],
            },
        )


def _run_chain(polys: Sequence[MPoly], gens: tuple, keep: int, order: Sequence[int], budget: Budget) -> _Chain:
    inputs = tuple(polys)
    work = []
    for P in polys:
        if P.is_zero():
            continue
        if P.is_const():
            return _Chain(gens, inputs, keep, tuple(order), (), UPoly([1], gens[keep]))
        work.append(squarefree_part(P))
    levels = []
    for v in order:
        levels.append(_Level(v, tuple(work)))
        cand = sorted((P for P in work if P.degree(v) > 0), key=lambda P: (P.degree(v), P.nterms()))
        rest = [P for P in work if P.degree(v) == 0]
        if not cand:
            raise EliminationError("system is not zero-dimensional")
        pivot = cand[0]
        new = []
        for P in cand[1:]:
            R = resultant(pivot, P, v)
            if R.is_zero():
                raise EliminationError("non-generic elimination order, permute variables")
            _check_budget(R, budget, gens[v], work)
            if R.is_const():
                # no common root anywhere: the system is inconsistent
                return _Chain(gens, inputs, keep, tuple(order), tuple(levels), UPoly([1], gens[keep]))
            new.append(squarefree_part(R))
        work = list(dict.fromkeys(rest + new))
        log.debug("eliminated %s: %s", gens[v], [(P.total_degree(), P.nterms()) for P in work])
    g = None
    for P in work:
        u = P.to_upoly(keep)
        g = u if g is None else g.gcd(u)
    if g is None:
        raise EliminationError("system is not zero-dimensional")
    return _Chain(gens, inputs, keep, tuple(order), tuple(levels), g.primitive().squarefree_part().primitive())


def _chain_for(polys: Sequence[MPoly], gens: tuple, keep: int, others: Sequence[int], budget: Budget) -> _Chain:
    """Eliminate ``others`` (highest index first), permuting on degenerate resultants."""
    default = tuple(sorted(others, reverse=True))
    tried = [default] + [o for o in itertools.permutations(default) if o != default]
    last = None
    for order in tried:
        try:
            return _run_chain(polys, gens, keep, order, budget)
        except BudgetExceededError:
            raise
        except EliminationError as exc:
            if "permute" not in str(exc):
                raise
            last = exc
    raise EliminationError("non-generic elimination order, permute variables") from last


@lru_cache(maxsize=None)
def _chain(q: int, N: int, keep: int, budget: Budget) -> _Chain:
    system = residual_system(q, N)
    return _chain_for(system.F, system.gens, keep, [i for i in range(q) if i != keep], budget)


# -- numeric back-substitution --------------------------------------------------

def _to_mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _eval_coeffs(P: MPoly, v: int, values: dict) -> tuple[list, list]:
    """Numeric coefficients of P in generator v, with their term magnitudes."""
    n = len(P.gens)
    point = [values.get(i, 0) for i in range(n)]
    out, mags = [], []
    for c in P.coeffs_in(v):
        out.append(c.evaluate(point, _to_mp) if c.terms else mpmath.mpf(0))
        mags.append(c.magnitude(point, abs, _to_mp) if c.terms else mpmath.mpf(0))
    return out, mags


def _poly_small(cs, mags, r, tol) -> bool:
    """|P(r)| small against the term magnitudes (which include cancelled parts)."""
    val = mpmath.mpf(0)
    mag = mpmath.mpf(0)
    for c in reversed(cs):
        val = val * r + c
    for m in reversed(mags):
        mag = mag * abs(r) + m
    return abs(val) <= tol * mag


def _roots(cs: list, dps: int) -> list:
    """Roots of sum cs[i] x^i (cs[-1] nonzero)."""
    if len(cs) == 2:
        return [-cs[0] / cs[1]]
    hi = list(reversed(cs))
    steps, extra = 100, dps
    for _ in range(6):
        try:
            return list(mpmath.polyroots(hi, maxsteps=steps, extraprec=extra))
        except mpmath.libmp.NoConvergence:
            steps, extra = steps * 3, extra * 2
    raise EliminationError("numeric root finding failed")


def _dedupe(xs, tol):
    out = []
    for x in xs:
        if all(abs(x - y) > tol * (1 + abs(y)) for y in out):
            out.append(x)
    return out


class _Undetermined(Exception):
    pass


def _extend(chain: _Chain, values: dict, idx: int, tol, dps: int):
    """Yield every assignment extending ``values`` through levels idx..0."""
    if idx < 0:
        yield dict(values)
        return
    level = chain.levels[idx]
    v = level.var
    numeric = []
    for P in level.polys:
        if P.degree(v) == 0:
            continue
        cs, mags = _eval_coeffs(P, v, values)
        live = [abs(c) > tol * m for c, m in zip(cs, mags)]
        if not any(live):
            continue
        top = max(i for i, ok in enumerate(live) if ok)
        numeric.append((cs[: top + 1], mags))
    if not numeric:
        raise _Undetermined(chain.gens[v])
    numeric.sort(key=lambda t: len(t[0]))
    pivot = numeric[0][0]
    if len(pivot) == 1:
        return
    for r in _dedupe(_roots(pivot, dps), mpmath.sqrt(tol)):
        if all(_poly_small(cs, mags, r, mpmath.sqrt(tol)) for cs, mags in numeric[1:]):
            values[v] = r
            yield from _extend(chain, values, idx - 1, tol, dps)
            del values[v]


def _residual_norm(polys: Sequence[MPoly], point) -> object:
    worst = mpmath.mpf(0)
    for P in polys:
        val = P.evaluate(point, _to_mp)
        mag = P.magnitude(point, abs, _to_mp)
        if mag:
            worst = max(worst, abs(val) / mag)
    return worst


def _polish(polys: Sequence[MPoly], point: list, free: Sequence[int], iters: int = 60) -> list:
    """Newton (least squares when overdetermined) on ``polys`` in the ``free`` coordinates."""
    polys = [P for P in polys if not P.is_zero()]
    free = list(free)
    x = list(point)
    if not free or not polys:
        return x
    J = [[P.derivative(k) for k in free] for P in polys]
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    for _ in range(iters):
        res = [P.evaluate(x, _to_mp) for P in polys]
        if all(abs(r) == 0 for r in res):
            break
        A = mpmath.matrix(len(polys), len(free))
        for i in range(len(polys)):
            for c in range(len(free)):
                A[i, c] = J[i][c].evaluate(x, _to_mp)
        try:
            dx = mpmath.lu_solve(A, mpmath.matrix([-r for r in res]))
        except ZeroDivisionError:
            break
        for c, k in enumerate(free):
            x[k] = x[k] + dx[c]
        if max(abs(d) for d in dx) <= eps * (1 + max(abs(t) for t in x)):
            break
    return x


def _tuples_from(chain: _Chain, value, dps: int, exact=None, budget: Budget | None = None) -> list[list]:
    """Full solutions with the kept coordinate equal to ``value``.

    When back-substitution degenerates at an exact rational ``exact`` the
    input polynomials are specialised exactly and eliminated again.
    """
    n = len(chain.gens)
    tol = mpmath.mpf(10) ** (-(dps // 3))
    free = list(chain.order)
    try:
        found = list(_extend(chain, {chain.keep: value}, len(chain.levels) - 1, tol, dps))
    except _Undetermined:
        if exact is None:
            raise EliminationError("back-substitution left a variable undetermined")
        return _tuples_exact(chain, exact, dps, budget or Budget())
    out = []
    for vals in found:
        point = [vals.get(i, mpmath.mpf(0)) for i in range(n)]
        point = _polish(chain.polys, point, free)
        if _residual_norm(chain.polys, point) <= mpmath.mpf(10) ** (-(dps // 2)):
            out.append(point)
    return out


def _tuples_exact(chain: _Chain, c: Fraction, dps: int, budget: Budget) -> list[list]:
    reduced = [P.subs({chain.keep: c}) for P in chain.polys]
    reduced = [P for P in reduced if not P.is_zero()]
    if any(P.is_const() for P in reduced):
        return []
    rest = sorted(set(i for P in reduced for i in P.variables_used()))
    base = [mpmath.mpf(0)] * len(chain.gens)
    base[chain.keep] = _to_mp(c)
    if not rest:
        return [base]
    sub = _chain_for(reduced, chain.gens, rest[0], rest[1:], budget)
    if sub.final.degree <= 0:
        return []
    out = []
    for r in _roots([_to_mp(a) for a in sub.final.coeffs], dps):
        ex = None
        if abs(mpmath.im(r)) == 0 or abs(mpmath.im(r)) < mpmath.mpf(10) ** (-(dps // 2)):
            cand = simplest_between(*_bracket(mpmath.re(r), dps))
            if sub.final.sign_at(cand) == 0:
                ex = cand
        for pt in _tuples_from(sub, r, dps, ex, budget):
            pt[chain.keep] = base[chain.keep]
            out.append(pt)
    return out


def _bracket(x, dps: int) -> tuple[Fraction, Fraction]:
    w = mpmath.mpf(10) ** (-(dps // 3))
    return _mp_to_frac(x - w), _mp_to_frac(x + w)


def _mp_to_frac(x) -> Fraction:
    m, e = mpmath.mpf(x).man_exp
    return Fraction(int(m)) * Fraction(2) ** int(e)


def _extendable(chain: _Chain, value, dps: int, exact=None) -> bool:
    if not chain.levels:
        return True
    return bool(_tuples_from(chain, value, dps, exact))


# -- spurious-factor removal ---------------------------------------------------------

def _digits(F: UPoly) -> int:
    return max(len(str(abs(c))) for c in F.integer_coeffs())


def _factor_from_roots(F: UPoly, roots: list, dps: int) -> UPoly:
    """Integer polynomial lc(F) prod (x - r), checked to divide F exactly."""
    lc = F.integer_coeffs()[-1]
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpc(lc)]
        for r in roots:
            nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] += c
                nxt[i] -= c * r
            coeffs = nxt
        ints = []
        for c in coeffs:
            near = mpmath.nint(c.real)
            if abs(c.imag) > 0.01 or abs(c.real - near) > 0.01:
                raise NotADivisorError("not a divisor")
            ints.append(int(near))
    G = UPoly(ints, F.var).primitive()
    exact_div(F, G)
    return G


def _split(F: UPoly, good: list, bad: list, dps: int) -> UPoly:
    """The factor of F whose roots are ``good``."""
    if not bad:
        return F.primitive()
    if not good:
        return UPoly([1], F.var)
    small, is_bad = (bad, True) if len(bad) <= len(good) else (good, False)
    G = _factor_from_roots(F, small, dps)
    return exact_div(F, G).primitive() if is_bad else G


def _remove_spurious(chain: _Chain, raw: UPoly, q: int, dps: int) -> tuple[UPoly, UPoly]:
    """(clean eliminant, removed factor)."""
    one = UPoly([1], raw.var)
    if raw.degree <= 0 or not chain.levels:
        return raw, one
    zs = z_structure(raw, q)
    base, e = (zs[1], zs[0]) if zs is not None else (raw, 0)
    work = max(dps, 2 * (_digits(base) + base.degree) + 40)
    for attempt in range(3):
        try:
            with mpmath.workdps(work):
                cs = [_to_mp(c) for c in base.coeffs]
                roots = _roots(cs, work) if base.degree > 0 else []
                good, bad = [], []
                for r in roots:
                    s = s_orbit(r, q, work)[0] if zs is not None else r
                    (good if _extendable(chain, s, work) else bad).append(r)
                keep_zero = e == 1 and _extendable(chain, mpmath.mpf(0), work, Fraction(0))
                clean_base = _split(base, good, bad, work)
        except NotADivisorError:
            work *= 2
            continue
        break
    else:
        raise EliminationError("spurious factor removal failed")
    if zs is not None:
        clean = clean_base.with_var(raw.var).compose_power(q + 1)
        if keep_zero:
            clean = clean * UPoly.monomial(1, 1, raw.var)
    else:
        clean = clean_base
    clean = clean.primitive()
    return clean, exact_div(raw, clean).primitive()


@lru_cache(maxsize=None)
def _secular(q: int, N: int, keep: int, budget: Budget, verify: bool, dps: int) -> SecularPolynomial:
    ch = _chain(q, N, keep, budget)
    raw = ch.final.with_var("s")
    if verify:
        clean, removed = _remove_spurious(ch, raw, q, dps)
    else:
        clean, removed = raw, UPoly([1], "s")
    return SecularPolynomial(ch.gens[keep], clean, q, raw=raw, removed=removed)


def eliminate(
    system: ResidualSystem,
    keep: int | str = 0,
    budget: Budget | None = None,
    verify: bool = True,
    dps: int = DEFAULT_DPS,
) -> SecularPolynomial:
    """Univariate eliminant of F_1..F_q in the kept variable (index or name).

    Variables are eliminated from the highest index down; the pivot at each
    step is the polynomial of lowest positive degree in the variable.  With
    ``verify`` every root is back-substituted and non-extendable factors
    are divided out.  The printed variable is always ``s``.
    """
    if isinstance(keep, str):
        keep = system.gens.index(keep)
    return _secular(system.q, system.N, keep, budget or Budget(), verify, dps)


def eliminant(q: int, N: int, keep: int = 0, budget: Budget | None = None, dps: int = DEFAULT_DPS) -> SecularPolynomial:
    return eliminate(residual_system(q, N), keep, budget, dps=dps)


# -- real tuples ----------------------------------------------------------------------

def _recognise(x) -> Fraction | Surd | None:
    """x as a rational or an element of Q(sqrt 5), if it looks like one."""
    if abs(x) < mpmath.mpf(10) ** (-(mpmath.mp.dps // 2)):
        return Fraction(0)
    rel = mpmath.pslq([x, 1, mpmath.sqrt(5)], maxcoeff=10**6, maxsteps=10**5)
    if rel is None or rel[0] == 0:
        return None
    a, b, c = rel
    if c == 0:
        return Fraction(-b, a)
    return Surd(Fraction(-b, a), Fraction(-c, a))


def verify_tuple(q: int, N: int, s: Sequence) -> bool:
    """Exact substitution of (s_1..s_q) into F_1..F_q."""
    if len(s) != q:
        raise ValueError("need q components")
    system = residual_system(q, N)
    if any(isinstance(x, Surd) for x in s):
        point = [x if isinstance(x, Surd) else Surd(x) for x in s]
        return all(Fi.evaluate(point, Surd) == 0 for Fi in system.F)
    point = [Fraction(x) for x in s]
    return all(Fi.evaluate(point) == 0 for Fi in system.F)


def solve_tuples(
    q: int,
    N: int,
    width: Fraction = DEFAULT_WIDTH,
    dps: int = DEFAULT_DPS,
    budget: Budget | None = None,
) -> list[SpectrumPoint]:
    """All real solutions (s_1..s_q), sorted by s_1 then the other components.

    Real roots of the s_1 eliminant are isolated exactly, then extended
    numerically through the elimination levels and polished by Newton on
    F.  Components recognised as rationals or surds are confirmed by
    :func:`verify_tuple` and attached as ``exact``.
    """
    budget = budget or Budget()
    sec = _secular(q, N, 0, budget, True, dps)
    ch = _chain(q, N, 0, budget)
    points = []
    with mpmath.workdps(dps):
        tol = mpmath.mpf(10) ** (-(dps // 3))
        for iv in sturm_isolate(sec.P, width):
            exact = iv.exact_rational(width)
            x = _to_mp(exact) if exact is not None else iv.to_mpf(dps)
            cands = _tuples_from(ch, mpmath.mpf(x), dps, exact, budget) if ch.levels else [[mpmath.mpf(x)]]
            for pt in cands:
                if all(abs(mpmath.im(t)) <= tol * (1 + abs(t)) for t in pt):
                    pt = [mpmath.re(t) for t in pt]
                    if all(max(abs(a - b) for a, b in zip(pt, o.s)) > tol * (1 + max(abs(t) for t in pt)) for o in points):
                        res = _residual_norm(ch.polys, pt)
                        ex = tuple(_recognise(t) for t in pt)
                        if any(c is None for c in ex) or not verify_tuple(q, N, ex):
                            ex = None
                        points.append(SpectrumPoint(tuple(pt), ex, res))
    points.sort(key=lambda p: tuple(p.s))
    return points
