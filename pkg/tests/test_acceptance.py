"""Acceptance suite: one PASS/FAIL line per criterion, with wall time."""

import os
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import mpmath
import pytest

from anharmonic_qes import catalog
from anharmonic_qes.algebra import Surd, UPoly, exact_div, sturm_isolate
from anharmonic_qes.elimination import Budget, eliminant, solve_tuples, verify_tuple, z_structure
from anharmonic_qes.errors import BudgetExceededError
from anharmonic_qes.large_d import build_trap, g_from_s, s_from_g
from anharmonic_qes.model import PotentialSpec, alpha_to_g, g_to_alpha
from anharmonic_qes.recurrence import QESCandidate, harmonic_solution, quartic_doublet
from anharmonic_qes.verifier import continuation, schrodinger_residual

from oracles import bareiss_det

s = UPoly([0, 1])
ONE = Fraction(1)


@contextmanager
def criterion(capsys, number, title, limit):
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - t0
        assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f} s)")


def real_roots(P):
    """Exact real roots when all are rational; surds are matched separately."""
    return [iv.exact_rational() for iv in sturm_isolate(P)]


def test_criterion_1_q1_spectra(capsys):
    with criterion(capsys, 1, "q = 1 spectra N = 1..20", 5):
        for N in range(1, 21):
            P = eliminant(1, N).P
            assert P.degree == N
            assert sorted(real_roots(P), reverse=True) == catalog.spectrum_q1(N)
            # the predicted values are zeros of the trap determinant itself
            for x in catalog.spectrum_q1(N)[: min(N, 4)]:
                assert bareiss_det(build_trap(1, N).numeric([x])) == 0


def test_criterion_2_q2_eliminants(capsys):
    with criterion(capsys, 2, "q = 2 eliminants and root sets N = 1..6", 60):
        assert eliminant(2, 3).P.primitive() == s**6 - 7 * s**3 - 8
        assert eliminant(2, 4).P.primitive() == s**10 - 27 * s**7 + 27 * s**4 - 729 * s
        for N in range(1, 7):
            want = {Fraction(N + 2 - 3 * j) for j in range(1, (N + 1) // 2 + 1)}
            assert set(real_roots(eliminant(2, N).P)) == want


def test_criterion_3_q3(capsys):
    with criterion(capsys, 3, "q = 3, N = 3 eliminant, z-form, tuples; N = 4, 5 data", 120):
        sec = eliminant(3, 3)
        assert sec.P.primitive() == s**9 - 12 * s**5 - 64 * s
        assert sec.e == 1 and sec.F == UPoly([-64, -12, 1], "z")
        got = sorted(t.exact for t in solve_tuples(3, 3))
        assert got == sorted(catalog.q3_full(3))
        for N in (4, 5):
            assert all(verify_tuple(3, N, t) for t in catalog.q3_full(N))


def test_criterion_4_q4(capsys):
    with criterion(capsys, 4, "q = 4, N = 1..4", 600):
        assert [t.exact for t in solve_tuples(4, 1)] == [(0, 0, 0, 0)]
        assert [t.exact for t in solve_tuples(4, 2)] == [(1, 1, 1, 1)]
        P3 = eliminant(4, 3).P
        t = UPoly([0, 1])
        exact_div(P3, t**3 - t**2 - 3 * t + 2)
        ivs = sturm_isolate(P3)
        want = [Surd.from_PQ(-1, 1, -1), Surd.from_PQ(-1, 1, 1), Fraction(2)]
        assert len(ivs) == 3 and all(iv.contains(v) for iv, v in zip(ivs, want))
        P4 = eliminant(4, 4).P
        ivs = sturm_isolate(P4)
        want = sorted(catalog.q4_values(4))
        assert [str(v) for v in want] == ["(1 - sqrt(5))/2", "(1 + sqrt(5))/2", "3"]
        assert len(ivs) == len(want) and all(iv.contains(v) for iv, v in zip(ivs, want))
        for e in catalog.spectrum_q4(4):
            f = UPoly([Fraction(-e.P, 2), 1]) if e.Q == 0 else UPoly([Fraction(e.P**2 - 5 * e.Q**2, 4), -e.P, 1])
            exact_div(P4, f)


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("QES_STRETCH", "1") == "0", reason="stretch goal disabled")
def test_criterion_4_stretch_q4_N5(capsys):
    with criterion(capsys, "4+", "q = 4, N = 5 eliminant degree 70 (stretch)", 600):
        try:
            sec = eliminant(4, 5, budget=Budget())
        except BudgetExceededError:
            pytest.skip("stretch goal did not finish within the budget")
        assert sec.degree == 70
        ivs = sturm_isolate(sec.P)
        want = sorted(catalog.q4_values(5))
        assert len(ivs) == len(want) and all(iv.contains(v) for iv, v in zip(ivs, want))


def test_criterion_5_catalog(capsys):
    with criterion(capsys, 5, "catalog counts, Table 1 golden, totals", 1):
        for N in range(1, 41):
            K = (N + 1) // 2
            size = sum(e.multiplicity for e in catalog.spectrum_q4(N))
            assert size == catalog.count_q4(N) == K * (K + 1) // 2
        text = catalog.render_table1(12)
        assert text.encode() == catalog.TABLE1.encode()
        totals = [int(x) for x in text.splitlines()[-1].split("|")[1].split()]
        assert totals == [1, 1, 3, 3, 6, 6, 10, 10, 15, 15, 21, 21]


Z_CASES = [(2, N) for N in range(1, 7)] + [(3, N) for N in range(1, 6)] + [(4, N) for N in range(1, 6)]


def test_criterion_6_z_structure(capsys):
    with criterion(capsys, 6, "z-structure of every computed eliminant at q = 2, 3, 4", 600):
        for q, N in Z_CASES:
            try:
                P = eliminant(q, N).P
            except BudgetExceededError:
                continue
            got = z_structure(P, q)
            assert got is not None, (q, N)
            e, F = got
            assert e in (0, 1)
            assert (s**e * UPoly(F.coeffs).compose_power(q + 1)) == P


def test_criterion_7_finite_D(capsys):
    grid = (10**4, 10**6, 10**8)
    with criterion(capsys, 7, "finite-D continuation q = 1, 2 at N = 2", 30):
        for q, branch in ((1, 1), (1, -1), (2, 1)):
            rep = continuation(q, 2, (ONE,) * (q + 1), branch, grid, dps=64)
            assert not rep.truncated
            assert rep.monotone, rep.deviation
            assert rep.deviation[-1] < 1e-2


def test_criterion_8_wavefunction(capsys):
    with criterion(capsys, 8, "Schroedinger residual and sensitivity", 10):
        tol = mpmath.mpf(10) ** -30
        for N in range(1, 6):
            for ell in (Fraction(0), Fraction(1, 2), Fraction(3)):
                spec = PotentialSpec(0, (ONE,))
                assert schrodinger_residual(spec, ell, harmonic_solution(ONE, ell, N), dps=64) < tol
        alphas = (ONE, ONE)
        spec = PotentialSpec(1, alphas, (Fraction(0),))
        for sign in (1, -1):
            cand = quartic_doublet(alphas, 0, sign, dps=64)
            assert schrodinger_residual(spec, 0, cand, dps=64) < tol
            with mpmath.workdps(64):
                bad = QESCandidate(E=cand.E + mpmath.mpf(10) ** -3, Gs=cand.Gs, hs=cand.hs, kind="mp")
            assert schrodinger_residual(spec, 0, bad, dps=64) > mpmath.mpf(10) ** -6


def test_criterion_9_round_trips(capsys):
    rng = random.Random(20261015)

    def rat(lo=-50, hi=50):
        return Fraction(rng.randint(lo, hi), rng.randint(1, 30))

    with criterion(capsys, 9, "coupling and scaling round trips, 1000 instances each", 5):
        for _ in range(1000):
            q = rng.randint(0, 5)
            alphas = [rat() for _ in range(q)] + [rat(1, 50) ** 2]
            Gs = [rat() for _ in range(q)]
            back = g_to_alpha(alpha_to_g(alphas, Gs))
            assert back == (tuple(alphas), tuple(Gs))
        for _ in range(1000):
            q = rng.randint(1, 5)
            # D = 2 alpha_q mu^(q+1) keeps mu and tau rational, so the map is exact
            k, m = rng.randint(1, 9), rng.randint(1, 6)
            alphas = [rat() for _ in range(q)] + [Fraction(k, 2)]
            D = k * m ** (q + 1)
            sv = tuple(rat() for _ in range(q))
            E, gs = g_from_s(D, alphas, sv)
            assert isinstance(E, Fraction)
            assert s_from_g(D, alphas, E, gs) == sv
