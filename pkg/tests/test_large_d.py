from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anharmonic_qes.errors import ScalingError
from anharmonic_qes.large_d import (
    SpectrumPoint,
    build_trap,
    exact_root,
    g_from_s,
    rescaled_entries,
    s_from_g,
    s_orbit,
    scaling,
)
from anharmonic_qes.algebra import UPoly
from anharmonic_qes.algebra.mpoly import MPoly

from oracles import bareiss_det


def _mp(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


def test_scaling_examples():
    assert scaling(Fraction(6), 2, Fraction(3)).mu == 1
    sc = scaling(2, 1, 1)
    assert (sc.mu, sc.tau) == (1, 4)
    assert sc.exact
    sc = scaling(1, 4, Fraction(1, 2))
    assert (sc.mu, sc.tau) == (1, 2)


def test_scaling_rejects_bad_input():
    with pytest.raises(ScalingError):
        scaling(10, 0, 1)
    with pytest.raises(ScalingError):
        scaling(10, 2, -1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**9), st.integers(1, 5), st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
def test_mu_tau_is_2D(D, q, aq):
    sc = scaling(D, q, aq)
    with mpmath.workdps(64):
        assert abs(_mp(sc.mu * sc.tau / (2 * D)) - 1) < mpmath.mpf(10) ** -55


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4), st.integers(1, 6))
def test_exact_root_of_power(x, k):
    assert exact_root(x**k, k) == x


def test_exact_root_irrational():
    assert exact_root(Fraction(2), 2) is None
    assert exact_root(Fraction(27, 8), 3) == Fraction(3, 2)


def test_g_from_s_examples():
    alphas = (Fraction(5), Fraction(7), Fraction(1))
    E, gs = g_from_s(100, alphas, (0, 0))
    assert E == alphas[0] * 100
    assert gs == [-alphas[1] * 100]
    a0 = Fraction(3, 7)
    E, gs = g_from_s(2, (a0, Fraction(1)), (1,))
    assert E == 2 * a0 + 4 and gs == []


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4),
    st.integers(1, 10**6),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=5, max_size=5),
)
def test_s_round_trip_numeric(q, D, vals):
    alphas = [Fraction(1, 2)] * q + [Fraction(2)]
    s = vals[:q]
    E, gs = g_from_s(D, alphas, s)
    back = s_from_g(D, alphas, E, gs)
    with mpmath.workdps(64):
        assert all(abs(_mp(a) - _mp(b)) < mpmath.mpf(10) ** -50 for a, b in zip(back, s))


def test_trap_q4_N2():
    t = build_trap(4, 2)
    assert t.shape == (5, 2)
    rows = [[t.entry(n, j) for j in range(2)] for n in range(5)]
    assert rows == [["s1", 1], ["s2", "s1"], ["s3", "s2"], ["s4", "s3"], [1, "s4"]]


def _det(q, N, s):
    return bareiss_det(build_trap(q, N).numeric([s] * q))


def test_trap_q1_determinants():
    assert build_trap(1, 2).numeric([5]) == [[5, 1], [1, 5]]
    assert build_trap(1, 3).numeric([5]) == [[5, 1, 0], [2, 5, 2], [0, 1, 5]]
    for x in range(-4, 5):
        assert _det(1, 2, x) == x * x - 1
        assert _det(1, 3, x) == x**3 - 4 * x


@pytest.mark.parametrize("q,N", [(1, 1), (1, 5), (2, 4), (3, 3), (4, 4), (5, 2)])
def test_trap_shape_and_band(q, N):
    t = build_trap(q, N)
    assert t.shape == (N + q - 1, N)
    for (n, j), e in t.entries.items():
        k = n - j
        assert -1 <= k <= q
        if k == -1:
            assert e == n + 1
        elif k == q:
            assert e == N - 1 - j
        else:
            assert e == f"s{k + 1}"
    assert len(t.symbolic()) == N + q - 1
    assert t.pretty().count("\n") == N + q - 2


def test_orbit_examples():
    with mpmath.workdps(30):
        orb = s_orbit(8, 2)
        assert orb[0] == 2
        for z in orb:
            assert abs(z**3 - 8) < mpmath.mpf(10) ** -25
        unity = s_orbit(1, 4)
        assert len(unity) == 5 and unity[0] == 1
        assert sum(1 for z in unity if mpmath.im(z) == 0) == 1
        cube = s_orbit(-1, 2)
        assert -1 in cube
        assert sum(1 for z in cube if abs(z - mpmath.expj(mpmath.pi / 3)) < 1e-20) == 1


@pytest.mark.parametrize("q,N", [(1, 2), (1, 3), (2, 2), (2, 3), (4, 2), (4, 3)])
def test_leading_order_limit(q, N):
    """Scaled finite-D entries approach the trap matrix as D grows."""
    trap = build_trap(q, N)
    s = [Fraction(k + 1, 3) for k in range(q)]
    alphas = [Fraction(1)] * (q + 1)
    target = trap.numeric(s)
    devs = []
    for D in (10**4, 10**6, 10**8):
        e = rescaled_entries(D, alphas, s, N)
        assert set(e) == set(trap.entries)
        devs.append(max(abs(v - target[n][j]) for (n, j), v in e.items()))
    assert devs[0] > devs[1] > devs[2]


def test_spectrum_point_key():
    p = SpectrumPoint((mpmath.mpf(1) / 3, mpmath.mpf(2)))
    assert p.key(5) == ("0.33333", "2.0")
