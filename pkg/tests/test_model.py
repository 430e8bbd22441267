from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anharmonic_qes.errors import CouplingError
from anharmonic_qes.model import (
    AnsatzState,
    PotentialSpec,
    alpha_to_g,
    bwkb_eval,
    ell_from_D,
    g_to_alpha,
    psi_eval,
)
from anharmonic_qes.recurrence import harmonic_solution

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=20)
positive = st.fractions(min_value=Fraction(1, 20), max_value=10, max_denominator=20)


@st.composite
def couplings(draw):
    q = draw(st.integers(0, 5))
    alphas = [draw(rationals) for _ in range(q)] + [draw(positive) ** 2]
    Gs = [draw(rationals) for _ in range(q)]
    return alphas, Gs


def test_alpha_to_g_examples():
    w = Fraction(3, 2)
    assert alpha_to_g([w], []) == (w * w,)
    assert alpha_to_g([1, 2], [0]) == (1, 4, 4)
    assert alpha_to_g([0, 0, 1], [0, 0]) == (0, 0, 0, 0, 1)


def test_alpha_to_g_rejects_bad_input():
    with pytest.raises(CouplingError):
        alpha_to_g([1, 2], [])
    with pytest.raises(CouplingError):
        alpha_to_g([1, -2], [0])


def test_g_to_alpha_examples():
    assert g_to_alpha((1, 4, 4)) == ((1, 2), (0,))
    w = Fraction(5, 3)
    assert g_to_alpha((w * w,)) == ((w,), ())
    assert g_to_alpha((0, 4, 4)) == ((1, 2), (-1,))


def test_g_to_alpha_irrational_leading():
    with pytest.raises(CouplingError):
        g_to_alpha((1, 0, 2))
    alphas, _ = g_to_alpha((1, 0, 2), exact=False)
    with mpmath.workdps(64):
        assert abs(alphas[-1] - mpmath.sqrt(2)) < mpmath.mpf(10) ** -60


@settings(max_examples=200, deadline=None)
@given(couplings())
def test_coupling_round_trip(c):
    alphas, Gs = c
    back_a, back_G = g_to_alpha(alpha_to_g(alphas, Gs))
    assert list(back_a) == alphas
    assert list(back_G) == Gs


@settings(max_examples=100, deadline=None)
@given(couplings(), rationals)
def test_potential_matches_square_plus_remainder(c, r):
    alphas, Gs = c
    spec = PotentialSpec(len(alphas) - 1, alphas, Gs)
    omega = sum(a * r ** (2 * k) for k, a in enumerate(alphas))
    S = sum(G * r ** (2 * m + 2) for m, G in enumerate(Gs))
    assert spec.potential(r) == omega**2 * r**2 + S


def test_spec_json_round_trip():
    spec = PotentialSpec(2, (Fraction(1, 3), 0, 2), (Fraction(-1, 2), 5), E=Fraction(7, 4))
    back = PotentialSpec.from_json(spec.to_json())
    assert back == spec
    assert back.gs == spec.gs


def test_bwkb_examples():
    assert bwkb_eval(0, [1, 2, 3]) == 0
    w, r = Fraction(3), Fraction(2, 5)
    assert bwkb_eval(r, [w]) == w * r * r / 2
    assert bwkb_eval(1, [0, 1]) == Fraction(1, 4)


def test_ell_from_D_examples():
    assert ell_from_D(3) == 0
    assert ell_from_D(3, 1) == 1
    assert ell_from_D(100) == Fraction(97, 2)


def test_psi_ground_state():
    st_ = AnsatzState(Fraction(0), 1, (1,))
    with mpmath.workdps(64):
        assert abs(psi_eval(1, st_, [1]) - mpmath.exp(mpmath.mpf(-1) / 2)) < mpmath.mpf(10) ** -60


def test_psi_vanishes_at_origin():
    st_ = AnsatzState(Fraction(1, 2), 2, (1, -1))
    small = [psi_eval(Fraction(1, 10**k), st_, [1]) for k in (2, 4, 6)]
    assert all(abs(b) < abs(a) for a, b in zip(small, small[1:]))
    assert abs(small[-1]) < mpmath.mpf(10) ** -8


def test_first_excited_state_has_one_node():
    ell = Fraction(0)
    cand = harmonic_solution(Fraction(1), ell, 2)
    state = AnsatzState(ell, 2, cand.hs)
    # h_1 = -B_0/C_0 = -4/6; the node sits at r^2 = 3/2
    assert cand.hs == (1, Fraction(-2, 3))
    grid = [Fraction(k, 10) for k in range(1, 40)]
    signs = [mpmath.sign(psi_eval(r, state, [1])) for r in grid]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    assert changes == 1
