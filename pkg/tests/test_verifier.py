import json
from fractions import Fraction

import mpmath
import pytest

from anharmonic_qes.model import PotentialSpec, ell_from_D
from anharmonic_qes.recurrence import QESCandidate, harmonic_solution, quartic_doublet
from anharmonic_qes.large_d import scaling
from anharmonic_qes.verifier import (
    branch_tuple,
    continuation,
    cross_validate,
    default_samples,
    schrodinger_residual,
)

ONE = Fraction(1)


@pytest.mark.parametrize(
    "q,N,expected",
    [
        (2, 3, ["2", "-1"]),
        (1, 5, ["4", "2", "0", "-2", "-4"]),
    ],
)
def test_cross_validate_matches(q, N, expected):
    rep = cross_validate(q, N)
    assert rep.match
    assert rep.predicted == expected


def test_cross_validate_q4_N3_divisibility():
    rep = cross_validate(4, 3)
    assert rep.match
    assert rep.divisibility == {"s - 2": True, "s^2 + s - 1": True}
    assert json.loads(rep.to_json())["match"] is True


def test_cross_validate_q3_uses_middle_component():
    rep = cross_validate(3, 4)
    assert rep.match
    assert "s2=3" in rep.predicted


def test_cross_validate_catches_sabotage():
    rep = cross_validate(4, 3, inject_error=True)
    assert not rep.match
    assert rep.missing


def test_q5_N2_table_recipe_disagrees():
    # elimination gives s1 in {1, -1}; the closed-form recipe adds 0
    rep = cross_validate(5, 2)
    assert not rep.match
    assert rep.missing == ["0"]


def test_branch_tuple_picks_nearest():
    assert branch_tuple(1, 2, 1) == (1,)
    t = branch_tuple(3, 3, 2)
    assert [float(x) for x in t] == [2.0, 2.0, 2.0]


def test_doublet_limit_oracle():
    """(E - alpha_0 D)/tau from the closed-form doublet tends to +1."""
    alphas = (ONE, ONE)
    devs = []
    for D in (10**4, 10**6, 10**8):
        cand = quartic_doublet(alphas, ell_from_D(D), 1)
        with mpmath.workdps(64):
            tau = scaling(D, 1, 1, 64).tau
            devs.append(abs((cand.E - D) / tau - 1))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-3


def test_continuation_q1_N2_both_branches():
    for branch in (1, -1):
        rep = continuation(1, 2, (ONE, ONE), branch, (10**4, 10**6, 10**8))
        assert rep.monotone and not rep.truncated
        assert rep.deviation[-1] < 1e-2


def test_continuation_q1_N1_goes_to_zero():
    rep = continuation(1, 1, (ONE, ONE), 0, (10**4, 10**6, 10**8))
    assert all(abs(float(s[0])) < 1e-2 for s in rep.s)


def test_continuation_q2_N2():
    rep = continuation(2, 2, (ONE, ONE, ONE), 1, (10**4, 10**6, 10**8))
    assert rep.monotone
    assert rep.deviation[-1] < 1e-2
    assert rep.to_csv().splitlines()[0] == "D,s1,s2,deviation"


def test_continuation_rejects_bad_grid():
    with pytest.raises(ValueError):
        continuation(1, 2, (ONE, ONE), 1, (10**6, 10**4))


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("ell", [Fraction(0), Fraction(1, 2), Fraction(7)])
def test_harmonic_residual(N, ell):
    spec = PotentialSpec(0, (Fraction(3, 2),))
    cand = harmonic_solution(Fraction(3, 2), ell, N)
    assert schrodinger_residual(spec, ell, cand) < mpmath.mpf(10) ** -50


def test_doublet_residual_on_fixed_samples():
    alphas = (ONE, ONE)
    spec = PotentialSpec(1, alphas, (Fraction(0),))
    cand = quartic_doublet(alphas, 0, 1)
    samples = [Fraction(1, 10), Fraction(1, 2), 1, 2, 5]
    assert schrodinger_residual(spec, 0, cand, samples) < mpmath.mpf(10) ** -30


def test_residual_detects_wrong_energy():
    alphas = (ONE, ONE)
    spec = PotentialSpec(1, alphas, (Fraction(0),))
    cand = quartic_doublet(alphas, 0, 1)
    with mpmath.workdps(64):
        bad = QESCandidate(E=cand.E + mpmath.mpf(10) ** -3, Gs=cand.Gs, hs=cand.hs, kind="mp")
    assert schrodinger_residual(spec, 0, bad) > mpmath.mpf(10) ** -6


def test_default_samples_are_geometric():
    spec = PotentialSpec(1, (ONE, 4 * ONE), (Fraction(0),))
    xs = default_samples(spec, 16)
    with mpmath.workdps(30):
        assert len(xs) == 7
        assert abs(xs[3] - 1) < 1e-20
        assert all(abs(b / a - 2) < 1e-20 for a, b in zip(xs, xs[1:]))
