import random
from fractions import Fraction

import pytest

from generators import lift_instance
from oracles import residue_roots
from structval.errors import DegenerateDerivative, HypothesisViolated, NotMember, OutsideBall, PrecisionExhausted
from structval.hensel import LiftProblem, neighborhood_data, project_inverse, sharp_hensel_lift
from structval.padic import val
from structval.polynomial import Poly, variables


def test_square_root_of_two_at_seven():
    f = Poly.from_dense([-2, 0, 1])
    res = sharp_hensel_lift(LiftProblem(f, (), 3, 7, 0, 10))
    assert res.residue % 49 == 10 and res.residue % 7 == 3
    assert (res.residue ** 2 - 2) % 7 ** 10 == 0
    assert res.iterations[-1] == 10
    assert residue_roots(f, (), 3, 7, 0, 2, 0) == [10]


def test_linear_root_is_exact():
    f = Poly.from_dense([Fraction(-3, 1), 1])
    res = sharp_hensel_lift(LiftProblem(f, (), 3, 5, 0, 6))
    assert res.exact and res.residue == 3


def test_square_root_with_parameter():
    T, X = variables(2)
    f = X ** 2 - T
    res = sharp_hensel_lift(LiftProblem(f, (4,), 2, 7, 0, 8), (53,))
    assert (res.residue ** 2 - 53) % 7 ** 8 == 0 and res.residue % 7 == 2
    assert residue_roots(f, (53,), 2, 7, 0, 2, 0) == [res.residue % 49]


def test_hypothesis_clauses():
    f = Poly.from_dense([-2, 0, 1])
    with pytest.raises(HypothesisViolated) as err:
        sharp_hensel_lift(LiftProblem(f, (), 2, 7, 0, 5))
    assert err.value.clause == "1c"
    with pytest.raises(HypothesisViolated) as err:
        sharp_hensel_lift(LiftProblem(f, (), Fraction(1, 7), 7, 0, 5))
    assert err.value.clause == "1a"
    with pytest.raises(HypothesisViolated) as err:
        sharp_hensel_lift(LiftProblem(f, (), 0, 3, 0, 5))
    assert err.value.clause == "1b"
    T, X = variables(2)
    with pytest.raises(HypothesisViolated) as err:
        sharp_hensel_lift(LiftProblem(X ** 2 - T, (4,), 2, 7, 0, 5), (5,))
    assert err.value.clause == "1d"
    with pytest.raises(PrecisionExhausted):
        sharp_hensel_lift(LiftProblem(f, (), 10, 7, 1, 1))


def test_random_instances_meet_postconditions():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 13])
        lp, b = lift_instance(rng, p)
        res = sharp_hensel_lift(lp, b)
        c = Fraction(res.residue)
        assert res.dist_to_seed > lp.epsilon
        assert res.fprime_val == lp.delta
        assert lp.f.eval_mod([int(x) for x in b] + [res.residue], p, res.precision) == 0
        assert val(c - lp.c0, p) > lp.epsilon
        for a, nxt in zip(res.iterations, res.iterations[1:]):
            assert nxt >= min(res.precision + lp.delta, 2 * a - 2 * lp.delta)


def test_residue_scan_finds_one_root():
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        p = rng.choice([3, 5, 7, 11, 13])
        lp, b = lift_instance(rng, p)
        if lp.delta >= 2 or lp.epsilon >= 2:
            continue
        res = sharp_hensel_lift(lp, b)
        roots = residue_roots(lp.f, b, lp.c0, p, lp.epsilon, 2, lp.delta)
        assert roots == [res.residue % p ** 2]
        checked += 1
    assert checked > 20


def test_neighborhood_examples():
    T, X = variables(2)
    nd = neighborhood_data(X ** 2 - T, (9,), 3, 5)
    assert nd.member and nd.delta == 0 and (nd.base_radius, nd.fiber_radius) == (0, 0)
    f = Poly.from_dense([-2, 0, 1])
    assert not neighborhood_data(f, (), 3, 2).member
    nd = neighborhood_data(f, (), 3, 7)
    assert nd.member and nd.delta == 0
    with pytest.raises(DegenerateDerivative):
        neighborhood_data(f, (), 0, 7)
    with pytest.raises(NotMember):
        project_inverse(neighborhood_data(f, (), 3, 2), (), 5)


def test_project_inverse_examples():
    T, X = variables(2)
    f = X ** 2 - T
    nd = neighborhood_data(f, (16,), 4, 7)
    res = project_inverse(nd, (16 + 49,), 6)
    assert (res.residue ** 2 - 65) % 7 ** 6 == 0 and res.residue % 7 == 4
    assert residue_roots(f, (65,), 4, 7, 0, 2, 0) == [res.residue % 49]
    assert project_inverse(nd, (16,), 6).residue == 4
    nd = neighborhood_data(f, (Fraction(36),), 6, 3)
    assert nd.delta == 1
    with pytest.raises(OutsideBall):
        project_inverse(nd, (36 + 9,), 6)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_projection_bijective_on_balls(p):
    rng = random.Random(p)
    T, X = variables(2)
    f = X ** 2 - T
    c0 = rng.randint(1, p - 1)
    nd = neighborhood_data(f, (c0 * c0,), c0, p)
    for _ in range(100):
        b = c0 * c0 + p ** (nd.base_radius + 1) * rng.randint(-500, 500)
        res = project_inverse(nd, (b,), 4)
        assert (res.residue ** 2 - b) % p ** 4 == 0
        assert residue_roots(f, (b,), c0, p, nd.fiber_radius, 2, nd.delta) == [res.residue % p ** 2]
