from fractions import Fraction

from hypothesis import given, strategies as st

from structval.polynomial import Poly, variables

small = st.lists(st.integers(-9, 9), min_size=1, max_size=4)


def test_basic_arithmetic():
    T, X = variables(2)
    f = X ** 2 - T
    assert f((Fraction(9), Fraction(3))) == 0
    assert f.derivative(1) == X * 2
    assert f.degree_in(1) == 2 and f.is_monic_in(1) and not f.is_monic_in(0)
    assert f.coefficient_in(1, 0) == -T


def test_valuation_and_scaling():
    f = Poly.from_dense([Fraction(1, 5), 10, 3])
    assert f.val(5) == -1 and f.val(3) == 0
    g = Poly.from_dense([0, 0, 1]).scale_inputs(5)
    assert g((Fraction(10),)) == 4


def test_json_round_trip():
    T, X = variables(2)
    f = X ** 3 + T * X * Fraction(2, 7) - 1
    assert Poly.from_json(f.to_json(), 2) == f
    assert Poly.from_json([1, 0, 1]) == Poly.from_dense([1, 0, 1])


@given(small, small, st.integers(-50, 50))
def test_ring_laws_by_evaluation(a, b, x):
    f, g = Poly.from_dense(a), Poly.from_dense(b)
    pt = (Fraction(x),)
    assert (f + g)(pt) == f(pt) + g(pt)
    assert (f * g)(pt) == f(pt) * g(pt)
    assert (f - g)(pt) == f(pt) - g(pt)


@given(small, st.integers(-50, 50), st.sampled_from([2, 3, 5]), st.integers(1, 5))
def test_eval_mod_matches_exact(a, x, p, k):
    f = Poly.from_dense(a)
    assert f.eval_mod([x], p, k) == int(f((Fraction(x),))) % p ** k


@given(small, st.integers(-20, 20))
def test_derivative_by_difference(a, x):
    f = Poly.from_dense(a)
    # exact for the leading-order term of the finite difference of polynomials
    h = Fraction(1, 10**9)
    approx = (f((x + h,)) - f((Fraction(x),))) / h
    assert abs(approx - f.derivative(0)((Fraction(x),))) < Fraction(1, 10**5)
