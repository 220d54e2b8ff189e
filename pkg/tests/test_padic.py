import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import brute_vp
from structval.errors import DivisionByZero, NotMonic, PrecisionExhausted, PrimeMismatch, ZeroInput
from structval.padic import (INF, PAdic, Val, ValPrime, ValuationPoint, catalog_points,
                             check_henselian_form, eval_patch, is_prime, padic_arith, parse_patch,
                             primes_upto, sign_vector, val, vp)

nonzero = st.fractions(max_denominator=10**6).filter(lambda q: q != 0)


def test_vp_examples():
    assert vp(Fraction(50), 5) == 2
    assert vp(Fraction(3, 40), 2) == -3
    assert vp(7, 3) == 0
    with pytest.raises(ZeroInput):
        vp(0, 5)
    assert val(0, 5) == INF


@given(nonzero, st.sampled_from([2, 3, 5, 7, 13]))
def test_vp_matches_repeated_division(q, p):
    assert vp(q, p) == brute_vp(q, p)


def test_primes():
    assert primes_upto(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(97)) == 25
    assert not is_prime(1) and not is_prime(91) and is_prime(97)


def test_patch_examples():
    v7, v3, v0 = ValuationPoint(7), ValuationPoint(3), ValuationPoint(None)
    assert eval_patch(v7, Val(7)) and not eval_patch(v3, Val(7)) and not eval_patch(v0, Val(7))
    for v in catalog_points():
        assert eval_patch(v, ValPrime(Fraction(2, 9)) | Val(Fraction(9, 2)))
    assert eval_patch(v0, ValPrime(Fraction(1, 3)) & ValPrime(Fraction(5, 7)))
    assert sign_vector(v7, [7, Fraction(1, 7), 3]) == [0, -1, 0]


def test_parse_patch():
    e = parse_patch("Val(7) & ~(Val'(1/3) | Val(2))")
    assert e == Val(7) & ~(ValPrime(Fraction(1, 3)) | Val(2))
    assert [str(v) for v in catalog_points() if eval_patch(v, e)] == []
    e = parse_patch("Val(7) | Val(2)")
    assert [str(v) for v in catalog_points() if eval_patch(v, e)] == ["v_2", "v_7"]
    with pytest.raises(ValueError):
        parse_patch("Val(7) &")


def test_membership_table_exact():
    pts = catalog_points()
    for p in primes_upto(97):
        assert [v for v in pts if eval_patch(v, Val(p))] == [ValuationPoint(p)]


@given(nonzero)
def test_complement_identity(a):
    for v in catalog_points():
        assert eval_patch(v, ValPrime(a)) == (not eval_patch(v, Val(1 / a)))
        assert eval_patch(v, ~Val(a)) == (not eval_patch(v, Val(a)))


def test_sign_vectors_separate_points():
    S = primes_upto(97)
    S = S + [Fraction(1, p) for p in S]
    vecs = {tuple(sign_vector(v, S)) for v in catalog_points()}
    assert len(vecs) == len(catalog_points())


def test_padic_examples():
    x = PAdic.from_rational(10, 7, 2)
    with pytest.raises(PrecisionExhausted) as err:
        x * x - PAdic.from_rational(2, 7, 2)
    assert err.value.witness["lower_bound"] == 2
    y = PAdic.from_rational(Fraction(1, 3), 5, 4)
    assert (y * PAdic.from_rational(3, 5, 4)).residue() == 1
    assert PAdic.from_rational(Fraction(-1, 25), 5, 3).valuation == -2
    with pytest.raises(PrimeMismatch):
        x + y
    with pytest.raises(DivisionByZero):
        PAdic.zero(7).inverse()
    assert padic_arith("neg", x).mod() == 39
    assert padic_arith("inv", x).mod() == pow(10, -1, 49)
    assert (x ** 2).mod() == 2


def _rand_rational(rng, p):
    num = rng.randint(1, 10**6) * rng.choice([-1, 1])
    den = rng.randint(1, 10**4)
    return Fraction(num, den) * Fraction(p) ** rng.randint(-4, 4)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_ultrametric_laws(p):
    rng = random.Random(p)
    N = 12
    for _ in range(10**4):
        a, b = _rand_rational(rng, p), _rand_rational(rng, p)
        A, B = PAdic.from_rational(a, p, N), PAdic.from_rational(b, p, N)
        assert (A * B).valuation == vp(a, p) + vp(b, p)
        assert vp(a * b, p) == vp(a, p) + vp(b, p)
        lo = min(vp(a, p), vp(b, p))
        if a + b != 0:
            assert vp(a + b, p) >= lo
            if vp(a, p) != vp(b, p):
                assert vp(a + b, p) == lo
        try:
            S = A + B
        except PrecisionExhausted as e:
            assert a + b == 0 or vp(a + b, p) >= e.witness["lower_bound"]
            continue
        assert S.valuation >= lo
        if vp(a, p) != vp(b, p):
            assert S.valuation == lo
        # the sum agrees with the exact sum to the claimed precision
        assert val(a + b - S.residue(), p) >= S.absolute_precision


@given(nonzero, nonzero, st.sampled_from([3, 5, 7]))
def test_arithmetic_matches_exact(a, b, p):
    N = 8
    A, B = PAdic.from_rational(a, p, N), PAdic.from_rational(b, p, N)
    for got, exact in [(A * B, a * b), (A / B, a / b), (-A, -a)]:
        assert got.valuation == vp(exact, p)
        assert val(exact - got.residue(), p) >= got.absolute_precision


def test_henselian_form():
    r = check_henselian_form([7, 1, 1], 7)
    assert r.holds and r.root.mod() % 7 == 6
    c = r.root.residue()
    assert (c * c + c + 7) % 7 ** 10 == 0
    assert not check_henselian_form([1, 1, 1], 7).holds
    r = check_henselian_form([0, 0, 1, 1], 5)
    assert r.holds and r.root.mod() == 5**10 - 1
    with pytest.raises(NotMonic):
        check_henselian_form([1, 1, 2], 3)
