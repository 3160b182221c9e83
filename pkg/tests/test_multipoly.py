import pytest
from hypothesis import given, strategies as st

from syzkit.multipoly import MultiPoly, first_difference

N = 3
terms = st.dictionaries(st.tuples(*[st.integers(0, 3)] * N), st.integers(-5, 5), max_size=5)
polys = terms.map(lambda t: MultiPoly(t, N))
points = st.tuples(*[st.integers(-4, 4)] * N)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.zero(N)


@given(polys, polys, points)
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)


@given(polys, st.integers(0, 4), points)
def test_power(a, n, x):
    assert (a**n).evaluate(x) == a.evaluate(x) ** n


def test_big_coefficients_do_not_overflow():
    p = (MultiPoly.var(1, 1) + 1) ** 70
    assert p.coefficient((35,)) == 112186277816662845432
    assert p.coefficient_sum() == 2**70


def test_str_and_order():
    q1, q2 = MultiPoly.var(1, 2), MultiPoly.var(2, 2)
    assert str(q2 + q1 * q2) == "q2 + q1*q2"
    assert str(1 - 2 * q1**2) == "1 - 2*q1^2"
    assert str(MultiPoly.zero(2)) == "0"


def test_json_roundtrip():
    p = (MultiPoly.var(1, 2) * 3 + MultiPoly.var(2, 2)) ** 5
    assert MultiPoly.from_json(p.to_json(), 2) == p
    assert all(isinstance(t["c"], str) for t in p.to_json())


def test_laurent_exponents():
    p = MultiPoly.monomial((-1, 0))
    assert not p.is_polynomial
    assert (p * MultiPoly.monomial((1, 0))) == 1


def test_first_difference():
    a = MultiPoly({(0, 1): 1, (1, 1): 2}, 2)
    b = MultiPoly({(0, 1): 1, (1, 1): 3}, 2)
    assert first_difference(a, b) == ((1, 1), 2, 3)
    assert first_difference(a, a) is None


def test_mismatched_variables():
    with pytest.raises(ValueError):
        MultiPoly.var(1, 2) + MultiPoly.var(1, 3)
    with pytest.raises(TypeError):
        MultiPoly({(0,): 0.5}, 1)
