from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bilaplacian.errors import DomainError
from bilaplacian.field import ONE, SQRT2, AlgebraicNumber
from bilaplacian.series import (
    BivariateSeries,
    ImplicitProblem,
    TruncatedSeries,
    ts_binomial,
    ts_compose,
    ts_implicit_solve,
    ts_mul,
)

F = Fraction


def coeffs(s):
    return list(s.coeffs)


def test_binomial_examples():
    assert coeffs(ts_binomial(F(1, 2), 3)) == [1, F(1, 2), F(-1, 8), F(1, 16)]
    assert coeffs(ts_binomial(F(-3, 4), 2)) == [1, F(-3, 4), F(21, 32)]
    assert coeffs(ts_binomial(1, 5)) == [1, 1, 0, 0, 0, 0]


def test_binomial_over_field():
    s = ts_binomial(F(1, 2), 2, one=ONE)
    assert s[1] == AlgebraicNumber((F(1, 2),))


def test_multiplication():
    a = TruncatedSeries([F(2), F(3), F(5)])
    assert ts_mul(a, TruncatedSeries.constant(F(1), 2)) == a
    x = TruncatedSeries.variable(2)
    assert coeffs((1 + x) * (1 - x)) == [1, 0, -1]
    prod = ts_binomial(F(1, 2), 6) * ts_binomial(F(-1, 2), 6)
    assert coeffs(prod) == [1, 0, 0, 0, 0, 0, 0]


def test_truncation_order_is_the_minimum():
    a = TruncatedSeries([1, 1, 1, 1, 1])
    b = TruncatedSeries([1, 1])
    assert (a * b).order == 1
    assert (a + b).order == 1
    with pytest.raises(IndexError):
        (a * b)[2]


def test_composition_examples():
    f = ts_binomial(F(1, 2), 4)
    x = TruncatedSeries.variable(4)
    assert ts_compose(f, x) == f
    assert coeffs(ts_compose(f, x * x)) == [1, 0, F(1, 2), 0, F(-1, 8)]
    inner = TruncatedSeries([0, F(1, 2), F(1, 8)])
    assert coeffs(ts_compose(ts_binomial(F(1, 2), 2), inner)) == [1, F(1, 4), F(1, 32)]


def test_composition_needs_zero_constant_term():
    with pytest.raises(DomainError):
        ts_compose(ts_binomial(F(1, 2), 3), TruncatedSeries([1, 1, 0, 0]))


def test_composition_order_accounts_for_valuation():
    # inner = x^2 + O(x^3): outer known to x^2 gives the result to x^5
    outer = TruncatedSeries([1, 1, 1])
    inner = TruncatedSeries([0, 0, 1, 0])
    assert ts_compose(outer, inner).order == 3
    inner = TruncatedSeries([0, 0, 1, 0, 0, 0, 0, 0])
    assert ts_compose(outer, inner).order == 5


def test_reciprocal_and_power():
    s = TruncatedSeries([F(2), F(1), F(0), F(3)])
    assert coeffs(s * s.reciprocal()) == [1, 0, 0, 0]
    assert s**3 == s * s * s
    assert coeffs(s**0) == [1, 0, 0, 0]


def test_render():
    assert str(ts_binomial(F(1, 2), 3)) == "1 + 1/2*x - 1/8*x^2 + 1/16*x^3 + O(x^4)"


def bivariate(rows, K):
    """BivariateSeries of total order K from the given leading rows, zero-padded."""
    full = [TruncatedSeries(list(r) + [0] * (K - i + 1 - len(r)), K - i) for i, r in enumerate(rows)]
    full += [TruncatedSeries.constant(F(0), K - i) for i in range(len(rows), K + 1)]
    return BivariateSeries(full)


def test_implicit_identity():
    # F = u - m
    prob = ImplicitProblem(bivariate([[0, -1], [1]], 4))
    assert coeffs(ts_implicit_solve(prob, 4)) == [0, 1, 0, 0, 0]


def test_implicit_geometric():
    K = 6
    one = TruncatedSeries.variable(K)
    U = BivariateSeries.from_u(one, K)
    M = BivariateSeries.from_m(one, K)
    prob = ImplicitProblem(U - M * (U + F(1)))
    u = ts_implicit_solve(prob, K)
    assert coeffs(u) == [0] + [1] * K
    assert prob.F.substitute_u(u).is_zero()


def test_implicit_singular_is_rejected():
    K = 4
    one = TruncatedSeries.variable(K)
    U = BivariateSeries.from_u(one, K)
    M = BivariateSeries.from_m(one, K)
    with pytest.raises(DomainError):
        ImplicitProblem(U * U - M)
    with pytest.raises(DomainError):
        ImplicitProblem(U - M + F(1))


def test_implicit_over_field_with_irrational_slope():
    K = 4
    one = TruncatedSeries.variable(K, ONE)
    U = BivariateSeries.from_u(one, K)
    M = BivariateSeries.from_m(one, K)
    prob = ImplicitProblem(U * SQRT2 - M)
    u = ts_implicit_solve(prob, K)
    assert u[1] == SQRT2 / 2
    assert all(u[n] == 0 for n in (2, 3, 4))


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@settings(max_examples=60, deadline=None)
@given(rationals, st.integers(min_value=1, max_value=8))
def test_binomial_inverse_pair(r, K):
    prod = ts_binomial(r, K) * ts_binomial(-r, K)
    assert coeffs(prod) == [1] + [0] * K


def zero_constant_series(K):
    return st.lists(rationals, min_size=K, max_size=K).map(lambda c: TruncatedSeries([0] + c))


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=5, max_size=5), zero_constant_series(4), zero_constant_series(4))
def test_composition_associative(fc, g, h):
    f = TruncatedSeries(fc)
    left = ts_compose(ts_compose(f, g), h)
    right = ts_compose(f, ts_compose(g, h))
    n = min(left.order, right.order)
    assert left.truncate(n) == right.truncate(n)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(rationals, min_size=4, max_size=4),
    st.lists(rationals, min_size=4, max_size=4),
    st.lists(rationals, min_size=3, max_size=3),
)
def test_implicit_residual_is_zero(c0, c1, c2):
    K = 4
    slope = 2 + c1[0]
    rows = [[0] + c0, [slope if slope != 0 else 1] + c1[1:], c2]
    prob = ImplicitProblem(bivariate(rows, K))
    u = ts_implicit_solve(prob, K)
    assert prob.F.substitute_u(u).is_zero()
