import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausslab.services._errors import DimensionError, NonFiniteError
from gausslab.services.polynomial_service import (
    MultiPoly,
    UniPoly,
    constant,
    embed_univariate,
    evaluate,
    evaluation_scale,
    from_roots,
    is_canonical,
    partial_derivative,
    poly_add,
    poly_mul,
    poly_neg,
    poly_pow,
    poly_scale,
    random_multipoly,
    restrict,
    to_univariate,
    variable,
)


def test_from_terms_canonicalizes():
    p = MultiPoly.from_terms(2, [((0, 0), 1), ((1, 0), 2), ((0, 0), -1), ((1, 1), 3)])
    assert dict(p.terms) == {(1, 1): 3, (1, 0): 2}
    assert list(p.terms) == [(1, 1), (1, 0)]
    assert is_canonical(p)


def test_from_terms_rejects_bad_input():
    with pytest.raises(DimensionError):
        MultiPoly.from_terms(2, {(1,): 1})
    with pytest.raises(NonFiniteError):
        MultiPoly.from_terms(1, {(1,): math.inf})
    with pytest.raises(ValueError):
        MultiPoly.from_terms(1, {(-1,): 1})


def test_null_polynomial():
    p = MultiPoly.null(3)
    assert p.is_null
    assert p.total_degree == -1
    assert evaluate(p, (1, 2, 3)) == 0
    assert partial_derivative(p, 2).is_null


def test_evaluate_and_call_agree():
    # p = z1^2 + z2^2
    p = poly_add(poly_pow(variable(1, 2), 2), poly_pow(variable(2, 2), 2))
    assert evaluate(p, (1j, 1)) == 0
    assert p((2, 3)) == 13
    with pytest.raises(DimensionError):
        evaluate(p, (1,))
    with pytest.raises(NonFiniteError):
        evaluate(p, (math.nan, 0))


def test_partial_derivative_of_product():
    z1, z2 = variable(1, 2), variable(2, 2)
    p = poly_add(poly_mul(z1, z2), constant(1, 2))
    assert partial_derivative(p, 1) == z2
    assert partial_derivative(p, 2) == z1
    with pytest.raises(DimensionError):
        partial_derivative(p, 3)


def test_restrict_builds_the_section_polynomial():
    z1, z2 = variable(1, 2), variable(2, 2)
    p = poly_add(poly_pow(z1, 2), poly_pow(z2, 2))

    f = restrict(p, 1, (1,))
    assert f == UniPoly(np.array([1, 0, 1]))

    g = restrict(p, 2, (2j,))
    assert g == UniPoly(np.array([-4, 0, 1]))


def test_restrict_annihilated_section_is_null():
    # z1*z2 vanishes on the whole line z2 = 0
    p = poly_mul(variable(1, 2), variable(2, 2))
    assert restrict(p, 1, (0,)).is_null


def test_restrict_drops_cancelled_leading_terms():
    # (z2 - 1) * z1^2 + z1: the quadratic term cancels at z2 = 1
    z1, z2 = variable(1, 2), variable(2, 2)
    p = poly_add(poly_mul(poly_add(z2, constant(-1, 2)), poly_pow(z1, 2)), z1)
    assert restrict(p, 1, (1,)).degree == 1


def test_from_roots_and_univariate_bridges():
    u = from_roots([1, -1])
    assert u == UniPoly(np.array([-1, 0, 1]))
    assert from_roots([]) == UniPoly(np.array([1]))
    m = embed_univariate(u)
    assert m.num_vars == 1
    assert to_univariate(m) == u
    with pytest.raises(DimensionError):
        to_univariate(variable(1, 2))


def test_unipoly_strips_trailing_zeros_and_differentiates():
    u = UniPoly(np.array([1, 2, 3, 0, 0]))
    assert u.degree == 2
    assert u.derivative() == UniPoly(np.array([2, 6]))
    assert UniPoly(np.array([0, 0])).is_null
    assert UniPoly(np.array([0, 0])).degree == -1
    assert UniPoly(np.array([5])).derivative().is_null


def test_evaluation_scale_bounds_the_value():
    p = MultiPoly.from_terms(2, {(2, 0): 3, (0, 1): -1j, (0, 0): 0.5})
    point = (0.5, 4j)
    assert evaluation_scale(p, point) == pytest.approx(3 + 4 + 0.5)
    assert abs(evaluate(p, point)) <= evaluation_scale(p, point)


def test_poly_scale_and_neg():
    p = variable(1, 1)
    assert poly_add(p, poly_neg(p)).is_null
    assert poly_scale(p, 0).is_null
    with pytest.raises(NonFiniteError):
        poly_scale(p, math.inf)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), num_vars=st.integers(1, 3))
def test_ring_identities_hold_on_random_polynomials(seed, num_vars):
    rng = np.random.default_rng(seed)
    p = random_multipoly(rng, num_vars, 3, integer_coeffs=True)
    q = random_multipoly(rng, num_vars, 3, integer_coeffs=True)
    r = random_multipoly(rng, num_vars, 2, integer_coeffs=True)

    assert poly_add(p, q) == poly_add(q, p)
    assert poly_mul(p, q) == poly_mul(q, p)
    assert poly_mul(p, poly_add(q, r)) == poly_add(poly_mul(p, q), poly_mul(p, r))
    assert is_canonical(poly_mul(p, q))

    point = tuple(complex(x, y) for x, y in rng.integers(-3, 4, size=(num_vars, 2)))
    assert evaluate(poly_mul(p, q), point) == pytest.approx(evaluate(p, point) * evaluate(q, point), rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_derivative_of_restriction_is_restriction_of_partial(seed):
    rng = np.random.default_rng(seed)
    p = random_multipoly(rng, 3, 4, integer_coeffs=True)
    k = int(rng.integers(1, 4))
    others = tuple(complex(x, y) for x, y in rng.integers(-2, 3, size=(2, 2)))
    lhs = restrict(p, k, others).derivative()
    rhs = restrict(partial_derivative(p, k), k, others)
    assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), num_vars=st.integers(1, 3))
def test_evaluate_does_not_depend_on_summation_order(seed, num_vars):
    rng = np.random.default_rng(seed)
    p = random_multipoly(rng, num_vars, 5, n_terms=8)
    point = rng.normal(size=num_vars) + 1j * rng.normal(size=num_vars)
    terms = list(p.terms.items())
    rng.shuffle(terms)
    shuffled = sum(coeff * math.prod(z**e for z, e in zip(point, mono)) for mono, coeff in terms)
    assert abs(evaluate(p, point) - shuffled) <= 1e-12 * evaluation_scale(p, point) + 1e-300


@settings(max_examples=50, deadline=None)
@given(multiplicity=st.integers(1, 8), re=st.floats(-2, 2), im=st.floats(-2, 2))
def test_from_roots_with_a_repeated_root_is_binomial(multiplicity, re, im):
    r = complex(re, im)
    coeffs = from_roots([r] * multiplicity).coeffs
    expected = [math.comb(multiplicity, j) * (-r) ** (multiplicity - j) for j in range(multiplicity + 1)]
    scale = (1 + abs(r)) ** multiplicity
    assert len(coeffs) == multiplicity + 1
    assert np.max(np.abs(coeffs - expected)) <= 1e-13 * scale
