import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausslab.models import StabilityStatus
from gausslab.services._errors import DimensionError, NullPolynomialError
from gausslab.services.parser_service import parse_poly
from gausslab.services.polynomial_service import MultiPoly, evaluate, evaluation_scale, from_roots
from gausslab.services.stability_service import (
    _row_roots,
    draw_line,
    draw_lines,
    in_region,
    line_restrictions,
    mc_falsifier,
    random_stable_factors,
    random_stable_poly,
    rotate_coords,
    rotated_imag,
    univariate_theta_stable,
    unrotate_point,
)


def test_region_membership_is_strict():
    assert in_region((0, 0), (1j, 2 + 1j))
    assert not in_region((0, 0), (1j, 1))
    assert not in_region((0,), (-1j,))
    # theta = pi turns the upper half-plane into the lower one
    assert in_region((math.pi,), (-1j,))
    with pytest.raises(DimensionError):
        in_region((0,), (1j, 1j))


def test_rotated_imag_matches_definition():
    z = complex(0.3, -1.2)
    theta = 0.7
    assert rotated_imag(theta, z) == pytest.approx((np.exp(1j * theta) * z).imag)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_rotate_coords_is_a_change_of_variables(seed):
    rng = np.random.default_rng(seed)
    p = parse_poly("z1^2*z2 - 3i*z2 + z1 + 2")
    theta = rng.uniform(-math.pi, math.pi, 2)
    u = tuple(complex(x, y) for x, y in rng.normal(size=(2, 2)))
    lhs = evaluate(rotate_coords(p, theta), u)
    rhs = evaluate(p, unrotate_point(theta, u))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_univariate_stability_by_roots():
    assert univariate_theta_stable(from_roots([-1j]), 0).status is StabilityStatus.stable_certified
    verdict = univariate_theta_stable(from_roots([1j, 2]), 0)
    assert verdict.status is StabilityStatus.counterexample
    assert verdict.witness[0] == pytest.approx(1j)
    assert univariate_theta_stable(from_roots([-1j]), math.pi).status is StabilityStatus.counterexample
    assert univariate_theta_stable(from_roots([]), 0).status is StabilityStatus.stable_certified
    # a root on the boundary line is not in the open region
    assert univariate_theta_stable(from_roots([3.0]), 0).status is StabilityStatus.stable_certified


def test_draw_line_is_deterministic_and_positive():
    x1, v1 = draw_line(7, 3, 4)
    x2, v2 = draw_line(7, 3, 4)
    assert np.array_equal(x1, x2) and np.array_equal(v1, v2)
    assert np.all(v1 > 0)
    assert np.all(np.abs(x1) <= 1e6)
    x3, _ = draw_line(7, 4, 4)
    assert not np.array_equal(x1, x3)


def test_line_restrictions_expand_binomially():
    q = parse_poly("z1*z2 + 1")
    rows = line_restrictions(q, np.array([[1.0, 2.0]]), np.array([[3.0, 4.0]]))
    # (1 + 3t)(2 + 4t) + 1 = 3 + 10t + 12t^2
    assert np.array_equal(rows, np.array([[3, 10, 12]], dtype=complex))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_falsifier_finds_the_planted_zero(seed):
    p = parse_poly("z1*z2 + 1")
    verdict = mc_falsifier(p, (0, 0), trials=1000, seed=seed)
    assert verdict.status is StabilityStatus.counterexample
    assert in_region((0, 0), verdict.witness)
    assert verdict.residual <= 1e-8 * evaluation_scale(p, verdict.witness)
    assert 0 <= verdict.trial_index < 1000


def test_falsifier_is_deterministic():
    p = parse_poly("z1*z2 + 1")
    first = mc_falsifier(p, (0, 0), trials=200, seed=5)
    second = mc_falsifier(p, (0, 0), trials=200, seed=5)
    assert first == second


def test_falsifier_on_stable_polynomials():
    p = random_stable_poly(2, 3, (0.0, 0.0), seed=11)
    verdict = mc_falsifier(p, (0.0, 0.0), trials=500, seed=0)
    assert verdict.status is StabilityStatus.no_counterexample
    assert verdict.witness is None
    assert verdict.trials == 500

    theta = (0.4, -1.1, 2.5)
    q = random_stable_poly(3, 2, theta, seed=3)
    assert mc_falsifier(q, theta, trials=300, seed=1).status is StabilityStatus.no_counterexample


def test_falsifier_input_errors():
    with pytest.raises(NullPolynomialError):
        mc_falsifier(MultiPoly.null(2), (0, 0))
    with pytest.raises(DimensionError):
        mc_falsifier(parse_poly("z1"), (0, 0))
    with pytest.raises(ValueError):
        mc_falsifier(parse_poly("z1"), (0,), trials=0)
    assert mc_falsifier(parse_poly("5"), (0,)).status is StabilityStatus.no_counterexample


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), num_vars=st.integers(1, 3))
def test_stable_factors_have_positive_imaginary_part_on_the_region(seed, num_vars):
    rng = np.random.default_rng(seed)
    theta = rng.uniform(-math.pi, math.pi, num_vars)
    u = tuple(complex(x, y) for x, y in zip(rng.normal(size=num_vars), rng.uniform(0.5, 2.0, num_vars)))
    z = unrotate_point(theta, u)
    assert in_region(theta, z)
    for factor in random_stable_factors(num_vars, 3, theta, seed):
        assert evaluate(factor, z).imag > 0


def test_draw_lines_match_single_draws_across_blocks():
    xs, vs = draw_lines(7, 2040, 2060, 3)
    assert xs.shape == vs.shape == (20, 3)
    for offset, trial in enumerate(range(2040, 2060)):
        x, v = draw_line(7, trial, 3)
        assert np.array_equal(xs[offset], x)
        assert np.array_equal(vs[offset], v)


def test_row_roots_rescale_and_pad():
    wide = from_roots([1e5, -2e5 + 1e5j]).coeffs
    dead_top = np.array([1, 1, 0], dtype=complex)
    roots = _row_roots(np.array([wide, dead_top]))
    assert roots.shape == (2, 2)
    assert np.allclose(np.sort_complex(roots[0]), [-2e5 + 1e5j, 1e5], rtol=1e-10, atol=0)
    assert roots[1, 0] == pytest.approx(-1)
    assert np.isnan(roots[1, 1])


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-1e3, 1e3), lift=st.floats(1e-12, 1e-3))
def test_region_is_open_at_its_boundary(x, lift):
    assert not in_region((0.0,), (complex(x),))
    assert in_region((0.0,), (complex(x, lift),))
    assert not in_region((0.0, 0.0), (complex(x, lift), complex(x)))


@pytest.mark.parametrize("text", ["z1", "z1*z2"])
def test_boundary_zeros_are_not_counterexamples(text):
    verdict = mc_falsifier(parse_poly(text), [0.0] * parse_poly(text).num_vars, trials=3000, seed=1)
    assert verdict.status is StabilityStatus.no_counterexample
