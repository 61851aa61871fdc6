import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gausslab.models import CriticalRegime, CubicSpec
from gausslab.services._errors import DimensionError, NullPolynomialError
from gausslab.services.polynomial_service import UniPoly, from_roots
from gausslab.services.roots_service import (
    _false_clusters,
    certify_roots,
    cubic_derivative_roots,
    inclusion_radii,
    match_roots,
    roots_all,
    roots_batch,
)


def test_roots_of_a_factored_cubic():
    found = roots_all(from_roots([2, 1j, -1j]))
    error, _ = match_roots(found.roots, [2, 1j, -1j])
    assert found.converged
    assert error <= 1e-10
    assert np.all(found.residuals <= found.bounds())


def test_roots_are_sorted_by_real_then_imaginary_part():
    found = roots_all(from_roots([1, -1j, 1j, -2]))
    keys = [(r.real, r.imag) for r in found.roots]
    assert keys == sorted(keys)


def test_trailing_zero_coefficients_give_exact_zero_roots():
    # 3 w^2 has a double root at the origin
    found = roots_all(UniPoly(np.array([0, 0, 3])))
    assert list(found.roots) == [0, 0]
    assert found.converged


def test_linear_polynomial_is_solved_directly():
    found = roots_all(UniPoly(np.array([-4, 2])))
    assert found.roots[0] == 2
    assert found.iterations == 0


def test_multiple_roots_still_converge():
    found = roots_all(from_roots([2, 2, 2, 2]))
    assert found.converged
    assert np.max(np.abs(found.roots - 2)) < 1e-3


def test_null_and_constant_polynomials_are_rejected():
    with pytest.raises(NullPolynomialError):
        roots_all(UniPoly(np.zeros(0)))
    with pytest.raises(ValueError):
        roots_all(UniPoly(np.array([5])))


def test_certify_roots_is_pure_evaluation():
    p = from_roots([1, 2])
    cert = certify_roots(p, [1, 2, 3])
    assert list(cert.passed) == [True, True, False]
    assert not cert.all_passed
    with pytest.raises(NullPolynomialError):
        certify_roots(UniPoly(np.zeros(0)), [0])


def test_match_roots_pairs_optimally():
    error, pairs = match_roots([1.0, 5.0], [5.1, 1.0])
    assert error == pytest.approx(0.1)
    assert sorted(pairs) == [(0, 1), (1, 0)]
    with pytest.raises(DimensionError):
        match_roots([1], [1, 2])
    assert match_roots([], []) == (0.0, [])


def test_roots_batch_handles_several_rows():
    coeffs = np.array([from_roots([1, 2, 3]).coeffs, from_roots([-1, 1j, 4]).coeffs])
    roots, converged, iterations = roots_batch(coeffs)
    assert converged.all()
    assert iterations >= 1
    assert match_roots(roots[0], [1, 2, 3])[0] < 1e-9
    assert match_roots(roots[1], [-1, 1j, 4])[0] < 1e-9


def test_cubic_critical_points_complex_regime():
    crit = cubic_derivative_roots(CubicSpec(a=0, b=1, c=0))
    assert crit.regime is CriticalRegime.complex_critical
    expected = [1j / math.sqrt(3), -1j / math.sqrt(3)]
    assert match_roots(crit.points, expected)[0] < 1e-15


def test_cubic_critical_points_real_regime():
    crit = cubic_derivative_roots(CubicSpec(a=0, b=1, c=2))
    assert crit.regime is CriticalRegime.real_critical
    assert match_roots(crit.points, [1 / 3, 1])[0] < 1e-15


def test_cubic_spec_requires_nonreal_pair():
    with pytest.raises(ValueError):
        CubicSpec(a=0, b=0, c=1)
    with pytest.raises(ValueError):
        CubicSpec(a=math.nan, b=1, c=1)


def _disc_roots(rng, degree, radius, gap, start=()):
    expected = list(start)
    while len(expected) < degree:
        # uniform in the disc, at least gap apart
        r, angle = radius * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        z = r * complex(math.cos(angle), math.sin(angle))
        if all(abs(z - e) >= gap for e in expected):
            expected.append(z)
    return expected


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), degree=st.integers(1, 10))
def test_from_roots_round_trip(seed, degree):
    expected = _disc_roots(np.random.default_rng(seed), degree, radius=10.0, gap=1e-2)
    found = roots_all(from_roots(expected))
    assert found.converged
    assert match_roots(found.roots, expected)[0] <= 1e-8


def test_tight_cluster_far_from_the_origin_is_resolved():
    center = 0.6927 - 7.0271j
    expected = [center, center + 0.01, center + 0.01j,
                3 + 2j, -4 + 5j, 6 + 6j, -8 + 1j, 1 + 8j, 7 - 1j, -2 - 3j]
    found = roots_all(from_roots(expected))
    assert found.converged
    assert match_roots(found.roots, expected)[0] <= 1e-6
    gaps = np.abs(found.roots[:, None] - found.roots[None, :]) + np.eye(len(expected))
    assert gaps.min() > 5e-3


def test_collapsed_estimates_are_not_reported_converged():
    # two estimates parked on the root 1 while the root 1.01 has none
    monic = from_roots([1.0, 1.01, 5.0]).coeffs[None, :]
    estimates = np.array([[1.0, 1.0 + 1e-12, 5.0]])
    assert _false_clusters(monic, estimates).tolist() == [[True, True, False]]
    honest = np.array([[1.0, 1.01, 5.0]])
    assert not _false_clusters(monic, honest).any()


def test_multiple_root_cluster_is_accepted():
    monic = from_roots([2, 2, 2]).coeffs[None, :]
    estimates = 2 + 1e-5 * np.exp(2j * np.pi * np.arange(3) / 3)[None, :]
    assert not _false_clusters(monic, estimates).any()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), size=st.integers(2, 3), degree=st.integers(4, 10))
def test_planted_clusters_are_found_or_flagged(seed, size, degree):
    rng = np.random.default_rng(seed)
    center = complex(*rng.uniform(-7.0, 7.0, 2))
    cluster = [center + 0.01 * np.exp(2j * np.pi * (k / size + rng.random())) for k in range(size)]
    expected = _disc_roots(rng, degree, radius=10.0, gap=1e-2, start=cluster)
    p = from_roots(expected)
    found = roots_all(p)
    if not found.converged:
        return
    monic = (p.coeffs / p.coeffs[-1])[None, :]
    allowance = np.maximum(1e-8, inclusion_radii(monic, found.roots[None, :])[0])
    _, pairs = match_roots(found.roots, expected)
    for i, j in pairs:
        assert abs(found.roots[i] - expected[j]) <= allowance[i]


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), pairs=st.integers(0, 4), reals=st.integers(0, 2))
def test_real_polynomials_have_conjugate_symmetric_roots(seed, pairs, reals):
    rng = np.random.default_rng(seed)
    expected: list[complex] = []
    while len(expected) < 2 * pairs:
        z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
        if all(abs(z - e) >= 0.2 for e in expected):
            expected += [z, z.conjugate()]
    while len(expected) < 2 * pairs + reals:
        x = complex(rng.uniform(-3, 3))
        if all(abs(x - e) >= 0.2 for e in expected):
            expected.append(x)
    if not expected:
        expected = [1.0]
    p = UniPoly(from_roots(expected).coeffs.real)
    found = roots_all(p)
    assert found.converged
    assert match_roots(found.roots, np.conj(found.roots))[0] <= 1e-9


@settings(max_examples=100, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(0.1, 3), c=st.floats(-3, 3))
def test_closed_form_agrees_with_root_finder(a, b, c):
    spec = CubicSpec(a=a, b=b, c=c)
    crit = cubic_derivative_roots(spec)
    if abs(crit.discriminant) < 1e-6:
        return
    numeric = roots_all(from_roots([complex(a, b), complex(a, -b), c]).derivative())
    assert match_roots(crit.points, numeric.roots)[0] <= 1e-9
