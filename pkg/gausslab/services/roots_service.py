import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..models import CriticalRegime, CubicSpec
from ._constants import (
    ROOTS_CLUSTER_FLOOR,
    ROOTS_CLUSTER_RADII,
    ROOTS_DEFAULT_TOL,
    ROOTS_INIT_PHASE,
    ROOTS_MAX_ITERATIONS,
    ROOTS_POLISH_STEPS,
    ROOTS_ROUNDOFF_FACTOR,
    ROOTS_STEP_REL,
)
from ._errors import DimensionError, NullPolynomialError
from .polynomial_service import UniPoly, as_point

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class RootSet:
    """All roots of a univariate polynomial with their certified residuals."""

    roots: np.ndarray
    residuals: np.ndarray
    scale: float
    converged: bool
    iterations: int
    tol: float

    @property
    def degree(self) -> int:
        return len(self.roots)

    def bounds(self) -> np.ndarray:
        return residual_bounds(self.scale, self.roots, self.degree, self.tol)


@dataclass(frozen=True, eq=False)
class RootCertificate:
    candidates: np.ndarray
    residuals: np.ndarray
    bounds: np.ndarray
    passed: np.ndarray

    @property
    def all_passed(self) -> bool:
        return bool(np.all(self.passed))


@dataclass(frozen=True)
class CubicCriticalPoints:
    points: tuple[complex, complex]
    regime: CriticalRegime
    discriminant: float


def residual_bounds(scale: float, roots: np.ndarray, degree: int, tol: float) -> np.ndarray:
    """tol * scale * max(1, |r|)**degree, the acceptance level for |p(r)|."""
    return tol * scale * np.maximum(1.0, np.abs(roots)) ** degree


# --- Simultaneous iteration ---

def _horner(coeffs: np.ndarray, z: np.ndarray):
    """Value, derivative and rounding-error bound of each row polynomial at each row of z."""
    n = coeffs.shape[1] - 1
    p = np.repeat(coeffs[:, n:n + 1], z.shape[1], axis=1).astype(complex)
    dp = np.zeros_like(z)
    err = np.abs(p)
    az = np.abs(z)
    for j in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, j:j + 1]
        err = err * az + np.abs(coeffs[:, j:j + 1])
    return p, dp, err


def _initial_guesses(monic: np.ndarray) -> np.ndarray:
    n = monic.shape[1] - 1
    radius = 1.0 + np.max(np.abs(monic[:, :-1]), axis=1)
    angles = 2.0 * np.pi * np.arange(n) / n + ROOTS_INIT_PHASE
    return radius[:, None] * np.exp(1j * angles)[None, :]


def inclusion_radii(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Radius n*|p/p'| around each estimate, widened by the rounding bound; the disc holds a root."""
    n = monic.shape[1] - 1
    p, dp, err = _horner(monic, z)
    with np.errstate(all="ignore"):
        radii = n * (np.abs(p) + ROOTS_ROUNDOFF_FACTOR * n * _EPS * err) / np.abs(dp)
    return np.where(dp != 0, radii, np.inf)


def _taylor_shift(coeffs: np.ndarray, center: complex) -> np.ndarray:
    """Ascending coefficients of p(center + w)."""
    shifted = coeffs[::-1].astype(complex)
    n = len(shifted) - 1
    for i in range(n):
        for j in range(1, n - i + 1):
            shifted[j] += center * shifted[j - 1]
    return shifted[::-1]


def _encloses_cluster(coeffs: np.ndarray, members: np.ndarray) -> bool:
    """True when some disc around the members' centroid holds exactly len(members) roots."""
    m = len(members)
    center = complex(np.mean(members))
    spread = max(float(np.max(np.abs(members - center))), ROOTS_CLUSTER_FLOOR * (1.0 + abs(center)))
    weights = np.abs(_taylor_shift(coeffs, center))
    powers = np.arange(len(weights))
    for factor in ROOTS_CLUSTER_RADII:
        terms = weights * (factor * spread) ** powers
        if terms[m] > terms.sum() - terms[m]:
            return True
    return False


def _components(adjacency: np.ndarray) -> list[list[int]]:
    seen: set[int] = set()
    groups = []
    for start in range(len(adjacency)):
        if start in seen:
            continue
        seen.add(start)
        stack, group = [start], []
        while stack:
            i = stack.pop()
            group.append(i)
            for j in np.flatnonzero(adjacency[i]).tolist():
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        groups.append(sorted(group))
    return groups


def _false_clusters(monic: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    Flags estimates that share a root with a neighbour.

    Estimates whose inclusion discs overlap form a cluster. A cluster of m estimates
    stands only when a disc around it provably holds m roots (a multiple or tightly
    clustered root); otherwise its members have collapsed onto fewer roots.
    """
    suspect = np.zeros(z.shape, dtype=bool)
    n = z.shape[1]
    if n < 2:
        return suspect
    radii = inclusion_radii(monic, z)
    with np.errstate(all="ignore"):
        overlap = np.abs(z[:, :, None] - z[:, None, :]) <= radii[:, :, None] + radii[:, None, :]
        overlap[:, np.arange(n), np.arange(n)] = False
        for row in np.flatnonzero(overlap.any(axis=(1, 2))):
            for members in _components(overlap[row]):
                if len(members) > 1 and not _encloses_cluster(monic[row], z[row, members]):
                    suspect[row, members] = True
    return suspect


def roots_batch(coeffs: np.ndarray, max_iter: int = ROOTS_MAX_ITERATIONS):
    """
    Aberth-Ehrlich iteration on a batch of polynomials of one common degree n >= 1.

    An estimate freezes once its residual reaches the rounding level. Before the batch
    stops, frozen estimates that collapsed onto one root are woken up again, and a row
    only counts as converged when none of its estimates is left in a false cluster.

    Args:
        coeffs: (B, n+1) ascending coefficients with nonzero last column.
        max_iter: iteration cap.

    Returns:
        (roots (B, n), converged (B,), iterations)
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    monic = coeffs / coeffs[:, -1:]
    n = monic.shape[1] - 1
    z = _initial_guesses(monic)
    active = np.ones(z.shape, dtype=bool)
    diag = np.arange(n)
    spin = np.exp(1j * (ROOTS_INIT_PHASE + 2.0 * np.pi * diag / n))[None, :]
    iterations = 0

    with np.errstate(all="ignore"):
        for iterations in range(1, max_iter + 1):
            p, dp, err = _horner(monic, z)
            active &= ~(np.abs(p) <= ROOTS_ROUNDOFF_FACTOR * n * _EPS * err)
            if not active.any():
                suspect = _false_clusters(monic, z)
                if not suspect.any():
                    break
                logger.debug("waking %d collided root estimates", int(suspect.sum()))
                active |= suspect
            diff = z[:, :, None] - z[:, None, :]
            diff[:, diag, diag] = np.inf
            repulsion = np.sum(1.0 / diff, axis=2)
            ratio = p / dp
            step = ratio / (1.0 - ratio * repulsion)
            stuck = ~np.isfinite(step) | ~np.isfinite(repulsion)
            if stuck.any():
                nudge = 1e-8 * (1.0 + np.abs(z)) * spin
                step = np.where(stuck, nudge, step)
            step = np.where(active, step, 0.0)
            z = z - step
            active &= ~(np.abs(step) <= ROOTS_STEP_REL * (1.0 + np.abs(z)))
        else:
            p, _, err = _horner(monic, z)
            active &= ~(np.abs(p) <= ROOTS_ROUNDOFF_FACTOR * n * _EPS * err)

        for _ in range(ROOTS_POLISH_STEPS):
            p, dp, _ = _horner(monic, z)
            candidate = z - p / dp
            usable = np.isfinite(candidate)
            candidate = np.where(usable, candidate, z)
            p_new, _, _ = _horner(monic, candidate)
            z = np.where(usable & (np.abs(p_new) < np.abs(p)), candidate, z)

    collided = _false_clusters(monic, z)
    return z, ~(active | collided).any(axis=1), iterations


def _sorted(roots: np.ndarray) -> np.ndarray:
    return roots[np.lexsort((roots.imag, roots.real))]


def roots_all(p: UniPoly, tol: float = ROOTS_DEFAULT_TOL, max_iter: int = ROOTS_MAX_ITERATIONS) -> RootSet:
    """
    Finds every root of p, zero roots from trailing zero coefficients included.

    Raises:
        NullPolynomialError: p is identically zero.
        ValueError: p is a nonzero constant.
    """
    if p.is_null:
        raise NullPolynomialError("null polynomial has no root set")
    if p.degree == 0:
        raise ValueError("no roots: polynomial is a nonzero constant")

    coeffs = p.coeffs
    zeros_at_origin = int(np.flatnonzero(coeffs)[0])
    reduced = coeffs[zeros_at_origin:]
    n = len(reduced) - 1
    iterations = 0
    converged = True
    if n == 0:
        found = np.zeros(0, dtype=complex)
    elif n == 1:
        found = np.array([-reduced[0] / reduced[1]])
    else:
        batch, ok, iterations = roots_batch(reduced[None, :], max_iter)
        found, converged = batch[0], bool(ok[0])
    roots = _sorted(np.concatenate([np.zeros(zeros_at_origin, dtype=complex), found]))

    residuals = np.abs(p(roots))
    scale = p.coefficient_scale()
    certified = residuals <= residual_bounds(scale, roots, p.degree, tol)
    converged = converged and bool(np.all(certified))
    if not converged:
        logger.warning("root finder did not converge for degree %d after %d iterations "
                       "(worst residual %.3e)", p.degree, iterations, float(residuals.max()))
    return RootSet(roots, residuals, scale, converged, iterations, tol)


def certify_roots(p: UniPoly, candidates: Sequence[complex], tol: float = ROOTS_DEFAULT_TOL) -> RootCertificate:
    """Pure evaluation: residual of every candidate against the roots_all acceptance level."""
    if p.is_null:
        raise NullPolynomialError("cannot certify roots of the null polynomial")
    points = np.array(as_point(candidates), dtype=complex)
    residuals = np.abs(p(points)) if len(points) else np.zeros(0)
    bounds = residual_bounds(p.coefficient_scale(), points, p.degree, tol)
    return RootCertificate(points, residuals, bounds, residuals <= bounds)


def match_roots(found: Sequence[complex], expected: Sequence[complex]) -> tuple[float, list[tuple[int, int]]]:
    """Optimal one-to-one matching by distance; returns the worst matched error and the pairs."""
    found = np.asarray(found, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    if len(found) != len(expected):
        raise DimensionError(f"cannot match {len(found)} roots against {len(expected)}")
    if len(found) == 0:
        return 0.0, []
    cost = np.abs(found[:, None] - expected[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()), list(zip(rows.tolist(), cols.tolist()))


def cubic_derivative_roots(spec: CubicSpec) -> CubicCriticalPoints:
    """
    Critical points of (z-c)((z-a)^2+b^2) in closed form.

    The two points are (2a+c)/3 +/- sqrt(3b^2-(a-c)^2)/3 times i while that
    radicand is positive; otherwise they are the real pair
    (2a+c)/3 +/- sqrt((a-c)^2-3b^2)/3 and the regime is real-critical.
    """
    a, b, c = spec.a, spec.b, spec.c
    if b == 0:
        raise ValueError("b must be nonzero")
    center = (2.0 * a + c) / 3.0
    discriminant = 3.0 * b * b - (a - c) ** 2
    if discriminant > 0:
        half = math.sqrt(discriminant) / 3.0
        return CubicCriticalPoints((complex(center, half), complex(center, -half)),
                                   CriticalRegime.complex_critical, discriminant)
    half = math.sqrt(-discriminant) / 3.0
    return CubicCriticalPoints((complex(center + half, 0.0), complex(center - half, 0.0)),
                               CriticalRegime.real_critical, discriminant)
