import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..models import StabilityStatus
from ._constants import (
    FALSIFIER_BATCH,
    FALSIFIER_CERT_TOL,
    FALSIFIER_DIRECTION_FLOOR,
    FALSIFIER_IM_TOL,
    FALSIFIER_ROOT_ITERATIONS,
    FALSIFIER_SAMPLE_CAP,
    RESTRICT_DEAD_COEFF_REL,
    ROOTS_DEFAULT_TOL,
)
from ._errors import DimensionError, NullPolynomialError
from .polynomial_service import MultiPoly, UniPoly, as_point, evaluate, evaluation_scale, poly_mul
from .roots_service import roots_all, roots_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityVerdict:
    """
    Outcome of a stability test.

    A counterexample always carries a witness strictly inside the region with
    |P(witness)| within the certification tolerance. `no-counterexample-found`
    is the strongest outcome sampling can give.
    """

    status: StabilityStatus
    witness: Optional[tuple[complex, ...]]
    residual: Optional[float]
    trials: int
    seed: Optional[int]
    trial_index: Optional[int] = None


# --- Regions and rotation ---

def rotated_imag(theta: float, z: complex) -> float:
    """Im(exp(i*theta) * z), written out as x*sin(theta) + y*cos(theta)."""
    return z.real * math.sin(theta) + z.imag * math.cos(theta)


def _check_theta(theta: Sequence[float], num_vars: int) -> tuple[float, ...]:
    angles = tuple(float(t) for t in theta)
    if len(angles) != num_vars:
        raise DimensionError(f"theta has {len(angles)} angles, expected {num_vars}")
    if not all(math.isfinite(t) for t in angles):
        raise ValueError("theta must be finite")
    return angles


def in_region(theta: Sequence[float], z: Sequence[complex]) -> bool:
    """True iff Im(exp(i*theta_k) * z_k) > 0 for every k."""
    coords = as_point(z)
    angles = _check_theta(theta, len(coords))
    return all(rotated_imag(t, zk) > 0.0 for t, zk in zip(angles, coords))


def rotate_coords(p: MultiPoly, theta: Sequence[float]) -> MultiPoly:
    """Substitutes z_k = exp(-i*theta_k) u_k, so that z lies in the region iff every Im(u_k) > 0."""
    angles = _check_theta(theta, p.num_vars)
    rotated = {}
    for monomial, coeff in p.terms.items():
        phase = sum(t * e for t, e in zip(angles, monomial))
        rotated[monomial] = coeff * cmath.exp(-1j * phase)
    return MultiPoly.from_terms(p.num_vars, rotated)


def unrotate_point(theta: Sequence[float], u: Sequence[complex]) -> tuple[complex, ...]:
    return tuple(cmath.exp(-1j * t) * complex(uk) for t, uk in zip(theta, u))


# --- Univariate ---

def univariate_theta_stable(p: UniPoly, theta: float, tol: float = ROOTS_DEFAULT_TOL) -> StabilityVerdict:
    if p.is_null:
        raise NullPolynomialError("stability is not defined for the null polynomial")
    if p.degree == 0:
        return StabilityVerdict(StabilityStatus.stable_certified, None, None, 0, None)
    root_set = roots_all(p, tol)
    for r in root_set.roots:
        r = complex(r)
        if rotated_imag(theta, r) > tol * (1.0 + abs(r)):
            return StabilityVerdict(StabilityStatus.counterexample, (r,), abs(p(r)), 0, None)
    return StabilityVerdict(StabilityStatus.stable_certified, None, None, 0, None)


# --- Monte Carlo falsifier ---

def _ratio_of_uniforms(rng: np.random.Generator, size) -> np.ndarray:
    return np.minimum(rng.random(size) / (1.0 - rng.random(size)), FALSIFIER_SAMPLE_CAP)


def draw_lines(seed: int, start: int, stop: int, num_vars: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Base points x (real, symmetric heavy tails) and directions v (strictly positive) of trials start..stop-1.

    Trials are drawn in blocks of FALSIFIER_BATCH from default_rng([seed, block]), so the
    line of a trial depends only on the seed and the trial index.
    """
    xs, vs = [], []
    for block in range(start // FALSIFIER_BATCH, (stop - 1) // FALSIFIER_BATCH + 1):
        rng = np.random.default_rng([seed, block])
        shape = (FALSIFIER_BATCH, num_vars)
        x = _ratio_of_uniforms(rng, shape) * rng.choice([-1.0, 1.0], shape)
        v = np.maximum(_ratio_of_uniforms(rng, shape), FALSIFIER_DIRECTION_FLOOR)
        first = block * FALSIFIER_BATCH
        window = slice(max(start, first) - first, min(stop, first + FALSIFIER_BATCH) - first)
        xs.append(x[window])
        vs.append(v[window])
    return np.concatenate(xs), np.concatenate(vs)


def draw_line(seed: int, trial: int, num_vars: int) -> tuple[np.ndarray, np.ndarray]:
    xs, vs = draw_lines(seed, trial, trial + 1, num_vars)
    return xs[0], vs[0]


def _batched_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0], a.shape[1] + b.shape[1] - 1), dtype=complex)
    for i in range(b.shape[1]):
        out[:, i:i + a.shape[1]] += a * b[:, i:i + 1]
    return out


def line_restrictions(q: MultiPoly, xs: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """
    Coefficients in t of q(x + t*v) for a batch of lines.

    Each (x_j + t*v_j)^e is expanded binomially, then the factors of every
    monomial are multiplied out. Returns (B, total_degree+1), ascending.
    """
    batch = xs.shape[0]
    degree = q.total_degree
    powers: list[dict[int, np.ndarray]] = []
    for j in range(q.num_vars):
        table = {}
        for e in {m[j] for m in q.terms}:
            m = np.arange(e + 1)
            binom = np.array([math.comb(e, i) for i in m], dtype=float)
            table[e] = binom * xs[:, j:j + 1] ** (e - m) * vs[:, j:j + 1] ** m
        powers.append(table)

    g = np.zeros((batch, degree + 1), dtype=complex)
    for monomial, coeff in q.terms.items():
        poly = np.full((batch, 1), coeff, dtype=complex)
        for j, e in enumerate(monomial):
            if e:
                poly = _batched_convolve(poly, powers[j][e])
        g[:, :poly.shape[1]] += poly
    return g


def _root_scale(monic: np.ndarray) -> np.ndarray:
    """max_j |c_j|^(1/(n-j)) of each monic row; every root is within twice this radius."""
    n = monic.shape[1] - 1
    with np.errstate(divide="ignore"):
        bounds = np.abs(monic[:, :-1]) ** (1.0 / (n - np.arange(n)))[None, :]
    scale = np.max(bounds, axis=1)
    return np.where(scale > 0, scale, 1.0)


def _row_roots(g: np.ndarray) -> np.ndarray:
    """
    Roots of every row, NaN-padded to the common degree.

    Regular rows are rescaled so their roots have modulus about one before the batch
    solve; rows whose top coefficient cancelled are solved one by one.
    """
    batch, degree = g.shape[0], g.shape[1] - 1
    out = np.full((batch, degree), np.nan, dtype=complex)
    scale = np.max(np.abs(g), axis=1)
    regular = np.abs(g[:, -1]) > RESTRICT_DEAD_COEFF_REL * scale
    if regular.any():
        monic = g[regular] / g[regular, -1:]
        s = _root_scale(monic)
        with np.errstate(over="ignore", invalid="ignore"):
            scaled = np.where(monic != 0, monic * s[:, None] ** (np.arange(degree + 1) - degree)[None, :], 0)
        found, _, _ = roots_batch(scaled, FALSIFIER_ROOT_ITERATIONS)
        out[regular] = found * s[:, None]
    for row in np.flatnonzero(~regular):
        coeffs = g[row]
        alive = np.flatnonzero(np.abs(coeffs) >= RESTRICT_DEAD_COEFF_REL * scale[row])
        if alive.size == 0 or alive[-1] == 0:
            continue
        roots = roots_all(UniPoly(coeffs[: alive[-1] + 1])).roots
        out[row, :len(roots)] = roots
    return out


def mc_falsifier(p: MultiPoly, theta: Sequence[float], trials: int = 10000, seed: int = 0,
                 tol: float = FALSIFIER_IM_TOL, cert_tol: float = FALSIFIER_CERT_TOL) -> StabilityVerdict:
    """
    Searches for a zero of p inside the rotated product half-plane region.

    Works on q = rotate_coords(p, theta): every trial draws a real line x + t*v
    with v > 0 and solves q(x + t*v) = 0 in t. A root with Im(t) > tol*(1+|t|)
    maps to a point u with all Im(u_k) > 0; it is reported only after the
    corresponding z is confirmed to lie strictly in the region and
    |p(z)| <= cert_tol * evaluation_scale(p, z). The first certified trial
    index wins, so the verdict does not depend on batching.
    """
    if p.is_null:
        raise NullPolynomialError("stability is not defined for the null polynomial")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    angles = _check_theta(theta, p.num_vars)
    q = rotate_coords(p, angles)
    if q.total_degree <= 0:
        return StabilityVerdict(StabilityStatus.no_counterexample, None, None, trials, seed)

    for start in range(0, trials, FALSIFIER_BATCH):
        stop = min(start + FALSIFIER_BATCH, trials)
        xs, vs = draw_lines(seed, start, stop, p.num_vars)
        roots = _row_roots(line_restrictions(q, xs, vs))
        with np.errstate(invalid="ignore"):
            hits = roots.imag > tol * (1.0 + np.abs(roots))

        for offset in np.flatnonzero(hits.any(axis=1)):
            trial = start + int(offset)
            for t_star in sorted(roots[offset, hits[offset]], key=lambda t: -t.imag):
                u = xs[offset] + complex(t_star) * vs[offset]
                z = unrotate_point(angles, u)
                if not in_region(angles, z):
                    continue
                residual = abs(evaluate(p, z))
                if residual <= cert_tol * evaluation_scale(p, z):
                    logger.info("counterexample at trial %d (seed %d), residual %.3e", trial, seed, residual)
                    return StabilityVerdict(StabilityStatus.counterexample, z, residual, trial + 1, seed, trial)
        logger.debug("falsifier: %d/%d trials without a certified zero", stop, trials)

    return StabilityVerdict(StabilityStatus.no_counterexample, None, None, trials, seed)


# --- Fixtures stable by construction ---

def random_stable_factors(num_vars: int, degree: int, theta: Sequence[float], seed: int) -> list[MultiPoly]:
    """
    `degree` affine forms b + sum a_k u_k with a >= 0 (not all zero) and Im(b) >= 0,
    mapped back to z through u_k = exp(i*theta_k) z_k. None vanishes on the region.
    """
    if num_vars < 1 or degree < 1:
        raise ValueError("num_vars and degree must be >= 1")
    angles = _check_theta(theta, num_vars)
    rng = np.random.default_rng(seed)
    factors = []
    for _ in range(degree):
        used = rng.random(num_vars) < 0.7
        used[rng.integers(num_vars)] = True
        a = rng.uniform(0.1, 2.0, num_vars) * used
        b = complex(rng.normal(), rng.exponential())
        terms = {(0,) * num_vars: b}
        for k in range(num_vars):
            if a[k] > 0:
                exps = [0] * num_vars
                exps[k] = 1
                terms[tuple(exps)] = a[k]
        factor_u = MultiPoly.from_terms(num_vars, terms)
        factors.append(rotate_coords(factor_u, [-t for t in angles]))
    return factors


def random_stable_poly(num_vars: int, degree: int, theta: Sequence[float], seed: int) -> MultiPoly:
    product = None
    for factor in random_stable_factors(num_vars, degree, theta, seed):
        product = factor if product is None else poly_mul(product, factor)
    return product
