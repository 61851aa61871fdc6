import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..models import CriticalRegime, CubicSpec, SectionOutcome, StabilityStatus, Verdict
from ._constants import (
    BOX_CONTAINS_TOL,
    COMPLEMENT_AGREEMENT_POINTS,
    FALSIFIER_CERT_TOL,
    FALSIFIER_IM_TOL,
    HULL_TOL_REL,
    WITNESS_TOL,
)
from ._errors import HypothesisViolation, NotCriticalPointError, NullPolynomialError
from .geometry_service import (
    BoxUnion,
    ConvexPolygon,
    HullMembership,
    Point2,
    box_union_contains,
    compress_axis,
    convex_hull_2d,
    point_in_hull,
    points_from_complex,
    recti_hull,
    same_region,
)
from .polynomial_service import (
    MultiPoly,
    UniPoly,
    as_point,
    evaluate,
    evaluation_scale,
    from_roots,
    partial_derivative,
    restrict,
)
from .roots_service import RootSet, cubic_derivative_roots, roots_all
from .stability_service import StabilityVerdict, in_region, mc_falsifier, rotated_imag

logger = logging.getLogger(__name__)


# ===================================================================
# Univariate Gauss-Lucas
# ===================================================================

@dataclass(frozen=True)
class GaussLucasCheck:
    verdict: Verdict
    roots: RootSet
    critical: RootSet
    hull: ConvexPolygon
    memberships: tuple[HullMembership, ...]

    @property
    def worst_distance(self) -> float:
        return min(m.signed_distance for m in self.memberships)


def check_gauss_lucas(p: UniPoly, tol: float = HULL_TOL_REL) -> GaussLucasCheck:
    """Every root of p' must lie in the convex hull of the roots of p."""
    if p.degree < 2:
        raise ValueError("Gauss-Lucas check needs degree >= 2")
    roots = roots_all(p)
    critical = roots_all(p.derivative())
    hull = convex_hull_2d(points_from_complex(roots.roots))
    memberships = tuple(point_in_hull(hull, Point2.from_complex(w), tol) for w in critical.roots)

    if not (roots.converged and critical.converged):
        verdict = Verdict.inconclusive
    elif all(m.contained for m in memberships):
        verdict = Verdict.passed
    else:
        verdict = Verdict.failed
    return GaussLucasCheck(verdict, roots, critical, hull, memberships)


# ===================================================================
# Section witnesses for critical points of one partial derivative
# ===================================================================

@dataclass(frozen=True)
class SectionWitness:
    """
    Evidence that z lies in the separately convex hull of the zero set of p.

    f is p restricted to the k-th coordinate line through z. Since f'(z_k) is
    the k-th partial derivative at z, z_k lies in the planar hull of the roots
    of f, and every separately convex set containing the zeros of p contains
    that hull in its section.
    """

    k: int
    z: tuple[complex, ...]
    outcome: SectionOutcome
    restriction: UniPoly
    derivative_residual: float
    roots_of_f: Optional[RootSet] = None
    hull: Optional[ConvexPolygon] = None
    membership: Optional[HullMembership] = None


@dataclass(frozen=True)
class SectionCriticalPoints:
    points: list[tuple[complex, ...]]
    degenerate: bool


def _others(coords: tuple[complex, ...], k: int) -> tuple[complex, ...]:
    return coords[: k - 1] + coords[k:]


def _lift(others: Sequence[complex], k: int, w: complex) -> tuple[complex, ...]:
    others = tuple(complex(z) for z in others)
    return others[: k - 1] + (complex(w),) + others[k - 1:]


def verify_section_witness(p: MultiPoly, k: int, z: Sequence[complex], tol: float = WITNESS_TOL) -> SectionWitness:
    """
    Certifies a critical point of the k-th partial derivative through its coordinate section.

    Raises:
        HypothesisViolation: the k-th partial derivative is null.
        NotCriticalPointError: |Q_k(z)| exceeds tol * evaluation_scale(Q_k, z).
    """
    coords = as_point(z, p.num_vars)
    qk = partial_derivative(p, k)
    if qk.is_null:
        raise HypothesisViolation(f"hypothesis violated: the partial derivative in z{k} is null")
    residual = abs(evaluate(qk, coords))
    if residual > tol * evaluation_scale(qk, coords):
        raise NotCriticalPointError(f"|Q_{k}(z)| = {residual:.3e} is not numerically zero")

    f = restrict(p, k, _others(coords, k))
    zk = coords[k - 1]
    if f.degree <= 0:
        logger.debug("section through %s in z%d is %s", coords, k, "null" if f.is_null else "constant")
        return SectionWitness(k, coords, SectionOutcome.degenerate, f, residual)

    derivative_residual = abs(f.derivative()(zk))
    roots = roots_all(f)
    hull = convex_hull_2d(points_from_complex(roots.roots))
    membership = point_in_hull(hull, Point2.from_complex(zk), tol)
    if not roots.converged:
        outcome = SectionOutcome.inconclusive
    elif membership.contained:
        outcome = SectionOutcome.passed
    else:
        outcome = SectionOutcome.failed
    return SectionWitness(k, coords, outcome, f, derivative_residual, roots, hull, membership)


def find_section_critical_points(p: MultiPoly, k: int, others: Sequence[complex],
                                 tol: float = WITNESS_TOL) -> SectionCriticalPoints:
    """Roots of the derivative of the section polynomial, lifted back into C^M."""
    f = restrict(p, k, others)
    if f.degree <= 0:
        return SectionCriticalPoints([], True)
    f_prime = f.derivative()
    if f_prime.degree <= 0:
        return SectionCriticalPoints([], False)

    qk = partial_derivative(p, k)
    points = []
    for w in roots_all(f_prime).roots:
        z = _lift(others, k, w)
        if abs(evaluate(qk, z)) <= tol * evaluation_scale(qk, z):
            points.append(z)
        else:
            logger.warning("section critical point %s fails the |Q_%d| test; dropped", z, k)
    return SectionCriticalPoints(points, False)


def verify_common_critical_point(p: MultiPoly, z: Sequence[complex], tol: float = WITNESS_TOL) -> list[SectionWitness]:
    """A common critical point is checked through the section of every non-null partial derivative."""
    witnesses = []
    for k in range(1, p.num_vars + 1):
        if partial_derivative(p, k).is_null:
            continue
        witnesses.append(verify_section_witness(p, k, z, tol))
    return witnesses


# ===================================================================
# Separate convexity of the complement of the rotated region
# ===================================================================

@dataclass(frozen=True)
class ComplementConvexityReport:
    k: int
    c: float
    samples: int
    violations: int
    agreement_points: int
    disagreements: int

    @property
    def case(self) -> str:
        return "half-plane" if self.c > 0 else "plane"

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.disagreements == 0


def _sample_plane(rng: np.random.Generator, n: int) -> np.ndarray:
    scale = 10.0 ** rng.uniform(-2.0, 2.0, n)
    return rng.normal(size=(n, 2)) * scale[:, None]


def verify_complement_convexity(theta: Sequence[float], k: int, fixed: Sequence[complex],
                                samples: int = 100_000, seed: int = 0,
                                agreement_points: int = COMPLEMENT_AGREEMENT_POINTS) -> ComplementConvexityReport:
    """
    Checks that the k-th section of the complement of the region is convex.

    With c the minimum of Im(exp(i*theta_j) z_j) over the fixed coordinates
    (infinite when there are none), the section is
    {x+iy : min(x*sin(theta_k) + y*cos(theta_k), c) <= 0}: a closed half-plane
    when c > 0 and the whole plane otherwise. Midpoints of sampled pairs must
    stay inside, and the formula must agree with the region definition.
    """
    angles = tuple(float(t) for t in theta)
    if not 1 <= k <= len(angles):
        raise ValueError(f"k must lie in 1..{len(angles)}")
    others = as_point(fixed, len(angles) - 1)
    other_angles = angles[: k - 1] + angles[k:]
    c = min((rotated_imag(t, zj) for t, zj in zip(other_angles, others)), default=math.inf)
    sin_k, cos_k = math.sin(angles[k - 1]), math.cos(angles[k - 1])

    def in_section(pts: np.ndarray) -> np.ndarray:
        return np.minimum(pts[:, 0] * sin_k + pts[:, 1] * cos_k, c) <= 0.0

    rng = np.random.default_rng(seed)
    violations = 0
    remaining = samples
    while remaining > 0:
        batch = _sample_plane(rng, 4 * min(remaining, 50_000))
        inside = batch[in_section(batch)]
        pairs = min(remaining, len(inside) // 2)
        first, second = inside[:pairs], inside[pairs: 2 * pairs]
        violations += int(np.count_nonzero(~in_section((first + second) / 2.0)))
        remaining -= pairs

    points = _sample_plane(rng, agreement_points)
    predicted = in_section(points)
    disagreements = 0
    for (x, y), expected in zip(points, predicted):
        z = _lift(others, k, complex(x, y))
        if (not in_region(angles, z)) != bool(expected):
            disagreements += 1

    report = ComplementConvexityReport(k, c, samples, violations, agreement_points, disagreements)
    logger.info("complement section (%s, c=%s): %d violations, %d disagreements",
                report.case, c, violations, disagreements)
    return report


# ===================================================================
# Stability of partial derivatives
# ===================================================================

@dataclass(frozen=True)
class DerivativeStabilityReport:
    verdict: Verdict
    outcome: str  # pass | fail | hypothesis-violated | skipped
    k: int
    input_verdict: StabilityVerdict
    derivative_verdict: Optional[StabilityVerdict] = None
    note: str = ""


def verify_derivative_stability(p: MultiPoly, theta: Sequence[float], k: int, trials: int = 10000,
                                seed: int = 0, tol: float = FALSIFIER_IM_TOL,
                                cert_tol: float = FALSIFIER_CERT_TOL) -> DerivativeStabilityReport:
    """
    Falsifies stability of p (it should survive), then of its k-th partial derivative.

    tol screens candidate roots by imaginary part; cert_tol is the residual level a
    witness must reach before it counts as a zero in the region.
    """
    if p.is_null:
        raise NullPolynomialError("stability is not defined for the null polynomial")
    input_verdict = mc_falsifier(p, theta, trials, seed, tol, cert_tol)
    if input_verdict.status is StabilityStatus.counterexample:
        return DerivativeStabilityReport(Verdict.failed, "hypothesis-violated", k, input_verdict,
                                         note="input polynomial has a certified zero in the region")
    qk = partial_derivative(p, k)
    if qk.is_null:
        return DerivativeStabilityReport(Verdict.inconclusive, "skipped", k, input_verdict,
                                         note=f"partial derivative in z{k} is null")
    derivative_verdict = mc_falsifier(qk, theta, trials, seed, tol, cert_tol)
    if derivative_verdict.status is StabilityStatus.counterexample:
        return DerivativeStabilityReport(Verdict.failed, "fail", k, input_verdict, derivative_verdict,
                                         note="partial derivative has a certified zero in the region")
    return DerivativeStabilityReport(Verdict.passed, "pass", k, input_verdict, derivative_verdict)


# ===================================================================
# Rectilinear hulls of cubic and quadratic root sets
# ===================================================================

@dataclass(frozen=True)
class CubicReport:
    spec: CubicSpec
    regime: CriticalRegime
    critical_points: tuple[complex, complex]
    h1: BoxUnion
    contained: bool
    axis_aligned_roots: bool
    iff_holds: bool

    @property
    def within_premise(self) -> bool:
        """The iff is only claimed while the critical points are non-real."""
        return self.regime is CriticalRegime.complex_critical


def _single_line(values: Sequence[float]) -> bool:
    lines, _ = compress_axis(np.asarray(values, dtype=float))
    return len(lines) == 1


def classify_cubic(spec: CubicSpec, tol: float = BOX_CONTAINS_TOL) -> CubicReport:
    """
    Roots a+bi, a-bi, c: critical points lie in the rectilinear hull iff the
    roots share a vertical line (a = c), as long as the critical points are
    non-real. In the real-critical regime the report is still produced.
    """
    roots = [(spec.a, spec.b), (spec.a, -spec.b), (spec.c, 0.0)]
    h1 = recti_hull(roots, 2)
    critical = cubic_derivative_roots(spec)
    contained = all(box_union_contains(h1, (w.real, w.imag), tol) for w in critical.points)
    aligned = _single_line([x for x, _ in roots])
    if critical.regime is CriticalRegime.real_critical:
        logger.info("cubic %s: real critical points, outside the regime the iff is stated for", spec)
    return CubicReport(spec, critical.regime, critical.points, h1, contained, aligned, contained == aligned)


@dataclass(frozen=True)
class QuadraticReport:
    roots: tuple[complex, complex]
    critical_point: complex
    h1: BoxUnion
    contained: bool
    axis_aligned_roots: bool
    components: int
    degenerate: bool = False

    @property
    def connected(self) -> bool:
        return self.components == 1

    @property
    def iff_holds(self) -> bool:
        return self.contained == self.axis_aligned_roots


def classify_quadratic(r1: complex, r2: complex, tol: float = BOX_CONTAINS_TOL) -> QuadraticReport:
    r1, r2 = as_point((r1, r2))
    points = [(r1.real, r1.imag), (r2.real, r2.imag)]
    h1 = recti_hull(points, 2)
    if r1 == r2:
        return QuadraticReport((r1, r2), r1, h1, True, True, 1, degenerate=True)
    midpoint = (r1 + r2) / 2
    contained = box_union_contains(h1, (midpoint.real, midpoint.imag), tol)
    aligned = _single_line([r1.real, r2.real]) or _single_line([r1.imag, r2.imag])
    return QuadraticReport((r1, r2), midpoint, h1, contained, aligned, h1.component_count())


@dataclass(frozen=True)
class RealCubicReport:
    roots: tuple[float, float, float]
    critical_points: tuple[complex, ...]
    hulls_coincide: bool
    contained: bool
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", self.hulls_coincide and self.contained)


def check_real_rooted_cubic(r1: float, r2: float, r3: float, tol: float = BOX_CONTAINS_TOL) -> RealCubicReport:
    """
    With real roots the rectilinear hull is the real segment they span, the classical hull.

    Distinct or double roots only: for a triple root the derivative's double root is found
    to about sqrt(eps), which exceeds the containment slack.
    """
    roots = tuple(float(r) for r in (r1, r2, r3))
    h1 = recti_hull([(r, 0.0) for r in roots], 2)
    segment = BoxUnion(2, (((min(roots), 0.0), (max(roots), 0.0)),))
    hull = convex_hull_2d([Point2(r, 0.0) for r in roots])
    hulls_coincide = same_region(h1, segment) and {(v.x, v.y) for v in hull.vertices} == set(segment.corners())
    critical = roots_all(from_roots(roots).derivative()).roots
    slack = tol * max(1.0, max(roots) - min(roots))
    contained = all(box_union_contains(h1, (w.real, w.imag), slack) for w in critical)
    return RealCubicReport(roots, tuple(complex(w) for w in critical), hulls_coincide, contained)
