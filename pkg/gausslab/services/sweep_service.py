import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..models import CriticalRegime, CubicSpec, SectionOutcome, StabilityStatus, Verdict
from ._errors import NotCriticalPointError, ParseError
from .geometry_service import Point2, hull_nesting_check, recti_hull
from .harness_service import (
    check_gauss_lucas,
    classify_cubic,
    classify_quadratic,
    find_section_critical_points,
    verify_complement_convexity,
    verify_section_witness,
)
from .parser_service import format_poly, parse_poly
from .polynomial_service import UniPoly, from_roots, partial_derivative, random_multipoly
from .roots_service import cubic_derivative_roots, inclusion_radii, match_roots, roots_all
from .stability_service import mc_falsifier, random_stable_poly

logger = logging.getLogger(__name__)


@dataclass
class SweepSummary:
    suite: str
    count: int
    passed: int = 0
    failed: int = 0
    degenerate: int = 0
    inconclusive: int = 0
    worst_distance: Optional[float] = None
    first_failure: Optional[str] = None
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> Verdict:
        if self.failed:
            return Verdict.failed
        if self.passed == 0 and (self.degenerate or self.inconclusive):
            return Verdict.inconclusive
        return Verdict.passed

    def record(self, ok: bool, case: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = case

    def distance(self, d: float) -> None:
        if self.worst_distance is None or d < self.worst_distance:
            self.worst_distance = d


def _disc_sample(rng: np.random.Generator, radius: float) -> complex:
    r, angle = radius * math.sqrt(rng.random()), 2 * math.pi * rng.random()
    return r * complex(math.cos(angle), math.sin(angle))


def _complex_normal(rng: np.random.Generator, n: int) -> tuple[complex, ...]:
    return tuple(complex(x, y) for x, y in rng.normal(size=(n, 2)))


# --- Suites ---

def sweep_gauss_lucas(count: int, seed: int) -> SweepSummary:
    """Random polynomials of degree 2..12 with coefficients of magnitude at most 10."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("gauss-lucas", count)
    for case in range(count):
        degree = int(rng.integers(2, 13))
        coeffs = [_disc_sample(rng, 10.0) for _ in range(degree + 1)]
        while abs(coeffs[-1]) < 1e-3:
            coeffs[-1] = _disc_sample(rng, 10.0)
        check = check_gauss_lucas(UniPoly(np.array(coeffs)))
        if check.verdict is Verdict.inconclusive:
            summary.inconclusive += 1
            continue
        summary.distance(check.worst_distance / max(check.hull.diameter, 1.0))
        summary.record(check.verdict is Verdict.passed, f"case {case}: degree {degree}")
    return summary


def sweep_section(count: int, seed: int) -> SweepSummary:
    """Section critical points of random (p, k, others) fed through the section witness."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("section", count)
    for case in range(count):
        num_vars = int(rng.integers(2, 5))
        p = random_multipoly(rng, num_vars, int(rng.integers(1, 6)))
        k = int(rng.integers(1, num_vars + 1))
        others = _complex_normal(rng, num_vars - 1)
        found = find_section_critical_points(p, k, others)
        if found.degenerate or partial_derivative(p, k).is_null:
            summary.degenerate += 1
            continue
        for z in found.points:
            label = f"case {case}: k={k}, z={z}"
            try:
                witness = verify_section_witness(p, k, z)
            except NotCriticalPointError:
                summary.record(False, label)
                continue
            if witness.outcome is SectionOutcome.degenerate:
                summary.degenerate += 1
            elif witness.outcome is SectionOutcome.inconclusive:
                summary.inconclusive += 1
            else:
                summary.distance(witness.membership.signed_distance / max(witness.hull.diameter, 1.0))
                summary.record(witness.outcome is SectionOutcome.passed, label)
    return summary


def sweep_stability(count: int, seed: int, trials: int = 10000, planted_trials: int = 1000) -> SweepSummary:
    """
    Stable-by-construction polynomials must survive the falsifier on every
    non-null partial derivative; z1*z2 + 1 must be caught for 9 of seeds 0..9.
    """
    rng = np.random.default_rng(seed)
    summary = SweepSummary("stability", count)
    for case in range(count):
        num_vars = int(rng.integers(1, 4))
        degree = int(rng.integers(1, 6))
        theta = [0.0] * num_vars if case % 2 == 0 else list(rng.uniform(-math.pi, math.pi, num_vars))
        p = random_stable_poly(num_vars, degree, theta, seed=int(rng.integers(2**31)))
        for k in range(1, num_vars + 1):
            qk = partial_derivative(p, k)
            if qk.is_null:
                summary.degenerate += 1
                continue
            verdict = mc_falsifier(qk, theta, trials, seed=case)
            summary.record(verdict.status is not StabilityStatus.counterexample,
                           f"case {case}: k={k}, witness {verdict.witness}")

    planted = parse_poly("z1*z2 + 1")
    caught = sum(mc_falsifier(planted, (0.0, 0.0), planted_trials, seed=s).status is StabilityStatus.counterexample
                 for s in range(10))
    summary.details["planted_caught"] = caught
    summary.record(caught >= 9, f"planted z1*z2 + 1 caught for only {caught} of 10 seeds")
    return summary


def sweep_complement(count: int, seed: int, configurations: int = 20) -> SweepSummary:
    """Midpoint convexity of complement sections over random (theta, fixed) configurations."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("complement", count)
    per_config = max(1, count // configurations)
    for case in range(configurations):
        num_vars = int(rng.integers(1, 5))
        theta = list(rng.uniform(-math.pi, math.pi, num_vars))
        k = int(rng.integers(1, num_vars + 1))
        fixed = _complex_normal(rng, num_vars - 1)
        report = verify_complement_convexity(theta, k, fixed, per_config, seed=int(rng.integers(2**31)),
                                             agreement_points=max(1, 10_000 // configurations))
        summary.record(report.passed, f"config {case}: {report.violations} violations, "
                                      f"{report.disagreements} disagreements")
    return summary


def sweep_cubic_grid(count: int = 21, seed: int = 0) -> SweepSummary:
    """The iff over a count^3 grid; real-critical points sit outside its premise and are tallied apart."""
    summary = SweepSummary("cubic-grid", count ** 3)
    axis = np.linspace(-2.0, 2.0, count)
    for a in axis:
        for b in np.linspace(0.1, 2.0, count):
            for c in axis:
                report = classify_cubic(CubicSpec(a=float(a), b=float(b), c=float(c)))
                if report.regime is CriticalRegime.real_critical:
                    summary.degenerate += 1
                    continue
                summary.record(report.iff_holds, f"a={a}, b={b}, c={c}")

    complex_ = CriticalRegime.complex_critical
    anchors = {
        (0.0, 1.0, 0.0): (True, complex_),
        (0.0, 1.0, 1.0): (False, complex_),
        (0.0, 1.0, 2.0): (True, CriticalRegime.real_critical),
    }
    for (a, b, c), (contained, regime) in anchors.items():
        report = classify_cubic(CubicSpec(a=a, b=b, c=c))
        summary.record(report.contained is contained and report.regime is regime, f"anchor ({a}, {b}, {c})")
    return summary


def sweep_quadratic(count: int, seed: int) -> SweepSummary:
    rng = np.random.default_rng(seed)
    summary = SweepSummary("quadratic", count)
    for case in range(count):
        r1, r2 = _complex_normal(rng, 2)
        if case % 3 == 0:
            r2 = complex(r1.real, r2.imag)
        elif case % 3 == 1:
            r2 = complex(r2.real, r1.imag)
        report = classify_quadratic(r1, r2)
        if report.degenerate:
            summary.degenerate += 1
            continue
        ok = report.iff_holds and report.connected == report.axis_aligned_roots
        summary.record(ok, f"r1={r1}, r2={r2}")
    return summary


def _oracle_fill(points: np.ndarray, side: int) -> np.ndarray:
    """Row-by-row filling on the full integer cell complex, one cell at a time."""
    occ = np.zeros((2 * side - 1, 2 * side - 1), dtype=bool)
    for x, y in points:
        occ[2 * x, 2 * y] = True
    changed = True
    while changed:
        changed = False
        for grid in (occ, occ.T):
            for row in grid:
                cells = np.flatnonzero(row)
                if cells.size and not row[cells[0]: cells[-1] + 1].all():
                    row[cells[0]: cells[-1] + 1] = True
                    changed = True
    return occ


def sweep_recti(count: int, seed: int, side: int = 5) -> SweepSummary:
    """recti_hull against brute-force filling for integer point sets of size <= 6."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("recti", count)
    lines = [np.arange(side, dtype=float)] * 2
    for case in range(count):
        points = rng.integers(0, side, size=(int(rng.integers(1, 7)), 2))
        hull = recti_hull(points.astype(float), 2)
        ok = np.array_equal(hull.rasterize(lines), _oracle_fill(points, side))
        summary.record(ok, f"case {case}: {points.tolist()}")
    return summary


def sweep_nesting(count: int, seed: int) -> SweepSummary:
    rng = np.random.default_rng(seed)
    summary = SweepSummary("nesting", count)
    for case in range(count):
        points = [Point2(float(x), float(y)) for x, y in rng.normal(size=(int(rng.integers(1, 9)), 2))]
        report = hull_nesting_check(points)
        summary.distance(report.worst_signed_distance)
        summary.record(report.passed, f"case {case}")
    return summary


def _separated_roots(rng: np.random.Generator, degree: int, radius: float = 10.0, gap: float = 1e-2,
                     start: tuple[complex, ...] = ()) -> list[complex]:
    roots = list(start)
    while len(roots) < degree:
        z = _disc_sample(rng, radius)
        if all(abs(z - r) >= gap for r in roots):
            roots.append(z)
    return roots


def sweep_roots(count: int, seed: int) -> SweepSummary:
    """Round trip from_roots -> roots_all, and closed-form cubic critical points against roots_all."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("roots", count)
    worst_cubic = 0.0
    for case in range(count):
        expected = _separated_roots(rng, int(rng.integers(1, 11)))
        found = roots_all(from_roots(expected))
        error, _ = match_roots(found.roots, expected)

        a, c = rng.uniform(-2.0, 2.0, 2)
        b = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 2.0))
        spec = CubicSpec(a=float(a), b=b, c=float(c))
        cubic = from_roots([complex(spec.a, spec.b), complex(spec.a, -spec.b), spec.c])
        cubic_error, _ = match_roots(cubic_derivative_roots(spec).points, roots_all(cubic.derivative()).roots)
        worst_cubic = max(worst_cubic, cubic_error)

        summary.record(error <= 1e-8 and cubic_error <= 1e-9,
                       f"case {case}: round trip {error:.2e}, cubic {cubic_error:.2e}")
    summary.details["worst_cubic_error"] = worst_cubic
    return summary


def sweep_roots_clustered(count: int, seed: int) -> SweepSummary:
    """
    Round trip on root sets with a planted cluster of 2 or 3 roots on a circle of radius 1e-2.

    A converged answer must sit within the inclusion radius of each found root (at
    least 1e-8) of its matched true root; unconverged answers count as inconclusive.
    """
    rng = np.random.default_rng(seed)
    summary = SweepSummary("roots-clustered", count)
    for case in range(count):
        size = int(rng.integers(2, 4))
        center = complex(*rng.uniform(-7.0, 7.0, 2))
        phase = rng.random()
        cluster = tuple(center + 0.01 * np.exp(2j * np.pi * (k / size + phase)) for k in range(size))
        expected = _separated_roots(rng, int(rng.integers(size + 1, 11)), start=cluster)
        p = from_roots(expected)
        found = roots_all(p)
        if not found.converged:
            summary.inconclusive += 1
            continue
        monic = (p.coeffs / p.coeffs[-1])[None, :]
        allowance = np.maximum(1e-8, inclusion_radii(monic, found.roots[None, :])[0])
        _, pairs = match_roots(found.roots, expected)
        excess = max(abs(found.roots[i] - expected[j]) / allowance[i] for i, j in pairs)
        summary.record(excess <= 1.0, f"case {case}: cluster at {center:.4f}, error {excess:.2f}x allowance")
    return summary


_FUZZ_ALPHABET = list(b"z0123456789i+-*^(). e") + [0x80, 0xC3, 0xFF, ord("x"), ord("\n")]


def sweep_parser(count: int, seed: int, fuzz_factor: int = 20) -> SweepSummary:
    """format/parse round trips, then random byte strings that may only parse or raise ParseError."""
    rng = np.random.default_rng(seed)
    summary = SweepSummary("parser", count * (1 + fuzz_factor))
    for case in range(count):
        p = random_multipoly(rng, int(rng.integers(1, 5)), int(rng.integers(0, 6)),
                             integer_coeffs=bool(case % 2))
        text = format_poly(p)
        summary.record(parse_poly(text, p.num_vars) == p, f"round trip {text!r}")

    for case in range(count * fuzz_factor):
        data = bytes(rng.choice(_FUZZ_ALPHABET, size=int(rng.integers(0, 24))).tolist())
        try:
            parse_poly(data)
        except ParseError:
            pass
        except Exception as e:  # noqa: BLE001
            summary.record(False, f"fuzz {data!r}: {type(e).__name__}: {e}")
            continue
        summary.passed += 1
    return summary


SUITES: dict[str, tuple[Callable[..., SweepSummary], int]] = {
    "gauss-lucas": (sweep_gauss_lucas, 1000),
    "section": (sweep_section, 500),
    "stability": (sweep_stability, 200),
    "complement": (sweep_complement, 100_000),
    "cubic-grid": (sweep_cubic_grid, 21),
    "quadratic": (sweep_quadratic, 1000),
    "recti": (sweep_recti, 10_000),
    "nesting": (sweep_nesting, 1000),
    "roots": (sweep_roots, 1000),
    "roots-clustered": (sweep_roots_clustered, 500),
    "parser": (sweep_parser, 500),
}


def run_suite(name: str, count: Optional[int] = None, seed: int = 0, trials: int = 10000) -> SweepSummary:
    """Runs one suite; count defaults to its acceptance size, trials only affects `stability`."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    runner, default_count = SUITES[name]
    kwargs = {"trials": trials} if name == "stability" else {}
    summary = runner(count or default_count, seed, **kwargs)
    logger.info("sweep %s: %d pass, %d fail, %d degenerate, %d inconclusive",
                name, summary.passed, summary.failed, summary.degenerate, summary.inconclusive)
    return summary
