import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..models import HullVerdict
from ._constants import BOX_CONTAINS_TOL, GRID_MAX_CELLS, GRID_SNAP_REL, HULL_TOL_REL
from ._errors import DimensionError, NonFiniteError

logger = logging.getLogger(__name__)


# ===================================================================
# Planar convex hulls
# ===================================================================

@dataclass(frozen=True, order=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteError(f"non-finite point ({self.x}, {self.y})")

    @classmethod
    def from_complex(cls, z: complex) -> "Point2":
        z = complex(z)
        return cls(float(z.real), float(z.imag))

    def to_complex(self) -> complex:
        return complex(self.x, self.y)


def points_from_complex(values: Iterable[complex]) -> list[Point2]:
    return [Point2.from_complex(z) for z in values]


def _cross(o: Point2, a: Point2, b: Point2) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise vertices; one vertex is a point hull, two a segment."""

    vertices: tuple[Point2, ...]

    @property
    def diameter(self) -> float:
        return max((math.dist((a.x, a.y), (b.x, b.y))
                    for a, b in itertools.combinations(self.vertices, 2)), default=0.0)


@dataclass(frozen=True)
class HullMembership:
    verdict: HullVerdict
    signed_distance: float
    tol: float

    @property
    def contained(self) -> bool:
        return self.verdict is not HullVerdict.outside


def convex_hull_2d(points: Sequence[Point2]) -> ConvexPolygon:
    """Andrew's monotone chain; collinear vertices are dropped."""
    unique = sorted(set(points))
    if not unique:
        raise ValueError("convex hull of an empty point set")
    if len(unique) <= 2:
        return ConvexPolygon(tuple(unique))

    lower: list[Point2] = []
    for p in unique:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(unique):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return ConvexPolygon(tuple(lower[:-1] + upper[:-1]))


def _segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        return math.dist((p.x, p.y), (a.x, a.y))
    t = max(0.0, min(1.0, ((p.x - a.x) * dx + (p.y - a.y) * dy) / length2))
    return math.dist((p.x, p.y), (a.x + t * dx, a.y + t * dy))


def signed_distance(hull: ConvexPolygon, p: Point2) -> float:
    """Distance to the hull boundary, positive inside and negative outside."""
    vertices = hull.vertices
    if len(vertices) == 1:
        return -math.dist((p.x, p.y), (vertices[0].x, vertices[0].y))
    edges = list(zip(vertices, vertices[1:] + vertices[:1])) if len(vertices) > 2 else [(vertices[0], vertices[1])]
    if len(vertices) > 2:
        heights = [_cross(a, b, p) / math.dist((a.x, a.y), (b.x, b.y)) for a, b in edges]
        if min(heights) >= 0.0:
            return min(heights)
    return -min(_segment_distance(p, a, b) for a, b in edges)


def point_in_hull(hull: ConvexPolygon, p: Point2, tol: float = HULL_TOL_REL) -> HullMembership:
    """
    Classifies p against the hull.

    tol is relative to the hull diameter (absolute for a single-point hull);
    inside means signed distance >= tol, boundary means |distance| < tol.
    """
    diameter = hull.diameter
    tol_abs = tol * diameter if diameter > 0 else tol
    d = signed_distance(hull, p)
    if d >= tol_abs:
        verdict = HullVerdict.inside
    elif abs(d) < tol_abs:
        verdict = HullVerdict.boundary
    else:
        verdict = HullVerdict.outside
    return HullMembership(verdict, d, tol_abs)


# ===================================================================
# Rectilinear (separately convex in R^d) hulls
# ===================================================================

Box = tuple[tuple[float, ...], tuple[float, ...]]


@dataclass(frozen=True)
class BoxUnion:
    """Finite union of closed axis-aligned boxes, degenerate ones allowed."""

    dim: int
    boxes: tuple[Box, ...]
    sweeps: int = 0

    def contains(self, p: Sequence[float], tol: float = BOX_CONTAINS_TOL) -> bool:
        return box_union_contains(self, p, tol)

    def corners(self) -> list[tuple[float, ...]]:
        seen: dict[tuple[float, ...], None] = {}
        for lo, hi in self.boxes:
            for corner in itertools.product(*zip(lo, hi)):
                seen.setdefault(corner)
        return list(seen)

    def grid_lines(self) -> list[np.ndarray]:
        return [np.unique([v for lo, hi in self.boxes for v in (lo[axis], hi[axis])])
                for axis in range(self.dim)]

    def rasterize(self, lines: Sequence[np.ndarray]) -> np.ndarray:
        """Occupancy of the cell complex spanned by `lines`, which must contain every box bound."""
        occ = np.zeros(tuple(2 * len(axis_lines) - 1 for axis_lines in lines), dtype=bool)
        for lo, hi in self.boxes:
            window = []
            for axis, axis_lines in enumerate(lines):
                i, j = np.searchsorted(axis_lines, [lo[axis], hi[axis]])
                if i >= len(axis_lines) or j >= len(axis_lines) \
                        or axis_lines[i] != lo[axis] or axis_lines[j] != hi[axis]:
                    raise ValueError("grid does not contain every box bound")
                window.append(slice(2 * i, 2 * j + 1))
            occ[tuple(window)] = True
        return occ

    def component_count(self) -> int:
        """Connected components of the union; touching closed boxes are connected."""
        parent = list(range(len(self.boxes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(len(self.boxes)), 2):
            (lo1, hi1), (lo2, hi2) = self.boxes[i], self.boxes[j]
            if all(l1 <= h2 and l2 <= h1 for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2)):
                parent[find(i)] = find(j)
        return len({find(i) for i in range(len(self.boxes))})


def compress_axis(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Grid lines of one axis and the line index of each value.

    Values closer than GRID_SNAP_REL times the larger of the axis span and the largest
    magnitude share a line, so coordinates equal up to roundoff collapse.
    """
    ordered = np.unique(values)
    snap = GRID_SNAP_REL * max(ordered[-1] - ordered[0], float(np.max(np.abs(ordered))))
    lines = [ordered[0]]
    for v in ordered[1:]:
        if v - lines[-1] > snap:
            lines.append(v)
    lines = np.array(lines)
    return lines, np.searchsorted(lines, values, side="right") - 1


def _fill_axis(occ: np.ndarray, axis: int) -> np.ndarray:
    forward = np.logical_or.accumulate(occ, axis=axis)
    backward = np.flip(np.logical_or.accumulate(np.flip(occ, axis=axis), axis=axis), axis=axis)
    return forward & backward


def fill_to_fixpoint(occ: np.ndarray) -> tuple[np.ndarray, int]:
    """Fills every axis-parallel row between its first and last occupied cell until nothing changes."""
    sweeps = 0
    while True:
        sweeps += 1
        before = occ
        for axis in range(occ.ndim):
            occ = _fill_axis(occ, axis)
        if np.array_equal(occ, before):
            return occ, sweeps


def _maximal_boxes(occ: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    covered = np.zeros_like(occ)
    found = []
    for cell in np.argwhere(occ):
        if covered[tuple(cell)]:
            continue
        lo, hi = cell.copy(), cell.copy()
        for axis in range(occ.ndim):
            for direction in (1, -1):
                while True:
                    edge = hi[axis] + 1 if direction > 0 else lo[axis] - 1
                    if not 0 <= edge < occ.shape[axis]:
                        break
                    slab = tuple(slice(edge, edge + 1) if a == axis else slice(lo[a], hi[a] + 1)
                                 for a in range(occ.ndim))
                    if not occ[slab].all():
                        break
                    if direction > 0:
                        hi[axis] = edge
                    else:
                        lo[axis] = edge
        covered[tuple(slice(l, h + 1) for l, h in zip(lo, hi))] = True
        found.append((lo, hi))
    return found


def recti_hull(points: Sequence[Sequence[float]], d: int | None = None) -> BoxUnion:
    """
    Smallest separately convex subset of R^d containing the points, as a union of boxes.

    Every distinct coordinate becomes a grid line; cells are the lines themselves
    (zero thickness) and the open gaps between them. Points are rasterized, rows
    are filled to a fixpoint, and occupied cells are merged greedily into
    maximal boxes.
    """
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        raise ValueError("rectilinear hull of an empty point set")
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d in (None, 1) else arr.reshape(1, -1)
    if d is not None and arr.shape[1] != d:
        raise DimensionError(f"points have {arr.shape[1]} coordinates, expected {d}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("non-finite point coordinate")
    dim = arr.shape[1]

    axes = [compress_axis(arr[:, axis]) for axis in range(dim)]
    shape = tuple(2 * len(lines) - 1 for lines, _ in axes)
    if math.prod(shape) > GRID_MAX_CELLS:
        raise ValueError(f"compressed grid of {math.prod(shape)} cells exceeds {GRID_MAX_CELLS}")
    occ = np.zeros(shape, dtype=bool)
    occ[tuple(2 * idx for _, idx in axes)] = True
    occ, sweeps = fill_to_fixpoint(occ)
    logger.debug("rectilinear hull of %d points: %d cells occupied after %d sweeps",
                 len(arr), int(occ.sum()), sweeps)

    boxes = []
    for lo, hi in _maximal_boxes(occ):
        lower = tuple(float(axes[a][0][lo[a] // 2]) for a in range(dim))
        upper = tuple(float(axes[a][0][(hi[a] + 1) // 2]) for a in range(dim))
        boxes.append((lower, upper))
    return BoxUnion(dim, tuple(boxes), sweeps)


def same_region(a: BoxUnion, b: BoxUnion) -> bool:
    """Exact represented-set equality, compared on the common refinement of both grids."""
    if a.dim != b.dim:
        return False
    lines = [np.union1d(la, lb) for la, lb in zip(a.grid_lines(), b.grid_lines())]
    return bool(np.array_equal(a.rasterize(lines), b.rasterize(lines)))


def box_union_contains(bu: BoxUnion, p: Sequence[float], tol: float = BOX_CONTAINS_TOL) -> bool:
    """True iff p is within per-axis distance tol of some box."""
    coords = tuple(float(v) for v in p)
    if len(coords) != bu.dim:
        raise DimensionError(f"point has {len(coords)} coordinates, box union has dimension {bu.dim}")
    return any(all(l - tol <= v <= h + tol for v, l, h in zip(coords, lo, hi)) for lo, hi in bu.boxes)


@dataclass(frozen=True)
class NestingReport:
    passed: bool
    worst_signed_distance: float
    corners_checked: int


def hull_nesting_check(points: Sequence[Point2], tol: float = HULL_TOL_REL) -> NestingReport:
    """Every corner of the rectilinear hull must lie in the classical convex hull."""
    if not points:
        raise ValueError("nesting check of an empty point set")
    hull = convex_hull_2d(points)
    boxes = recti_hull([(p.x, p.y) for p in points], 2)
    corners = boxes.corners()
    memberships = [point_in_hull(hull, Point2(x, y), tol) for x, y in corners]
    worst = min(m.signed_distance for m in memberships)
    return NestingReport(all(m.contained for m in memberships), worst, len(corners))
