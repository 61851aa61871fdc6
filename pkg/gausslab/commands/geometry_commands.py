from ..models import HullVerdict, Report, RunConfig, Verdict, to_pair
from ..services.geometry_service import (
    Point2,
    box_union_contains,
    convex_hull_2d,
    hull_nesting_check,
    point_in_hull,
    points_from_complex,
    recti_hull,
)
from .inputs import parse_complex_list, parse_vectors, witness
from .router import CommandError, CommandRouter, arg

router = CommandRouter(tags=["Geometry"])


@router.command("hull", help="convex hull of complex points, optionally classifying --at",
                arguments=(arg("--points", required=True, help="complex points, ';'-separated"),
                           arg("--at", help="complex points to classify against the hull")))
def planar_hull(args, config: RunConfig) -> Report:
    points = parse_complex_list(args.points, flag="--points")
    if not points:
        raise CommandError("--points is empty")
    hull = convex_hull_2d(points_from_complex(points))
    memberships = [(z, point_in_hull(hull, Point2.from_complex(z), config.tol))
                   for z in parse_complex_list(args.at)]
    outside = [m for _, m in memberships if m.verdict is HullVerdict.outside]
    return Report(
        command="hull", seed=config.seed, tol=config.tol,
        verdict=Verdict.failed if outside else Verdict.passed,
        details={
            "vertices": [to_pair(v.to_complex()) for v in hull.vertices],
            "diameter": hull.diameter,
            "classified": [m.verdict.value for _, m in memberships],
        },
        witnesses=[witness([z], signed_distance=m.signed_distance) for z, m in memberships],
    )


@router.command("rectihull", help="rectilinear hull of real vectors as a union of boxes",
                arguments=(arg("--vectors", required=True, help="real vectors 'x,y;x,y;...'"),
                           arg("--at", help="a real vector 'x,y' to test for membership")))
def rectilinear_hull(args, config: RunConfig) -> Report:
    vectors = parse_vectors(args.vectors)
    hull = recti_hull(vectors, len(vectors[0]))
    details = {
        "dim": hull.dim,
        "boxes": [{"lower": list(lo), "upper": list(hi)} for lo, hi in hull.boxes],
        "sweeps": hull.sweeps,
        "components": hull.component_count(),
    }
    verdict = Verdict.passed
    if hull.dim == 2:
        nesting = hull_nesting_check([Point2(x, y) for x, y in vectors], config.tol)
        details["nested_in_convex_hull"] = nesting.passed
        if not nesting.passed:
            verdict = Verdict.failed
    if args.at:
        (target,) = parse_vectors(args.at)
        contained = box_union_contains(hull, target, config.tol)
        details["contains"] = contained
        if not contained:
            verdict = Verdict.failed
    return Report(command="rectihull", seed=config.seed, tol=config.tol, verdict=verdict, details=details)
