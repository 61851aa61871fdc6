from ..models import CriticalRegime, CubicSpec, Report, RunConfig, Verdict, to_pair
from ..services import harness_service
from .inputs import parse_complex, witness
from .router import CommandRouter, arg

router = CommandRouter(tags=["Examples"])


def _boxes(h1) -> list[dict]:
    return [{"lower": list(lo), "upper": list(hi)} for lo, hi in h1.boxes]


@router.command("example1", aliases=("cubic",),
                help="cubic with roots a+bi, a-bi, c: critical points against the rectilinear hull",
                arguments=(arg("--a", type=float, required=True), arg("--b", type=float, required=True),
                           arg("--c", type=float, required=True)))
def cubic(args, config: RunConfig) -> Report:
    report = harness_service.classify_cubic(CubicSpec(a=args.a, b=args.b, c=args.c), tol=config.tol)
    if report.regime is CriticalRegime.complex_critical:
        verdict = Verdict.passed if report.iff_holds else Verdict.failed
    else:
        verdict = Verdict.inconclusive
    return Report(
        command="example1", seed=config.seed, tol=config.tol, verdict=verdict,
        details={
            "a": args.a, "b": args.b, "c": args.c,
            "regime": report.regime.value,
            "critical_points": [to_pair(w) for w in report.critical_points],
            "h1": _boxes(report.h1),
            "contained": report.contained,
            "axis_aligned_roots": report.axis_aligned_roots,
            "iff_holds": report.iff_holds,
            "within_premise": report.within_premise,
        },
        witnesses=[witness([w]) for w in report.critical_points],
    )


@router.command("example1-quad", aliases=("quadratic",),
                help="quadratic with roots r1, r2: midpoint against the rectilinear hull",
                arguments=(arg("--r1", required=True), arg("--r2", required=True)))
def quadratic(args, config: RunConfig) -> Report:
    report = harness_service.classify_quadratic(parse_complex(args.r1), parse_complex(args.r2), tol=config.tol)
    if report.degenerate:
        verdict = Verdict.inconclusive
    else:
        verdict = Verdict.passed if report.iff_holds else Verdict.failed
    return Report(
        command="example1-quad", seed=config.seed, tol=config.tol, verdict=verdict,
        details={
            "roots": [to_pair(r) for r in report.roots],
            "critical_point": to_pair(report.critical_point),
            "h1": _boxes(report.h1),
            "contained": report.contained,
            "axis_aligned_roots": report.axis_aligned_roots,
            "components": report.components,
            "connected": report.connected,
            "degenerate": report.degenerate,
        },
        witnesses=[witness([report.critical_point])],
    )


@router.command("example1-real", aliases=("real-cubic",),
                help="cubic with three real roots: both hulls are the real segment",
                arguments=(arg("--r1", type=float, required=True), arg("--r2", type=float, required=True),
                           arg("--r3", type=float, required=True)))
def real_cubic(args, config: RunConfig) -> Report:
    report = harness_service.check_real_rooted_cubic(args.r1, args.r2, args.r3, tol=config.tol)
    return Report(
        command="example1-real", seed=config.seed, tol=config.tol,
        verdict=Verdict.passed if report.passed else Verdict.failed,
        details={"roots": list(report.roots),
                 "critical_points": [to_pair(w) for w in report.critical_points],
                 "hulls_coincide": report.hulls_coincide, "contained": report.contained},
        witnesses=[witness([w]) for w in report.critical_points],
    )
