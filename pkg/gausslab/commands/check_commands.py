from ..models import Counts, HullVerdict, Report, RunConfig, SectionOutcome, StabilityStatus, Verdict, to_pair
from ..services import harness_service
from ..services._constants import FALSIFIER_IM_TOL
from .inputs import load_poly, load_univariate, parse_complex_list, resolve_theta, witness
from .router import CommandError, CommandRouter, arg

router = CommandRouter(tags=["Checks"])


@router.command("check-gl", aliases=("gauss-lucas",), needs_poly=True,
                help="critical points of a univariate polynomial lie in the hull of its roots")
def check_gauss_lucas(args, config: RunConfig) -> Report:
    check = harness_service.check_gauss_lucas(load_univariate(config), config.tol)
    verdicts = [m.verdict for m in check.memberships]
    return Report(
        command="check-gl", seed=config.seed, tol=config.tol, verdict=check.verdict,
        details={
            "roots": [to_pair(r) for r in check.roots.roots],
            "critical_points": [to_pair(w) for w in check.critical.roots],
            "hull": [to_pair(v.to_complex()) for v in check.hull.vertices],
            "classified": [v.value for v in verdicts],
            "worst_signed_distance": check.worst_distance,
        },
        witnesses=[witness([w], residual=float(r), signed_distance=m.signed_distance)
                   for w, r, m in zip(check.critical.roots, check.critical.residuals, check.memberships)],
        counts=Counts(passed=sum(v is not HullVerdict.outside for v in verdicts),
                      failed=sum(v is HullVerdict.outside for v in verdicts)),
    )


def _section_report(command: str, config: RunConfig, witnesses, details: dict) -> Report:
    outcomes = [w.outcome for w in witnesses]
    counts = Counts(passed=outcomes.count(SectionOutcome.passed),
                    failed=outcomes.count(SectionOutcome.failed),
                    degenerate=outcomes.count(SectionOutcome.degenerate))
    if counts.failed:
        verdict = Verdict.failed
    elif counts.passed and SectionOutcome.inconclusive not in outcomes:
        verdict = Verdict.passed
    else:
        verdict = Verdict.inconclusive
    details["sections"] = [
        {"k": w.k, "outcome": w.outcome.value, "restriction_degree": w.restriction.degree,
         "derivative_residual": w.derivative_residual,
         "roots_of_f": [to_pair(r) for r in w.roots_of_f.roots] if w.roots_of_f is not None else []}
        for w in witnesses
    ]
    return Report(
        command=command, seed=config.seed, tol=config.tol, verdict=verdict, details=details, counts=counts,
        witnesses=[witness(w.z, residual=w.derivative_residual,
                           signed_distance=w.membership.signed_distance if w.membership else None)
                   for w in witnesses],
    )


@router.command("check-t1", aliases=("check-section",), needs_poly=True,
                help="critical points of Q_k certified through their coordinate sections",
                arguments=(arg("--at", help="a critical point of Q_k, M values ';'-separated"),
                           arg("--others", help="fixed coordinates; checks every critical point of that section")))
def check_section(args, config: RunConfig) -> Report:
    p = load_poly(config)
    if args.at is not None:
        z = parse_complex_list(args.at, p.num_vars)
        witnesses = [harness_service.verify_section_witness(p, config.k, z, config.tol)]
        return _section_report("check-t1", config, witnesses, {"k": config.k, "mode": "point"})
    if args.others is None:
        raise CommandError("check-t1 needs --at or --others")
    others = parse_complex_list(args.others, p.num_vars - 1, "--others")
    found = harness_service.find_section_critical_points(p, config.k, others, config.tol)
    details = {"k": config.k, "mode": "section", "degenerate_section": found.degenerate,
               "critical_points": len(found.points)}
    witnesses = [harness_service.verify_section_witness(p, config.k, z, config.tol) for z in found.points]
    return _section_report("check-t1", config, witnesses, details)


@router.command("check-common", needs_poly=True,
                help="a common critical point checked through every non-null partial derivative",
                arguments=(arg("--at", required=True, help="the point, M values ';'-separated"),))
def check_common(args, config: RunConfig) -> Report:
    p = load_poly(config)
    z = parse_complex_list(args.at, p.num_vars)
    witnesses = harness_service.verify_common_critical_point(p, z, config.tol)
    return _section_report("check-common", config, witnesses, {"partials_checked": len(witnesses)})


@router.command("check-t2", aliases=("check-stability",), needs_poly=True,
                help="falsifier run on p and then on its k-th partial derivative")
def check_stability(args, config: RunConfig) -> Report:
    p = load_poly(config)
    theta = resolve_theta(config, p.num_vars)
    result = harness_service.verify_derivative_stability(p, theta, config.k, config.trials, config.seed,
                                                         cert_tol=config.tol)
    details = {
        "k": config.k,
        "theta": theta,
        "outcome": result.outcome,
        "note": result.note,
        "input_status": result.input_verdict.status.value,
        "derivative_status": result.derivative_verdict.status.value if result.derivative_verdict else None,
        "trials": config.trials,
        "screen_tol": FALSIFIER_IM_TOL,
        "cert_tol": config.tol,
    }
    witnesses = []
    for verdict in (result.input_verdict, result.derivative_verdict):
        if verdict is not None and verdict.status is StabilityStatus.counterexample:
            details["trial_index"] = verdict.trial_index
            witnesses.append(witness(verdict.witness, residual=verdict.residual))
    return Report(command="check-t2", seed=config.seed, tol=config.tol, verdict=result.verdict,
                  details=details, witnesses=witnesses)


@router.command("check-lemma1", aliases=("check-complement",),
                help="the k-th section of the complement of the rotated region is convex",
                arguments=(arg("--fixed", help="the M-1 fixed coordinates, ';'-separated"),
                           arg("--samples", type=int, default=100_000, help="midpoint pairs to test")))
def check_complement(args, config: RunConfig) -> Report:
    fixed = parse_complex_list(args.fixed, flag="--fixed")
    theta = list(config.theta) if config.theta is not None else [0.0] * (len(fixed) + 1)
    if len(fixed) != len(theta) - 1:
        raise CommandError(f"--fixed needs {len(theta) - 1} values for {len(theta)} angles")
    report = harness_service.verify_complement_convexity(theta, config.k, fixed, args.samples, config.seed)
    return Report(
        command="check-lemma1", seed=config.seed, tol=config.tol,
        verdict=Verdict.passed if report.passed else Verdict.failed,
        details={"k": report.k, "theta": theta, "c": report.c, "case": report.case,
                 "samples": report.samples, "violations": report.violations,
                 "agreement_points": report.agreement_points, "disagreements": report.disagreements},
        counts=Counts(passed=report.samples - report.violations, failed=report.violations),
    )
