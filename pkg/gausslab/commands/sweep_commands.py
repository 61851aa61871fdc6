from ..models import Counts, Report, RunConfig, Verdict
from ..services import sweep_service
from .router import CommandRouter, arg

router = CommandRouter(tags=["Sweeps"])


@router.command("sweep", help="seeded acceptance sweeps",
                arguments=(arg("--suite", default="all",
                               choices=["all", *sweep_service.SUITES], help="suite to run"),))
def sweep(args, config: RunConfig) -> Report:
    names = list(sweep_service.SUITES) if args.suite == "all" else [args.suite]
    summaries = [sweep_service.run_suite(name, config.count, config.seed, config.trials) for name in names]

    verdicts = {s.verdict for s in summaries}
    if Verdict.failed in verdicts:
        verdict = Verdict.failed
    elif verdicts == {Verdict.inconclusive}:
        verdict = Verdict.inconclusive
    else:
        verdict = Verdict.passed
    suites = {
        s.suite: {"count": s.count, "pass": s.passed, "fail": s.failed, "degenerate": s.degenerate,
                  "inconclusive": s.inconclusive, "worst_distance": s.worst_distance,
                  "first_failure": s.first_failure, **s.details}
        for s in summaries
    }
    return Report(
        command="sweep", seed=config.seed, tol=config.tol, verdict=verdict, details={"suites": suites},
        counts=Counts(passed=sum(s.passed for s in summaries), failed=sum(s.failed for s in summaries),
                      degenerate=sum(s.degenerate for s in summaries)),
    )
