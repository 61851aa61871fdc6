from ..models import Report, RunConfig, Verdict, to_pair
from ..services import roots_service
from ..services.parser_service import format_poly
from ..services.polynomial_service import embed_univariate, partial_derivative, restrict
from .inputs import load_poly, load_univariate, parse_complex_list, witness
from .router import CommandRouter, arg

router = CommandRouter(tags=["Polynomials"])


@router.command("roots", help="all roots of a univariate polynomial with certified residuals", needs_poly=True)
def find_roots(args, config: RunConfig) -> Report:
    p = load_univariate(config)
    found = roots_service.roots_all(p, config.tol)
    bounds = found.bounds()
    return Report(
        command="roots", seed=config.seed, tol=config.tol,
        verdict=Verdict.passed if found.converged else Verdict.inconclusive,
        details={
            "degree": p.degree,
            "roots": [to_pair(r) for r in found.roots],
            "converged": found.converged,
            "iterations": found.iterations,
            "worst_residual_ratio": float((found.residuals / bounds).max()),
        },
        witnesses=[witness([r], residual=float(res)) for r, res in zip(found.roots, found.residuals)],
    )


@router.command("restrict", help="the one-variable section through the other coordinates",
                arguments=(arg("--others", help="the M-1 fixed coordinates, ';'-separated"),),
                needs_poly=True)
def restrict_poly(args, config: RunConfig) -> Report:
    p = load_poly(config)
    others = parse_complex_list(args.others, p.num_vars - 1, "--others")
    f = restrict(p, config.k, others)
    return Report(
        command="restrict", seed=config.seed, tol=config.tol, verdict=Verdict.passed,
        details={
            "k": config.k,
            "others": [to_pair(z) for z in others],
            "degree": f.degree,
            "coefficients": [to_pair(c) for c in f.coeffs],
            "expression": format_poly(embed_univariate(f)),
        },
    )


@router.command("diff", help="partial derivative in z_k", needs_poly=True)
def differentiate(args, config: RunConfig) -> Report:
    p = load_poly(config)
    q = partial_derivative(p, config.k)
    return Report(
        command="diff", seed=config.seed, tol=config.tol, verdict=Verdict.passed,
        details={"k": config.k, "num_vars": q.num_vars, "total_degree": q.total_degree,
                 "expression": format_poly(q)},
    )
