from pathlib import Path
from typing import Optional

from ..models import RunConfig, WitnessOut, to_pair
from ..services.parser_service import parse_poly
from ..services.polynomial_service import MultiPoly, UniPoly, to_univariate
from .router import CommandError


def read_poly_text(config: RunConfig) -> str:
    """Inline expression, or the file contents with '#' comments dropped and lines joined."""
    if config.poly_text is not None:
        return config.poly_text
    if config.poly_file is None:
        raise CommandError("a polynomial is required: pass --poly or --poly-file")
    try:
        raw = Path(config.poly_file).read_text(encoding="utf-8")
    except OSError as e:
        raise CommandError(f"cannot read {config.poly_file}: {e.strerror}") from None
    lines = [line.split("#", 1)[0] for line in raw.splitlines()]
    return " ".join(line for line in lines if line.strip())


def load_poly(config: RunConfig, expected_vars: Optional[int] = None) -> MultiPoly:
    return parse_poly(read_poly_text(config), expected_vars)


def load_univariate(config: RunConfig) -> UniPoly:
    p = load_poly(config)
    if p.num_vars != 1:
        raise CommandError(f"this command needs a polynomial in z1 only, got {p.num_vars} variables")
    return to_univariate(p)


def parse_complex(text: str) -> complex:
    """A complex constant written in the polynomial grammar, e.g. '1.5 - 2i'."""
    value = parse_poly(text)
    if value.total_degree > 0:
        raise CommandError(f"{text!r} is not a constant")
    return complex(value.terms.get((0,) * value.num_vars, 0j))


def parse_complex_list(text: Optional[str], expected: Optional[int] = None, flag: str = "--at") -> tuple[complex, ...]:
    """Semicolon-separated complex constants."""
    if text is None or not text.strip():
        values = ()
    else:
        values = tuple(parse_complex(part) for part in text.split(";"))
    if expected is not None and len(values) != expected:
        raise CommandError(f"{flag} needs {expected} complex values, got {len(values)}")
    return values


def parse_vectors(text: str) -> list[tuple[float, ...]]:
    """Real vectors 'x,y;x,y;...' of a common length."""
    try:
        vectors = [tuple(float(v) for v in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise CommandError(f"cannot read vectors from {text!r}") from None
    if not vectors:
        raise CommandError("at least one vector is required")
    if len({len(v) for v in vectors}) != 1:
        raise CommandError("all vectors must have the same length")
    return vectors


def resolve_theta(config: RunConfig, num_vars: int) -> list[float]:
    if config.theta is None:
        return [0.0] * num_vars
    if len(config.theta) != num_vars:
        raise CommandError(f"--theta has {len(config.theta)} angles, the polynomial has {num_vars} variables")
    return list(config.theta)


def witness(point, residual=None, signed_distance=None) -> WitnessOut:
    return WitnessOut(point=[to_pair(z) for z in point], residual=residual, signed_distance=signed_distance)
