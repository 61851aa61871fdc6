import cmath
import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._constants import RESTRICT_DEAD_COEFF_REL
from ._errors import DimensionError, NonFiniteError

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


# --- Helpers ---

def grlex_key(monomial: Monomial) -> tuple:
    """Sort key putting higher total degree first, then larger exponents of earlier variables."""
    return (-sum(monomial),) + tuple(-e for e in monomial)


def as_point(point: Iterable[complex], expected_len: int | None = None) -> tuple[complex, ...]:
    """Coerces a coordinate sequence to complex values and rejects NaN/infinity."""
    coords = tuple(complex(z) for z in point)
    if expected_len is not None and len(coords) != expected_len:
        raise DimensionError(f"point has {len(coords)} coordinates, expected {expected_len}")
    for z in coords:
        if not cmath.isfinite(z):
            raise NonFiniteError(f"non-finite coordinate {z!r}")
    return coords


def _check_index(k: int, num_vars: int) -> None:
    if not 1 <= k <= num_vars:
        raise DimensionError(f"variable index {k} outside 1..{num_vars}")


# ===================================================================
# Value types
# ===================================================================

@dataclass(frozen=True)
class MultiPoly:
    """
    Sparse polynomial in num_vars complex variables.

    `terms` maps exponent tuples to nonzero complex coefficients and is kept in
    graded-lex order. The zero polynomial is the empty map. Build instances with
    `MultiPoly.from_terms`, which canonicalizes; the plain constructor trusts
    its input.
    """

    num_vars: int
    terms: Mapping[Monomial, complex]

    @classmethod
    def from_terms(cls, num_vars: int, terms: Mapping[Monomial, complex] | Iterable[tuple[Monomial, complex]]) -> "MultiPoly":
        if int(num_vars) != num_vars or num_vars < 1:
            raise DimensionError(f"num_vars must be a positive integer, got {num_vars!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Monomial, complex] = {}
        for monomial, coeff in items:
            monomial = tuple(int(e) for e in monomial)
            if len(monomial) != num_vars:
                raise DimensionError(f"monomial {monomial} has length {len(monomial)}, expected {num_vars}")
            if any(e < 0 for e in monomial):
                raise ValueError(f"negative exponent in monomial {monomial}")
            coeff = complex(coeff)
            if not cmath.isfinite(coeff):
                raise NonFiniteError(f"non-finite coefficient {coeff!r} for monomial {monomial}")
            collected[monomial] = collected.get(monomial, 0j) + coeff
        canonical = {m: collected[m] for m in sorted(collected, key=grlex_key) if collected[m] != 0}
        return cls(int(num_vars), MappingProxyType(canonical))

    @classmethod
    def null(cls, num_vars: int) -> "MultiPoly":
        return cls.from_terms(num_vars, {})

    @property
    def is_null(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        """Highest total degree of a term; -1 for the null polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, k: int) -> int:
        _check_index(k, self.num_vars)
        return max((m[k - 1] for m in self.terms), default=-1)

    def coefficient_scale(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __call__(self, point: Sequence[complex]) -> complex:
        return evaluate(self, point)


@dataclass(frozen=True, eq=False)
class UniPoly:
    """Dense univariate polynomial; coeffs[j] multiplies w**j."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("non-finite coefficient in univariate polynomial")
        nonzero = np.flatnonzero(arr)
        arr = arr[: nonzero[-1] + 1] if nonzero.size else arr[:0]
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        """Highest exponent with a nonzero coefficient; -1 for the null polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_null(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1]) if len(self.coeffs) else 0j

    def coefficient_scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def derivative(self) -> "UniPoly":
        if self.degree < 1:
            return UniPoly(np.zeros(0, dtype=complex))
        return UniPoly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def __call__(self, w):
        if self.is_null:
            return np.zeros_like(np.asarray(w, dtype=complex)) if np.ndim(w) else 0j
        value = np.polyval(self.coeffs[::-1], w)
        return complex(value) if np.ndim(w) == 0 else value

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()!r})"


# ===================================================================
# Construction
# ===================================================================

def constant(value: complex, num_vars: int) -> MultiPoly:
    return MultiPoly.from_terms(num_vars, {(0,) * num_vars: value})


def variable(k: int, num_vars: int) -> MultiPoly:
    _check_index(k, num_vars)
    exps = [0] * num_vars
    exps[k - 1] = 1
    return MultiPoly.from_terms(num_vars, {tuple(exps): 1.0})


def embed_univariate(u: UniPoly) -> MultiPoly:
    return MultiPoly.from_terms(1, {(j,): c for j, c in enumerate(u.coeffs)})


def to_univariate(p: MultiPoly) -> UniPoly:
    if p.num_vars != 1:
        raise DimensionError(f"expected a polynomial in one variable, got {p.num_vars}")
    coeffs = np.zeros(p.total_degree + 1, dtype=complex)
    for (e,), c in p.terms.items():
        coeffs[e] = c
    return UniPoly(coeffs)


def from_roots(roots: Iterable[complex]) -> UniPoly:
    """Monic polynomial with exactly the given multiset of roots; [] gives the constant 1."""
    coeffs = np.array([1.0 + 0j])
    for r in as_point(roots):
        coeffs = np.convolve(coeffs, np.array([-r, 1.0 + 0j]))
    return UniPoly(coeffs)


def random_multipoly(rng: np.random.Generator, num_vars: int, max_degree: int,
                     n_terms: int = 6, integer_coeffs: bool = False) -> MultiPoly:
    """Random polynomial on n_terms random monomials of total degree <= max_degree."""
    terms: dict[Monomial, complex] = {}
    for _ in range(n_terms):
        degree = int(rng.integers(0, max_degree + 1))
        exps = tuple(int(e) for e in rng.multinomial(degree, [1.0 / num_vars] * num_vars))
        if integer_coeffs:
            coeff = complex(int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
        else:
            coeff = complex(rng.normal(), rng.normal())
        terms[exps] = coeff
    return MultiPoly.from_terms(num_vars, terms)


# ===================================================================
# Arithmetic
# ===================================================================

def _same_vars(p: MultiPoly, q: MultiPoly) -> None:
    if p.num_vars != q.num_vars:
        raise DimensionError(f"variable counts differ: {p.num_vars} vs {q.num_vars}")


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    _same_vars(p, q)
    summed = dict(p.terms)
    for m, c in q.terms.items():
        summed[m] = summed.get(m, 0j) + c
    return MultiPoly.from_terms(p.num_vars, summed)


def poly_neg(p: MultiPoly) -> MultiPoly:
    return MultiPoly.from_terms(p.num_vars, {m: -c for m, c in p.terms.items()})


def poly_scale(p: MultiPoly, s: complex) -> MultiPoly:
    s = complex(s)
    if not cmath.isfinite(s):
        raise NonFiniteError(f"non-finite scale factor {s!r}")
    return MultiPoly.from_terms(p.num_vars, {m: c * s for m, c in p.terms.items()})


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    _same_vars(p, q)
    product: dict[Monomial, complex] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            product[m] = product.get(m, 0j) + c1 * c2
    return MultiPoly.from_terms(p.num_vars, product)


def poly_pow(p: MultiPoly, n: int) -> MultiPoly:
    if n < 0:
        raise ValueError("exponent must be a nonnegative integer")
    result = constant(1.0, p.num_vars)
    for _ in range(n):
        result = poly_mul(result, p)
    return result


# ===================================================================
# Evaluation, differentiation, restriction
# ===================================================================

def evaluate(p: MultiPoly, point: Sequence[complex]) -> complex:
    """Sum of coeff * prod(z_j ** e_j), accumulated in graded-lex term order."""
    coords = as_point(point, p.num_vars)
    total = 0j
    for monomial, coeff in p.terms.items():
        term = coeff
        for z, e in zip(coords, monomial):
            if e:
                term *= z ** e
        total += term
    return total


def evaluation_scale(p: MultiPoly, point: Sequence[complex]) -> float:
    """Sum of |coeff| * prod(max(1, |z_j|) ** e_j); the reference for residual tests."""
    coords = as_point(point, p.num_vars)
    mags = [max(1.0, abs(z)) for z in coords]
    scale = 0.0
    for monomial, coeff in p.terms.items():
        term = abs(coeff)
        for r, e in zip(mags, monomial):
            if e:
                term *= r ** e
        scale += term
    return scale


def partial_derivative(p: MultiPoly, k: int) -> MultiPoly:
    _check_index(k, p.num_vars)
    derived: dict[Monomial, complex] = {}
    for monomial, coeff in p.terms.items():
        e = monomial[k - 1]
        if e == 0:
            continue
        lowered = monomial[: k - 1] + (e - 1,) + monomial[k:]
        derived[lowered] = coeff * e
    return MultiPoly.from_terms(p.num_vars, derived)


def restrict(p: MultiPoly, k: int, others: Sequence[complex]) -> UniPoly:
    """
    The section polynomial w -> p(..., w at slot k, ...).

    Args:
        p: polynomial in M variables.
        k: 1-based slot left free.
        others: the M-1 remaining coordinates, in order, slot k omitted.

    Returns:
        UniPoly with trailing coefficients below RESTRICT_DEAD_COEFF_REL times
        the largest collected magnitude removed, so the degree reflects the
        section rather than cancellation noise. Null when the section vanishes.
    """
    _check_index(k, p.num_vars)
    fixed = as_point(others, p.num_vars - 1)
    coeffs = np.zeros(max(p.degree_in(k), 0) + 1, dtype=complex)
    for monomial, coeff in p.terms.items():
        term = coeff
        rest = monomial[: k - 1] + monomial[k:]
        for z, e in zip(fixed, rest):
            if e:
                term *= z ** e
        coeffs[monomial[k - 1]] += term

    mags = np.abs(coeffs)
    biggest = mags.max(initial=0.0)
    if biggest == 0.0:
        return UniPoly(np.zeros(0, dtype=complex))
    alive = np.flatnonzero(mags >= RESTRICT_DEAD_COEFF_REL * biggest)
    return UniPoly(coeffs[: alive[-1] + 1])


def is_canonical(p: MultiPoly) -> bool:
    """Audit: no stored zero, every monomial well formed, graded-lex order."""
    keys = list(p.terms)
    if keys != sorted(keys, key=grlex_key):
        return False
    for monomial, coeff in p.terms.items():
        if len(monomial) != p.num_vars or any(e < 0 for e in monomial):
            return False
        if coeff == 0 or not cmath.isfinite(coeff):
            return False
    return True
