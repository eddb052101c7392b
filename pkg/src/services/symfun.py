"""
Partitions, Schur polynomials and the truncated Littlewood identity.

The identity checked is

    prod_i (1 - x_i) prod_{i<j} (1 - x_i x_j)
        = sum over self-conjugate lambda of (-1)^{(|lambda| + r(lambda))/2} s_lambda(x),

with r(lambda) the number of diagonal boxes, as an equality of power series
truncated at a total degree. The left side is the graded Euler
characteristic of the cochains of the free 2-step nilpotent Lie algebra;
graded_euler checks the analogous single-variable identity for any weighted
Lie algebra.

Polynomials are printed in graded lex order with x1 < x2 < ...: lower total
degree first, then larger exponent of x1, and so on.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterator, Mapping, Optional, Sequence

import sympy

from src.services.chevalley import ce_complex, cohomology, weighted_betti
from src.services.lie_model import StructureConstants
from src.utils.errors import InputError, UnweightedInput
from src.utils.rational_utils import ensure_rational, format_rational

logger = logging.getLogger(__name__)

# Truncation degree used when none is given
DEFAULT_DEGREE_BOUND = 10

Exponents = tuple[int, ...]


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts."""
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise InputError(f"Partition parts must be positive, got {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InputError(f"Partition parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def rank(self) -> int:
        """Number of diagonal boxes: #{i : lambda_i >= i}."""
        return sum(1 for i, p in enumerate(self.parts, start=1) if p >= i)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(tuple(sum(1 for p in self.parts if p > c) for c in range(self.parts[0])))

    def is_self_conjugate(self) -> bool:
        return self.conjugate() == self

    def boxes(self) -> set[tuple[int, int]]:
        return {(r, c) for r, p in enumerate(self.parts) for c in range(p)}

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def conjugate(partition: Partition) -> Partition:
    """
    Column lengths of the diagram.

    Examples:
        >>> conjugate(Partition((3, 1)))
        Partition(parts=(2, 1, 1))
    """
    return partition.conjugate()


def partitions_of(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + rest.parts)


def self_conjugate_partitions(max_size: int) -> list[Partition]:
    """
    Self-conjugate partitions of size <= max_size, by size then parts.

    A self-conjugate partition of rank r is determined by its diagonal hooks,
    which have distinct odd lengths 2a_1 + 1 > ... > 2a_r + 1; its first r
    parts are a_i + i, and the remaining parts are read off by conjugation.
    """
    found = []
    odd_hooks = list(range(1, max_size + 1, 2))
    for r in range(0, len(odd_hooks) + 1):
        for hooks in combinations(sorted(odd_hooks, reverse=True), r):
            if sum(hooks) > max_size:
                continue
            arms = [(h - 1) // 2 for h in hooks]
            top = [a + i for i, a in enumerate(arms, start=1)]
            # rows below the diagonal block: row i > r has #{j : top_j >= i} boxes
            bottom = []
            row = r + 1
            while True:
                length = sum(1 for t in top if t >= row)
                if length == 0:
                    break
                bottom.append(length)
                row += 1
            found.append(Partition(tuple(top + bottom)))
    return sorted(found, key=lambda p: (p.size, p.parts))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparsePolynomial:
    """
    Polynomial in x1..x_nvars with rational coefficients.

    Terms of total degree above truncation (when set) are dropped on
    construction and after every product.
    """
    nvars: int
    terms: Mapping[Exponents, Fraction] = field(default_factory=dict)
    truncation: Optional[int] = None

    def __post_init__(self):
        clean = {}
        for exps, coeff in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps):
                raise InputError(f"Exponent vector {exps} does not fit {self.nvars} variables")
            if self.truncation is not None and sum(exps) > self.truncation:
                continue
            coeff = ensure_rational(coeff)
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    @classmethod
    def constant(cls, value, nvars: int, truncation: Optional[int] = None) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: ensure_rational(value)}, truncation)

    @classmethod
    def variable(cls, i: int, nvars: int, truncation: Optional[int] = None) -> "SparsePolynomial":
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {exps: Fraction(1)}, truncation)

    def _combined_truncation(self, other: "SparsePolynomial") -> Optional[int]:
        bounds = [t for t in (self.truncation, other.truncation) if t is not None]
        return min(bounds) if bounds else None

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return SparsePolynomial(self.nvars, terms, self._combined_truncation(other))

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, {e: -c for e, c in self.terms.items()}, self.truncation)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        bound = self._combined_truncation(other)
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if bound is not None and sum(exps) > bound:
                    continue
                terms[exps] = terms.get(exps, 0) + c1 * c2
        return SparsePolynomial(self.nvars, terms, bound)

    def scaled(self, factor) -> "SparsePolynomial":
        factor = ensure_rational(factor)
        return SparsePolynomial(self.nvars, {e: c * factor for e, c in self.terms.items()}, self.truncation)

    def truncate(self, degree: int) -> "SparsePolynomial":
        return SparsePolynomial(self.nvars, self.terms, degree)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Graded lex order: degree ascending, then larger powers of x1, x2, ..."""
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0])))

    def __str__(self) -> str:
        return format_polynomial(self)


def _format_monomial(exps: Exponents, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_polynomial(poly: SparsePolynomial, names: Optional[Sequence[str]] = None) -> str:
    """
    Canonical text form, e.g. "1 - x1 - x2 + x1^2*x2".

    Examples:
        >>> format_polynomial(SparsePolynomial(1, {(0,): 1, (1,): -1}))
        '1 - x1'
    """
    names = names or [f"x{i + 1}" for i in range(poly.nvars)]
    pieces = []
    for exps, coeff in poly.sorted_terms():
        monomial = _format_monomial(exps, names)
        magnitude = abs(coeff)
        if not monomial:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_rational(magnitude)}*{monomial}"
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(pieces) if pieces else "0"


def polynomial_to_json(poly: SparsePolynomial) -> list[dict]:
    return [
        {"exponents": list(exps), "coeff": format_rational(c)}
        for exps, c in poly.sorted_terms()
    ]


# ---------------------------------------------------------------------------
# Schur polynomials
# ---------------------------------------------------------------------------

def semistandard_tableaux(shape: Partition, m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """
    Semistandard fillings of shape with entries 1..m: rows weakly increase,
    columns strictly increase. Filled row by row, left to right.
    """
    cells = [(r, c) for r, p in enumerate(shape.parts) for c in range(p)]
    filling: dict[tuple[int, int], int] = {}

    def fill(position: int):
        if position == len(cells):
            yield tuple(tuple(filling[(r, c)] for c in range(p)) for r, p in enumerate(shape.parts))
            return
        r, c = cells[position]
        low = 1
        if c > 0:
            low = max(low, filling[(r, c - 1)])
        if r > 0:
            low = max(low, filling[(r - 1, c)] + 1)
        for value in range(low, m + 1):
            filling[(r, c)] = value
            yield from fill(position + 1)
        filling.pop((r, c), None)

    yield from fill(0)


def schur(partition: Partition, m: int, degree_bound: Optional[int] = None) -> SparsePolynomial:
    """
    s_lambda(x_1, ..., x_m) by tableau enumeration.

    Zero when lambda has more than m rows.

    Examples:
        >>> str(schur(Partition((2, 1)), 2))
        'x1^2*x2 + x1*x2^2'
    """
    if m < 1:
        raise InputError(f"Number of variables must be >= 1, got {m}")
    terms: dict[Exponents, Fraction] = {}
    if partition.length <= m:
        for tableau in semistandard_tableaux(partition, m):
            exps = [0] * m
            for row in tableau:
                for value in row:
                    exps[value - 1] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + Fraction(1)
    return SparsePolynomial(m, terms, degree_bound)


def schur_bialternant(partition: Partition, m: int) -> SparsePolynomial:
    """
    s_lambda as det(x_i^(lambda_j + m - j)) / det(x_i^(m - j)), via sympy.
    """
    if m < 1:
        raise InputError(f"Number of variables must be >= 1, got {m}")
    if partition.length > m:
        return SparsePolynomial(m, {})

    xs = sympy.symbols(f"x1:{m + 1}")
    parts = list(partition.parts) + [0] * (m - partition.length)
    numerator = sympy.Matrix(m, m, lambda i, j: xs[i] ** (parts[j] + m - 1 - j)).det()
    denominator = sympy.Matrix(m, m, lambda i, j: xs[i] ** (m - 1 - j)).det()
    quotient, remainder = sympy.div(sympy.Poly(numerator, *xs), sympy.Poly(denominator, *xs))
    if not remainder.is_zero:
        raise ArithmeticError(f"Bialternant of {partition} left a remainder")

    terms = {
        tuple(int(e) for e in exps): Fraction(int(c.p), int(c.q))
        for exps, c in quotient.terms()
    }
    return SparsePolynomial(m, terms)


# ---------------------------------------------------------------------------
# Littlewood identity
# ---------------------------------------------------------------------------

def littlewood_sign(partition: Partition) -> int:
    twice = partition.size + partition.rank
    if twice % 2:
        raise ValueError(f"|lambda| + r(lambda) is odd for {partition}")
    return -1 if (twice // 2) % 2 else 1


def littlewood_lhs(m: int, degree_bound: int) -> SparsePolynomial:
    """prod (1 - x_i) prod_{i<j} (1 - x_i x_j), truncated."""
    one = SparsePolynomial.constant(1, m, degree_bound)
    xs = [SparsePolynomial.variable(i, m, degree_bound) for i in range(m)]
    factors = [one - x for x in xs]
    factors += [one - xs[i] * xs[j] for i, j in combinations(range(m), 2)]
    return reduce(lambda a, b: a * b, factors, one)


def littlewood_rhs(m: int, degree_bound: int) -> SparsePolynomial:
    total = SparsePolynomial(m, {}, degree_bound)
    for partition in self_conjugate_partitions(degree_bound):
        total = total + schur(partition, m, degree_bound).scaled(littlewood_sign(partition))
    return total


@dataclass(frozen=True)
class LittlewoodResult:
    ok: bool
    lhs: SparsePolynomial
    rhs: SparsePolynomial
    mismatch: Optional[tuple[Exponents, Fraction, Fraction]] = None


def littlewood_check(m: int, degree_bound: int = DEFAULT_DEGREE_BOUND) -> LittlewoodResult:
    """
    Compare both sides term by term up to degree_bound.

    Returns:
        LittlewoodResult; on failure, mismatch holds the first differing
        monomial in graded lex order with its two coefficients

    Raises:
        InputError: If m < 1 or degree_bound < 1
    """
    if m < 1 or degree_bound < 1:
        raise InputError(f"littlewood_check needs m >= 1 and degree_bound >= 1, got {m}, {degree_bound}")

    lhs = littlewood_lhs(m, degree_bound)
    rhs = littlewood_rhs(m, degree_bound)
    difference = lhs - rhs
    mismatch = None
    if not difference.is_zero():
        exps, _ = difference.sorted_terms()[0]
        mismatch = (exps, lhs.terms.get(exps, Fraction(0)), rhs.terms.get(exps, Fraction(0)))
    logger.info("Littlewood m=%d, degree <= %d: %s", m, degree_bound, "ok" if mismatch is None else mismatch)
    return LittlewoodResult(mismatch is None, lhs, rhs, mismatch)


# ---------------------------------------------------------------------------
# Graded Euler characteristic
# ---------------------------------------------------------------------------

def euler_product(weights: Sequence[int]) -> SparsePolynomial:
    """prod over basis elements of (1 - t^weight)."""
    one = SparsePolynomial.constant(1, 1)
    return reduce(
        lambda acc, w: acc * (one - SparsePolynomial(1, {(w,): Fraction(1)})),
        weights,
        one,
    )


@dataclass(frozen=True)
class GradedEulerResult:
    ok: bool
    cohomology_side: SparsePolynomial
    product_side: SparsePolynomial


def graded_euler(sc: StructureConstants) -> GradedEulerResult:
    """
    sum_k (-1)^k (weight series of H^k) against prod (1 - t^w).

    Raises:
        UnweightedInput: If sc has no weights
    """
    if sc.weights is None:
        raise UnweightedInput("The graded Euler characteristic needs a weighted algebra")

    table = weighted_betti(cohomology(ce_complex(sc)))
    terms: dict[Exponents, Fraction] = {}
    for degree, row in table.items():
        for weight, count in row.items():
            terms[(weight,)] = terms.get((weight,), 0) + (-1) ** degree * count
    cohomology_side = SparsePolynomial(1, terms)
    product_side = euler_product(sc.weights)
    return GradedEulerResult(cohomology_side == product_side, cohomology_side, product_side)
