"""
Finite-dimensional Lie algebras given by structure constants.

A Lie algebra g with basis e_0, ..., e_{d-1} is stored as the table
[e_i, e_j] = sum_k c^k_ij e_k for i < j only; antisymmetry is structural.
An optional positive weight per basis element records a grading, and then
every nonzero c^k_ij must satisfy weight(k) = weight(i) + weight(j).

This module validates tables (Jacobi identity, weight compatibility),
computes lower central series and nilpotency class, builds the example zoo,
and reads/writes the JSON ingestion format.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence

from src.services import free_lie
from src.services.exact_linalg import (
    SparseMatrix,
    SparseVector,
    Subspace,
    add_scaled,
    echelon_span,
    inverse,
    kernel_basis,
    quotient_section,
)
from src.utils.errors import InputError, JacobiFailure, WeightMismatch
from src.utils.rational_utils import ensure_rational, format_rational

logger = logging.getLogger(__name__)

ZOO_NAMES = ("heisenberg", "free_nilpotent", "filiform", "abelian", "sl2")

JSON_KEYS = ("dim", "basis", "brackets", "weights")


@dataclass(frozen=True)
class StructureConstants:
    """
    Structure constants of a Lie algebra.

    Attributes:
        dim: dimension
        basis_names: display names of the basis elements
        bracket: {(i, j): {k: c^k_ij}} with i < j, zeros dropped
        weights: positive weight per basis element, or None if ungraded
    """
    dim: int
    basis_names: tuple[str, ...]
    bracket: Mapping[tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)
    weights: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.dim < 0:
            raise InputError(f"Dimension must be non-negative, got {self.dim}")
        names = tuple(self.basis_names)
        if len(names) != self.dim:
            raise InputError(f"Expected {self.dim} basis names, got {len(names)}")
        object.__setattr__(self, "basis_names", names)

        if self.weights is not None:
            weights = tuple(self.weights)
            if any(isinstance(w, bool) or not isinstance(w, int) for w in weights):
                raise InputError(f"Weights must be positive integers, got {list(weights)}")
            if len(weights) != self.dim:
                raise InputError(f"Expected {self.dim} weights, got {len(weights)}")
            if any(w < 1 for w in weights):
                raise InputError(f"Weights must be positive integers, got {list(weights)}")
            object.__setattr__(self, "weights", weights)

        clean = {}
        for (i, j), coeffs in self.bracket.items():
            if not (0 <= i < j < self.dim):
                raise InputError(f"Bracket key ({i}, {j}) must satisfy 0 <= i < j < {self.dim}")
            vector = {}
            for k, c in coeffs.items():
                if not 0 <= int(k) < self.dim:
                    raise InputError(f"Bracket [{i}, {j}] has component {k} outside the basis")
                c = ensure_rational(c)
                if c != 0:
                    vector[int(k)] = c
            if vector:
                clean[(i, j)] = dict(sorted(vector.items()))
        object.__setattr__(self, "bracket", dict(sorted(clean.items())))

    def bracket_basis(self, i: int, j: int) -> SparseVector:
        """[e_i, e_j] for any i, j, using antisymmetry."""
        if i == j:
            return {}
        if i < j:
            return dict(self.bracket.get((i, j), {}))
        return {k: -c for k, c in self.bracket.get((j, i), {}).items()}

    def bracket_vectors(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> SparseVector:
        """Bilinear extension of the bracket to sparse vectors."""
        result: SparseVector = {}
        for i, a in x.items():
            for j, b in y.items():
                add_scaled(result, self.bracket_basis(i, j), a * b)
        return result


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def jacobi_defect(sc: StructureConstants, i: int, j: int, k: int) -> SparseVector:
    """[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]."""
    defect: SparseVector = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        add_scaled(defect, sc.bracket_vectors({a: Fraction(1)}, sc.bracket_basis(b, c)), Fraction(1))
    return defect


def validate(sc: StructureConstants) -> StructureConstants:
    """
    Check the Jacobi identity on every basis triple, then weight compatibility.

    Triples are scanned in lexicographic order, so the first failing one is
    reported.

    Returns:
        sc unchanged

    Raises:
        JacobiFailure: On the first triple (i, j, k), i < j < k, with nonzero defect
        WeightMismatch: If a nonzero c^k_ij breaks weight additivity
    """
    for i, j, k in combinations(range(sc.dim), 3):
        defect = jacobi_defect(sc, i, j, k)
        if defect:
            raise JacobiFailure(i, j, k, defect)

    if sc.weights is not None:
        for (i, j), coeffs in sc.bracket.items():
            for k in coeffs:
                if sc.weights[k] != sc.weights[i] + sc.weights[j]:
                    raise WeightMismatch(i, j, k)

    return sc


# ---------------------------------------------------------------------------
# Lower central series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerCentralSeries:
    """
    Terms g = g^1 >= g^2 >= ... of the lower central series.

    The sequence ends at the zero subspace, or at the first term equal to
    its predecessor (stabilized=True, the algebra is not nilpotent).
    """
    terms: tuple[Subspace, ...]
    stabilized: bool

    @property
    def dims(self) -> list[int]:
        return [term.dim for term in self.terms]


def lower_central_series(sc: StructureConstants) -> LowerCentralSeries:
    """
    Iterated bracket spans g^{i+1} = [g, g^i].

    Examples:
        heisenberg(3) -> dims [3, 1, 0]; sl2 -> dims [3, 3], stabilized
    """
    current = echelon_span([{i: Fraction(1)} for i in range(sc.dim)], sc.dim)
    terms = [current]

    while current.dim > 0:
        products = [
            sc.bracket_vectors({a: Fraction(1)}, v)
            for a in range(sc.dim)
            for v in current.basis
        ]
        following = echelon_span(products, sc.dim)
        terms.append(following)
        if following.dim == current.dim:
            logger.debug("lower central series stabilized at dimension %d", current.dim)
            return LowerCentralSeries(tuple(terms), stabilized=True)
        current = following

    return LowerCentralSeries(tuple(terms), stabilized=False)


@dataclass(frozen=True)
class NilpotencyResult:
    nilpotent: bool
    nilpotency_class: Optional[int]

    def __bool__(self) -> bool:
        return self.nilpotent


def is_nilpotent(sc: StructureConstants) -> NilpotencyResult:
    """
    Nilpotency and class: class n iff g^{n+1} = 0 != g^n.

    The zero algebra has class 0, a nonzero abelian algebra class 1.
    """
    series = lower_central_series(sc)
    if series.stabilized:
        return NilpotencyResult(False, None)
    return NilpotencyResult(True, len(series.terms) - 1)


def derived_algebra(sc: StructureConstants) -> Subspace:
    """[g, g], the second term of the lower central series."""
    series = lower_central_series(sc)
    if len(series.terms) > 1:
        return series.terms[1]
    return series.terms[0]


def center(sc: StructureConstants) -> Subspace:
    """Vectors z with [e_a, z] = 0 for every basis element e_a."""
    entries = {}
    for a in range(sc.dim):
        for b in range(sc.dim):
            for k, c in sc.bracket_basis(a, b).items():
                entries[(a * sc.dim + k, b)] = c
    return kernel_basis(SparseMatrix(sc.dim * sc.dim, sc.dim, entries))


def abelianization(sc: StructureConstants) -> StructureConstants:
    """
    g / [g, g] as an abelian algebra.

    The quotient basis consists of the basis elements not among the pivots of
    [g, g]; they keep their names and weights.
    """
    section = quotient_section(sc.dim, derived_algebra(sc))
    kept = [next(iter(rep)) for rep in section.representatives]
    weights = tuple(sc.weights[i] for i in kept) if sc.weights is not None else None
    return StructureConstants(
        dim=len(kept),
        basis_names=tuple(sc.basis_names[i] for i in kept),
        bracket={},
        weights=weights,
    )


def change_basis(sc: StructureConstants, p: SparseMatrix) -> StructureConstants:
    """
    Transport the bracket to the basis f_a = sum_i P[i][a] e_i.

    The weights are dropped; a generic change of basis does not respect them.

    Raises:
        ValueError: If P is not square of size dim, or singular
    """
    if p.shape != (sc.dim, sc.dim):
        raise ValueError(f"Change of basis must be {sc.dim}x{sc.dim}, got {p.shape}")
    p_inv = inverse(p)
    columns = p.column_vectors()

    bracket = {}
    for a, b in combinations(range(sc.dim), 2):
        old = sc.bracket_vectors(columns[a], columns[b])
        new = p_inv.apply(old)
        if new:
            bracket[(a, b)] = new

    return StructureConstants(
        dim=sc.dim,
        basis_names=tuple(f"f{a + 1}" for a in range(sc.dim)),
        bracket=bracket,
        weights=None,
    )


# ---------------------------------------------------------------------------
# Example zoo
# ---------------------------------------------------------------------------

def _default_names(dim: int) -> tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(dim))


def heisenberg(dim: int) -> StructureConstants:
    """Heisenberg algebra of dimension 2k+1: [e_i, e_{k+i}] = e_{2k+1}."""
    if dim < 3 or dim % 2 == 0:
        raise InputError(f"Heisenberg dimension must be odd and >= 3, got {dim}")
    k = (dim - 1) // 2
    bracket = {(i, k + i): {dim - 1: Fraction(1)} for i in range(k)}
    return StructureConstants(dim, _default_names(dim), bracket, weights=(1,) * (dim - 1) + (2,))


def filiform(dim: int) -> StructureConstants:
    """Standard filiform algebra: [e_1, e_i] = e_{i+1} for 2 <= i < dim."""
    if dim < 2:
        raise InputError(f"Filiform dimension must be >= 2, got {dim}")
    bracket = {(0, i): {i + 1: Fraction(1)} for i in range(1, dim - 1)}
    weights = (1,) + tuple(range(1, dim))
    return StructureConstants(dim, _default_names(dim), bracket, weights=weights)


def abelian(dim: int) -> StructureConstants:
    if dim < 0:
        raise InputError(f"Abelian dimension must be >= 0, got {dim}")
    return StructureConstants(dim, _default_names(dim), {}, weights=(1,) * dim)


def sl2() -> StructureConstants:
    """sl(2) on (h, e, f); not nilpotent, carries no weights."""
    bracket = {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    }
    return StructureConstants(3, ("h", "e", "f"), bracket, weights=None)


def free_nilpotent(m: int, n: int) -> StructureConstants:
    """L^{<=n}(Q^m) on its Lyndon basis, weighted by word length."""
    presentation = free_lie.free_nilpotent(m, n)
    return StructureConstants(
        dim=presentation.dim,
        basis_names=tuple(presentation.basis_names),
        bracket=presentation.brackets,
        weights=tuple(presentation.weights),
    )


def example(name: str, params: Sequence[int] = ()) -> StructureConstants:
    """
    Build and validate a member of the zoo.

    Args:
        name: heisenberg, free_nilpotent, filiform, abelian or sl2
        params: integer parameters (dim; or m, n for free_nilpotent)

    Raises:
        InputError: Unknown name or wrong parameters
    """
    params = [int(p) for p in params]
    expected = {"heisenberg": 1, "filiform": 1, "abelian": 1, "free_nilpotent": 2, "sl2": 0}
    if name not in expected:
        raise InputError(f"Unknown algebra '{name}'. Known: {', '.join(ZOO_NAMES)}")
    if len(params) != expected[name]:
        raise InputError(f"{name} takes {expected[name]} parameter(s), got {len(params)}")

    if name == "heisenberg":
        sc = heisenberg(params[0])
    elif name == "filiform":
        sc = filiform(params[0])
    elif name == "abelian":
        sc = abelian(params[0])
    elif name == "free_nilpotent":
        sc = free_nilpotent(params[0], params[1])
    else:
        sc = sl2()

    return validate(sc)


def parse_algebra_spec(text: str) -> tuple[str, list[int]]:
    """
    Split "name:p1,p2" into its name and integer parameters.

    Examples:
        >>> parse_algebra_spec("free_nilpotent:2,3")
        ('free_nilpotent', [2, 3])

        >>> parse_algebra_spec("sl2")
        ('sl2', [])
    """
    name, _, rest = text.strip().partition(":")
    if not name:
        raise InputError("Empty algebra name")
    params = []
    for piece in filter(None, (p.strip() for p in rest.split(","))):
        try:
            params.append(int(piece))
        except ValueError:
            raise InputError(f"Algebra parameter '{piece}' is not an integer") from None
    return name, params


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

def to_json_dict(sc: StructureConstants) -> dict:
    data = {
        "dim": sc.dim,
        "basis": list(sc.basis_names),
        "brackets": [
            {
                "i": i,
                "j": j,
                "coeffs": {str(k): format_rational(c) for k, c in sorted(coeffs.items())},
            }
            for (i, j), coeffs in sorted(sc.bracket.items())
        ],
    }
    if sc.weights is not None:
        data["weights"] = list(sc.weights)
    return data


def serialize(sc: StructureConstants) -> str:
    """Canonical JSON text; ingest(serialize(sc)) == sc."""
    return json.dumps(to_json_dict(sc), sort_keys=True, indent=2)


def from_json_dict(data) -> StructureConstants:
    """Build structure constants from the decoded JSON object (no Jacobi check)."""
    if not isinstance(data, dict):
        raise InputError("Algebra description must be a JSON object")
    for key in ("dim", "basis", "brackets"):
        if key not in data:
            raise InputError(f"Algebra description is missing '{key}'")
    unknown = sorted(set(data) - set(JSON_KEYS))
    if unknown:
        raise InputError(f"Unknown field(s) in algebra description: {', '.join(map(str, unknown))}")

    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError(f"'dim' must be an integer, got {dim!r}")
    for key in ("basis", "brackets"):
        if not isinstance(data[key], list):
            raise InputError(f"'{key}' must be a list, got {data[key]!r}")
    if data.get("weights") is not None and not isinstance(data["weights"], list):
        raise InputError(f"'weights' must be a list, got {data['weights']!r}")

    bracket = {}
    for entry in data["brackets"]:
        if not isinstance(entry, dict):
            raise InputError(f"Malformed bracket entry {entry!r}")
        try:
            i, j, coeffs = entry["i"], entry["j"], entry["coeffs"]
        except KeyError:
            raise InputError(f"Malformed bracket entry {entry!r}") from None
        if not isinstance(coeffs, dict):
            raise InputError(f"Bracket ({i}, {j}) needs a 'coeffs' object, got {coeffs!r}")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in (i, j)):
            raise InputError(f"Bracket indices must be integers, got {entry!r}")
        if i >= j:
            raise InputError(f"Bracket entries need i < j, got i={i}, j={j}")
        if (i, j) in bracket:
            raise InputError(f"Duplicate bracket entry for ({i}, {j})")
        try:
            bracket[(i, j)] = {int(k): ensure_rational(v) for k, v in coeffs.items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"Bad coefficients in bracket ({i}, {j}): {exc}") from None

    return StructureConstants(
        dim=dim,
        basis_names=tuple(str(name) for name in data["basis"]),
        bracket=bracket,
        weights=tuple(data["weights"]) if data.get("weights") is not None else None,
    )


def ingest(text: str) -> StructureConstants:
    """
    Parse the JSON ingestion format.

    Raises:
        InputError: On malformed JSON or fields
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"Invalid JSON: {exc}") from None
    return from_json_dict(data)
