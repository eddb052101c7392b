"""
Chevalley-Eilenberg cochains, cohomology and the deformation retract onto it.

For a Lie algebra g with dual basis e_0*, ..., e_{d-1}*, the cochains are the
exterior algebra on g*, graded by form degree, with basis the strictly
increasing index tuples in lexicographic order. The differential is

    delta(e_k*) = - sum_{i<j} c^k_ij e_i* ^ e_j*

extended as a derivation: delta(a ^ b) = delta(a) ^ b + (-1)^|a| a ^ delta(b).

Cohomology is computed degree by degree together with a splitting
Lambda^k = H_k + B_k + A_k (representatives, coboundaries, a complement on
which delta is injective). From the splitting come i, p and h with

    p i = id,  delta h + h delta = id - i p,  h h = 0,  h i = 0,  p h = 0.

All choices are made by deterministic greedy pivoting.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Optional

from src.services.exact_linalg import (
    SparseMatrix,
    SparseVector,
    Subspace,
    extend_basis,
    inverse,
    kernel_basis,
)
from src.services.lie_model import StructureConstants
from src.utils.errors import InvariantViolation

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def wedge(left: Monomial, right: Monomial) -> tuple[int, Optional[Monomial]]:
    """
    Product of two exterior basis monomials.

    Returns:
        (sign, merged tuple), or (0, None) if they share an index

    Examples:
        >>> wedge((1,), (0,))
        (-1, (0, 1))

        >>> wedge((0, 2), (1,))
        (-1, (0, 1, 2))
    """
    if set(left) & set(right):
        return 0, None
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1) ** inversions, tuple(sorted(left + right))


def _sort_with_sign(sequence: tuple[int, ...]) -> tuple[int, Optional[Monomial]]:
    if len(set(sequence)) != len(sequence):
        return 0, None
    inversions = sum(
        1 for a in range(len(sequence)) for b in range(a + 1, len(sequence)) if sequence[a] > sequence[b]
    )
    return (-1) ** inversions, tuple(sorted(sequence))


@dataclass(frozen=True)
class CochainComplex:
    """
    Chevalley-Eilenberg complex of a Lie algebra.

    Attributes:
        algebra: the structure constants it was built from
        bases: bases[k] lists the monomials of Lambda^k in lex order
        differentials: differentials[k] is delta_k: Lambda^k -> Lambda^{k+1};
            the last one maps to the zero space
        weights: weights[k][t] is the weight of bases[k][t], or None
    """
    algebra: StructureConstants
    bases: tuple[tuple[Monomial, ...], ...]
    differentials: tuple[SparseMatrix, ...]
    weights: Optional[tuple[tuple[int, ...], ...]]

    @property
    def top_degree(self) -> int:
        return len(self.bases) - 1

    def dim(self, k: int) -> int:
        if 0 <= k < len(self.bases):
            return len(self.bases[k])
        return 0

    def position(self, monomial: Monomial) -> int:
        return self._positions()[len(monomial)][monomial]

    def differential(self, k: int) -> SparseMatrix:
        """delta_k, with zero maps outside the range of degrees."""
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return SparseMatrix.zero(self.dim(k + 1), self.dim(k))

    def wedge_vectors(self, p: int, x: Mapping[int, Fraction], q: int, y: Mapping[int, Fraction]) -> SparseVector:
        """Wedge product of a p-form and a q-form given in basis coordinates."""
        result: SparseVector = {}
        if p + q > self.top_degree:
            return result
        target = self._positions()[p + q]
        for a, ca in x.items():
            for b, cb in y.items():
                sign, merged = wedge(self.bases[p][a], self.bases[q][b])
                if sign:
                    idx = target[merged]
                    value = result.get(idx, 0) + sign * ca * cb
                    if value:
                        result[idx] = value
                    else:
                        result.pop(idx, None)
        return result

    def _positions(self) -> list[dict[Monomial, int]]:
        cached = self.__dict__.get("_position_cache")
        if cached is None:
            cached = [{mono: t for t, mono in enumerate(basis)} for basis in self.bases]
            object.__setattr__(self, "_position_cache", cached)
        return cached


def _delta_generator(sc: StructureConstants) -> list[dict[Monomial, Fraction]]:
    """delta(e_k*) as a combination of 2-monomials, for each k."""
    images: list[dict[Monomial, Fraction]] = [dict() for _ in range(sc.dim)]
    for (i, j), coeffs in sc.bracket.items():
        for k, c in coeffs.items():
            images[k][(i, j)] = images[k].get((i, j), 0) - c
    return images


def ce_complex(sc: StructureConstants) -> CochainComplex:
    """
    Build the cochain complex and verify delta^2 = 0.

    Raises:
        InvariantViolation: If delta^2 != 0 or delta breaks the weight grading
    """
    n = sc.dim
    bases = tuple(tuple(combinations(range(n), k)) for k in range(n + 1))
    positions = [{mono: t for t, mono in enumerate(basis)} for basis in bases]
    generator_images = _delta_generator(sc)

    differentials = []
    for k in range(n + 1):
        entries: dict[tuple[int, int], Fraction] = {}
        if k < n:
            for col, mono in enumerate(bases[k]):
                for r, index in enumerate(mono):
                    prefix, suffix = mono[:r], mono[r + 1:]
                    for pair, c in generator_images[index].items():
                        sign, merged = _sort_with_sign(prefix + pair + suffix)
                        if not sign:
                            continue
                        key = (positions[k + 1][merged], col)
                        value = entries.get(key, 0) + (-1) ** r * sign * c
                        if value:
                            entries[key] = value
                        else:
                            entries.pop(key, None)
        rows = len(bases[k + 1]) if k < n else 0
        differentials.append(SparseMatrix(rows, len(bases[k]), entries))

    weights = None
    if sc.weights is not None:
        weights = tuple(tuple(sum(sc.weights[i] for i in mono) for mono in basis) for basis in bases)

    cx = CochainComplex(algebra=sc, bases=bases, differentials=tuple(differentials), weights=weights)
    _assert_square_zero(cx)
    if weights is not None:
        _assert_weight_preserving(cx)

    logger.info("CE complex of dim %d algebra: degree dims %s", n, [len(b) for b in bases])
    return cx


def _assert_square_zero(cx: CochainComplex) -> None:
    for k in range(cx.top_degree - 1):
        square = cx.differential(k + 1) @ cx.differential(k)
        if not square.is_zero():
            raise InvariantViolation(f"delta^2 != 0 from degree {k}: {len(square.entries)} nonzero entries")


def _assert_weight_preserving(cx: CochainComplex) -> None:
    for k, delta in enumerate(cx.differentials):
        for (r, c) in delta.entries:
            if cx.weights[k + 1][r] != cx.weights[k][c]:
                raise InvariantViolation(f"delta does not preserve weight in degree {k}")


# ---------------------------------------------------------------------------
# Cohomology and splitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegreeSplitting:
    """
    Lambda^k = H_k + B_k + A_k in one degree.

    representatives span H_k, coboundaries span B_k = delta(A_{k-1}) (ordered
    as the images of A_{k-1}), complement lists the positions of the unit
    vectors spanning A_k. decomposition is the inverse of the matrix whose
    columns are [H_k | B_k | A_k].
    """
    degree: int
    cocycles: Subspace
    representatives: tuple[SparseVector, ...]
    coboundaries: tuple[SparseVector, ...]
    complement: tuple[int, ...]
    decomposition: SparseMatrix

    @property
    def betti(self) -> int:
        return len(self.representatives)


@dataclass(frozen=True)
class CohomologyData:
    complex: CochainComplex
    degrees: tuple[DegreeSplitting, ...]

    @property
    def betti(self) -> list[int]:
        return [d.betti for d in self.degrees]

    def representative_weight(self, k: int, t: int) -> Optional[int]:
        """Weight of the t-th representative in degree k (representatives are homogeneous)."""
        if self.complex.weights is None:
            return None
        vector = self.degrees[k].representatives[t]
        return self.complex.weights[k][min(vector)]


def cohomology(cx: CochainComplex) -> CohomologyData:
    """
    Betti numbers, representatives and the splitting H + B + A per degree.

    Examples:
        heisenberg(3) -> Betti [1, 2, 2, 1]
    """
    degrees = []
    previous_images: tuple[SparseVector, ...] = ()

    for k in range(cx.top_degree + 1):
        delta = cx.differential(k)
        columns = delta.column_vectors()
        cocycles = kernel_basis(delta)

        complement = tuple(extend_basis([], columns))
        images = tuple(columns[t] for t in complement)

        chosen = extend_basis(previous_images, cocycles.basis)
        representatives = tuple(cocycles.basis[t] for t in chosen)

        frame = list(representatives) + list(previous_images) + [{t: Fraction(1)} for t in complement]
        if len(frame) != cx.dim(k):
            raise InvariantViolation(
                f"Splitting of degree {k} has {len(frame)} vectors for a space of dimension {cx.dim(k)}"
            )
        decomposition = inverse(SparseMatrix.from_columns(frame, cx.dim(k)))

        degrees.append(DegreeSplitting(
            degree=k,
            cocycles=cocycles,
            representatives=representatives,
            coboundaries=previous_images,
            complement=complement,
            decomposition=decomposition,
        ))
        previous_images = images

    coh = CohomologyData(complex=cx, degrees=tuple(degrees))
    logger.info("Betti numbers %s", coh.betti)
    return coh


def weighted_betti(coh: CohomologyData) -> dict[int, dict[int, int]]:
    """
    Betti numbers refined by weight: {degree: {weight: count}}.

    Raises:
        ValueError: If the algebra carries no weights
    """
    if coh.complex.weights is None:
        raise ValueError("Weighted Betti numbers need a weighted algebra")
    table: dict[int, dict[int, int]] = {}
    for split in coh.degrees:
        row: dict[int, int] = {}
        for t in range(split.betti):
            w = coh.representative_weight(split.degree, t)
            row[w] = row.get(w, 0) + 1
        table[split.degree] = dict(sorted(row.items()))
    return table


# ---------------------------------------------------------------------------
# Retract data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransferData:
    """
    Deformation retract of the cochains onto cohomology, per degree.

    inclusion[k]: H^k -> Lambda^k, projection[k]: Lambda^k -> H^k,
    homotopy[k]: Lambda^k -> Lambda^{k-1} (zero on H + A, inverse of delta on B).
    """
    complex: CochainComplex
    inclusion: tuple[SparseMatrix, ...]
    projection: tuple[SparseMatrix, ...]
    homotopy: tuple[SparseMatrix, ...]

    def homotopy_at(self, k: int) -> SparseMatrix:
        if 0 <= k < len(self.homotopy):
            return self.homotopy[k]
        return SparseMatrix.zero(self.complex.dim(k - 1), self.complex.dim(k))


def retract_data(cx: CochainComplex, coh: CohomologyData) -> TransferData:
    """
    Build i, p, h from the splitting and verify the side conditions.

    Raises:
        InvariantViolation: If any side condition fails
    """
    inclusion, projection, homotopy = [], [], []

    for split in coh.degrees:
        k = split.degree
        h_count = split.betti
        b_count = len(split.coboundaries)
        minv_rows = split.decomposition.row_vectors()

        inclusion.append(SparseMatrix.from_columns(list(split.representatives), cx.dim(k)))
        projection.append(SparseMatrix.from_rows(minv_rows[:h_count], cx.dim(k)))

        # coboundaries[j] = delta(e_t) for t = complement of degree k-1, position j
        entries = {}
        if k > 0:
            source_complement = coh.degrees[k - 1].complement
            for j, row in enumerate(minv_rows[h_count:h_count + b_count]):
                target = source_complement[j]
                for col, c in row.items():
                    entries[(target, col)] = c
        homotopy.append(SparseMatrix(cx.dim(k - 1), cx.dim(k), entries))

    td = TransferData(
        complex=cx,
        inclusion=tuple(inclusion),
        projection=tuple(projection),
        homotopy=tuple(homotopy),
    )

    failures = [name for name, ok in verify_side_conditions(td) if not ok]
    if failures:
        raise InvariantViolation(f"Retract side conditions fail: {', '.join(failures)}")
    return td


def verify_side_conditions(td: TransferData) -> list[tuple[str, bool]]:
    """
    Check the five retract identities exactly, degree by degree.

    Returns:
        [(name, holds)] for "p_i_identity", "homotopy_relation", "h_squared_zero",
        "h_i_zero", "p_h_zero"
    """
    cx = td.complex
    results = {name: True for name in ("p_i_identity", "homotopy_relation", "h_squared_zero", "h_i_zero", "p_h_zero")}

    for k in range(cx.top_degree + 1):
        i_k, p_k, h_k = td.inclusion[k], td.projection[k], td.homotopy_at(k)
        n_k = cx.dim(k)

        if (p_k @ i_k) != SparseMatrix.identity(p_k.rows):
            results["p_i_identity"] = False

        lhs = td.homotopy_at(k + 1) @ cx.differential(k)
        if k > 0:
            lhs = lhs + cx.differential(k - 1) @ h_k
        if lhs != SparseMatrix.identity(n_k) - i_k @ p_k:
            results["homotopy_relation"] = False

        if k > 0:
            if not (td.homotopy_at(k - 1) @ h_k).is_zero():
                results["h_squared_zero"] = False
            if not (td.projection[k - 1] @ h_k).is_zero():
                results["p_h_zero"] = False
        if not (h_k @ i_k).is_zero():
            results["h_i_zero"] = False

    return list(results.items())


def euler_characteristic(coh: CohomologyData) -> int:
    return sum((-1) ** k * b for k, b in enumerate(coh.betti))


def exterior_dimensions(dim: int) -> list[int]:
    return [comb(dim, k) for k in range(dim + 1)]
