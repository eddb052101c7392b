"""
Exact rational sparse linear algebra.

Every cohomology, transfer and bar computation in the library reduces to
ranks, kernels, complements and linear solves over the rationals. All of
them are done here with fractions.Fraction; there is no floating point
anywhere.

Vectors are sparse dicts {index: Fraction} with no stored zeros. Matrices are
immutable SparseMatrix values. Elimination uses leftmost pivots, rows taken
in their given order, so every basis produced here is reproducible.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from src.utils.errors import NoSolution
from src.utils.rational_utils import ensure_rational

logger = logging.getLogger(__name__)

# Matrices with at most this many cells are ranked by dense elimination
DENSE_THRESHOLD = 400

SparseVector = dict[int, Fraction]


# ---------------------------------------------------------------------------
# Sparse vectors
# ---------------------------------------------------------------------------

def as_sparse_vector(values) -> SparseVector:
    """
    Normalize a vector given as a dict or a dense sequence.

    Args:
        values: Mapping {index: number} or a sequence of numbers

    Returns:
        SparseVector with Fraction coefficients and no zeros
    """
    if isinstance(values, Mapping):
        items = values.items()
    else:
        items = enumerate(values)

    vector = {}
    for idx, coeff in items:
        coeff = ensure_rational(coeff)
        if coeff != 0:
            vector[int(idx)] = coeff
    return vector


def add_scaled(target: SparseVector, source: Mapping[int, Fraction], factor: Fraction) -> None:
    """In place: target += factor * source, dropping entries that cancel."""
    if factor == 0:
        return
    for idx, coeff in source.items():
        value = target.get(idx, 0) + factor * coeff
        if value:
            target[idx] = value
        else:
            target.pop(idx, None)


def linear_combination(terms: Iterable[tuple[Fraction, Mapping[int, Fraction]]]) -> SparseVector:
    """Sum of coeff * vector over (coeff, vector) pairs."""
    result: SparseVector = {}
    for coeff, vector in terms:
        add_scaled(result, vector, coeff)
    return result


# ---------------------------------------------------------------------------
# Sparse matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseMatrix:
    """
    Immutable rows x cols matrix over the rationals.

    Attributes:
        rows: number of rows
        cols: number of columns
        entries: {(row, col): Fraction}, zeros never stored
    """
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Matrix shape must be non-negative, got {self.rows}x{self.cols}")

        clean = {}
        for (r, c), coeff in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            coeff = ensure_rational(coeff)
            if coeff != 0:
                clean[(r, c)] = coeff
        object.__setattr__(self, "entries", clean)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("Ragged dense matrix")
            for c, value in enumerate(row):
                value = ensure_rational(value)
                if value:
                    entries[(r, c)] = value
        return cls(rows, cols, entries)

    @classmethod
    def from_rows(cls, row_vectors: Sequence[Mapping[int, Fraction]], cols: int) -> "SparseMatrix":
        entries = {}
        for r, vector in enumerate(row_vectors):
            for c, coeff in vector.items():
                entries[(r, c)] = coeff
        return cls(len(row_vectors), cols, entries)

    @classmethod
    def from_columns(cls, column_vectors: Sequence[Mapping[int, Fraction]], rows: int) -> "SparseMatrix":
        entries = {}
        for c, vector in enumerate(column_vectors):
            for r, coeff in vector.items():
                entries[(r, c)] = coeff
        return cls(rows, len(column_vectors), entries)

    # -- views ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row_vectors(self) -> list[SparseVector]:
        result = [dict() for _ in range(self.rows)]
        for (r, c), coeff in self.entries.items():
            result[r][c] = coeff
        return result

    def column_vectors(self) -> list[SparseVector]:
        result = [dict() for _ in range(self.cols)]
        for (r, c), coeff in self.entries.items():
            result[c][r] = coeff
        return result

    def column(self, c: int) -> SparseVector:
        return {r: coeff for (r, cc), coeff in self.entries.items() if cc == c}

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), coeff in self.entries.items():
            dense[r][c] = coeff
        return dense

    def is_zero(self) -> bool:
        return not self.entries

    # -- arithmetic -----------------------------------------------------------

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def apply(self, vector: Mapping[int, Fraction]) -> SparseVector:
        """Matrix-vector product for a sparse vector of length cols."""
        columns = self._column_index()
        result: SparseVector = {}
        for c, coeff in vector.items():
            if c in columns:
                add_scaled(result, columns[c], coeff)
        return result

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        own_columns = self._column_index()
        entries: dict[tuple[int, int], Fraction] = {}
        for (k, c), coeff in other.entries.items():
            for r, a in own_columns.get(k, {}).items():
                value = entries.get((r, c), 0) + a * coeff
                if value:
                    entries[(r, c)] = value
                else:
                    entries.pop((r, c), None)
        return SparseMatrix(self.rows, other.cols, entries)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self.matmul(other)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Cannot add {self.shape} and {other.shape}")
        entries = dict(self.entries)
        for key, coeff in other.entries.items():
            entries[key] = entries.get(key, 0) + coeff
        return SparseMatrix(self.rows, self.cols, entries)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scaled(self, factor) -> "SparseMatrix":
        factor = ensure_rational(factor)
        return SparseMatrix(self.rows, self.cols, {k: v * factor for k, v in self.entries.items()})

    def _column_index(self) -> dict[int, SparseVector]:
        columns: dict[int, SparseVector] = {}
        for (r, c), coeff in self.entries.items():
            columns.setdefault(c, {})[r] = coeff
        return columns


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------

def _reduce(vector: Mapping[int, Fraction], pivots: Mapping[int, SparseVector]) -> SparseVector:
    """
    Eliminate every pivot column from vector.

    Each pivot row has coefficient 1 at its pivot column and only larger
    columns besides, so sweeping pivot columns left to right terminates.
    """
    residual = dict(vector)
    last = -1
    while True:
        candidates = [c for c in residual if c > last and c in pivots]
        if not candidates:
            return residual
        col = min(candidates)
        add_scaled(residual, pivots[col], -residual[col])
        last = col


class _Echelon:
    """Incremental row echelon form; rows are added one at a time."""

    def __init__(self):
        self.pivots: dict[int, SparseVector] = {}

    def add(self, vector: Mapping[int, Fraction]) -> bool:
        """Add a vector; return True if it was independent of the rows so far."""
        residual = _reduce(vector, self.pivots)
        if not residual:
            return False
        col = min(residual)
        lead = residual[col]
        self.pivots[col] = {c: v / lead for c, v in residual.items()}
        return True

    def reduced_rows(self) -> list[tuple[int, SparseVector]]:
        """Back-substitute into reduced row echelon form; rows sorted by pivot."""
        order = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in order}
        for col in reversed(order):
            for other in order:
                if other < col and col in rows[other]:
                    add_scaled(rows[other], rows[col], -rows[other][col])
        return [(c, rows[c]) for c in order]


def _dense_rank(data: list[list[Fraction]]) -> int:
    matrix = [list(row) for row in data]
    rank = 0
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if n_rows else 0
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, n_rows) if matrix[r][col] != 0), None)
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        lead = matrix[rank][col]
        for r in range(rank + 1, n_rows):
            factor = matrix[r][col] / lead
            if factor:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def rank(m: SparseMatrix) -> int:
    """
    Rank of a matrix over the rationals, computed exactly.

    Small matrices (at most DENSE_THRESHOLD cells) use dense elimination.

    Examples:
        >>> rank(SparseMatrix.identity(2))
        2

        >>> rank(SparseMatrix.from_dense([[1, 2], [2, 4]]))
        1
    """
    if not m.entries:
        return 0
    if m.rows * m.cols <= DENSE_THRESHOLD:
        return _dense_rank(m.to_dense())
    echelon = _Echelon()
    return sum(1 for row in m.row_vectors() if echelon.add(row))


def rank_of_vectors(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    """Dimension of the span of a family of sparse vectors."""
    echelon = _Echelon()
    return sum(1 for v in vectors if echelon.add(v))


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """
    Subspace of Q^ambient_dim given by a basis in reduced row echelon form.

    Attributes:
        ambient_dim: dimension of the ambient space
        basis: independent sparse vectors, pivots strictly increasing
        pivots: pivot column of each basis vector
    """
    ambient_dim: int
    basis: tuple[SparseVector, ...] = ()
    pivots: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, vector: Mapping[int, Fraction]) -> SparseVector:
        """Residual of vector after eliminating the pivot columns."""
        return _reduce(vector, dict(zip(self.pivots, self.basis)))

    def contains(self, vector: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vector)

    def coordinates(self, vector: Mapping[int, Fraction]) -> list[Fraction]:
        """
        Coordinates of a member of the subspace on its basis.

        Raises:
            NoSolution: If vector is not in the subspace
        """
        if not self.contains(vector):
            raise NoSolution("Vector does not lie in the subspace")
        # basis is reduced: coordinate i is the entry at pivot i
        return [Fraction(vector.get(p, 0)) for p in self.pivots]


def echelon_span(vectors: Iterable[Mapping[int, Fraction]], ambient_dim: int) -> Subspace:
    """Subspace spanned by vectors, with a reduced echelon basis."""
    echelon = _Echelon()
    for vector in vectors:
        for idx in vector:
            if not 0 <= idx < ambient_dim:
                raise ValueError(f"Index {idx} outside ambient dimension {ambient_dim}")
        echelon.add(vector)
    rows = echelon.reduced_rows()
    return Subspace(
        ambient_dim=ambient_dim,
        basis=tuple(row for _, row in rows),
        pivots=tuple(col for col, _ in rows),
    )


def kernel_basis(m: SparseMatrix) -> Subspace:
    """
    Echelonized basis of {v : m v = 0}.

    The dimension is always cols - rank(m).

    Examples:
        >>> kernel_basis(SparseMatrix.from_dense([[1, 1]])).basis
        ({0: Fraction(1, 1), 1: Fraction(-1, 1)},)
    """
    row_space = echelon_span(m.row_vectors(), m.cols)
    pivot_rows = dict(zip(row_space.pivots, row_space.basis))
    free_columns = [c for c in range(m.cols) if c not in pivot_rows]

    vectors = []
    for free in free_columns:
        vector = {free: Fraction(1)}
        for col, row in pivot_rows.items():
            if free in row:
                vector[col] = -row[free]
        vectors.append(vector)

    return echelon_span(vectors, m.cols)


def image_basis(m: SparseMatrix) -> Subspace:
    """Column space of m as an echelonized subspace of Q^rows."""
    return echelon_span(m.column_vectors(), m.rows)


class QuotientSection(NamedTuple):
    """Complement of a subspace by standard vectors, with the projection onto it."""
    representatives: list[SparseVector]
    project: Callable[[Mapping[int, Fraction]], list[Fraction]]


def quotient_section(ambient_dim: int, sub: Subspace) -> QuotientSection:
    """
    Complete sub to a basis of Q^ambient_dim and project modulo sub.

    Representatives are the standard vectors at the non-pivot columns of
    sub's reduced basis. project(v) returns the coordinates of v on the
    representatives modulo sub, so project(representative_i) = e_i.

    Args:
        ambient_dim: dimension of the ambient space
        sub: subspace of that ambient space

    Returns:
        QuotientSection(representatives, project)
    """
    if sub.ambient_dim != ambient_dim:
        raise ValueError(
            f"Subspace lives in dimension {sub.ambient_dim}, not {ambient_dim}"
        )

    pivot_set = set(sub.pivots)
    free_columns = [c for c in range(ambient_dim) if c not in pivot_set]
    representatives = [{c: Fraction(1)} for c in free_columns]

    def project(vector: Mapping[int, Fraction]) -> list[Fraction]:
        residual = sub.reduce(vector)
        return [Fraction(residual.get(c, 0)) for c in free_columns]

    return QuotientSection(representatives, project)


def extend_basis(
    base: Iterable[Mapping[int, Fraction]],
    candidates: Sequence[Mapping[int, Fraction]],
) -> list[int]:
    """
    Greedily pick candidates independent of base and of earlier picks.

    Returns:
        indices into candidates, in increasing order
    """
    echelon = _Echelon()
    for vector in base:
        echelon.add(vector)
    return [i for i, vector in enumerate(candidates) if echelon.add(vector)]


def _rref_augmented(m: SparseMatrix, extra_columns: Sequence[Mapping[int, Fraction]]) -> list[tuple[int, SparseVector]]:
    """RREF of [m | extra] where extra columns are indexed from m.cols on."""
    rows = m.row_vectors()
    for offset, column in enumerate(extra_columns):
        for r, coeff in column.items():
            rows[r][m.cols + offset] = coeff
    echelon = _Echelon()
    for row in rows:
        echelon.add(row)
    return echelon.reduced_rows()


def solve(m: SparseMatrix, b) -> SparseVector:
    """
    Find some x with m x = b.

    Free variables are set to zero, so the answer is deterministic.

    Examples:
        >>> solve(SparseMatrix.from_dense([[2]]), [1])
        {0: Fraction(1, 2)}

    Args:
        m: coefficient matrix
        b: right-hand side of length m.rows (dict or sequence)

    Returns:
        sparse solution vector of length m.cols

    Raises:
        NoSolution: If b is not in the column span of m
    """
    b = as_sparse_vector(b)
    for idx in b:
        if not 0 <= idx < m.rows:
            raise ValueError(f"Right-hand side index {idx} outside {m.rows} rows")

    solution: SparseVector = {}
    for col, row in _rref_augmented(m, [b]):
        if col == m.cols:
            raise NoSolution("Right-hand side lies outside the column span")
        value = row.get(m.cols, 0)
        if value:
            solution[col] = value
    return solution


def inverse(m: SparseMatrix) -> SparseMatrix:
    """
    Inverse of a square matrix by Gauss-Jordan elimination.

    Raises:
        ValueError: If m is not square or is singular
    """
    if m.rows != m.cols:
        raise ValueError(f"Only square matrices can be inverted, got {m.shape}")
    n = m.rows
    identity_columns = [{i: Fraction(1)} for i in range(n)]
    reduced = _rref_augmented(m, identity_columns)
    if [col for col, _ in reduced] != list(range(n)):
        raise ValueError("Matrix is singular")

    entries = {}
    for r, (_, row) in enumerate(reduced):
        for c, coeff in row.items():
            if c >= n:
                entries[(r, c - n)] = coeff
    return SparseMatrix(n, n, entries)
