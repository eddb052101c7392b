"""
Homotopy transfer of the cochain algebra onto its cohomology.

Operations are computed in the shifted (bar) convention, where every
b_k: (sA)^{(x)k} -> sA has degree +1 and the Koszul sign of passing a map
over an element x is governed by its shifted degree |x| - 1. The cochain
algebra contributes

    b_1 = delta,   b_2(a, b) = (-1)^|a| a ^ b.

With H = -h (so that b_1 H + H b_1 = i p - id) the transfer is the recursion

    f_1 = i,  U_n = sum_{k=1}^{n-1} b_2(f_k (x) f_{n-k}),
    f_n = H U_n,  B_n = p U_n,

which is the planar binary tree sum with every internal edge carrying H.
B_n are the shifted operations on cohomology; the usual operations are
m_n(a_1, ..., a_n) = (-1)^{sum_j (n-j)|a_j|} B_n(a_1, ..., a_n), so that
m_2(x, y) = p(i(x) ^ i(y)).

Only nonzero values are stored and the recursion only combines nonzero
values, so weight and degree bounds prune the computation automatically.
The Stasheff identities are checked independently, in the same convention.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

from src.services.chevalley import (
    CochainComplex,
    CohomologyData,
    TransferData,
    ce_complex,
    cohomology,
    retract_data,
    wedge,
)
from src.services.exact_linalg import SparseVector, add_scaled, rank_of_vectors
from src.services.lie_model import StructureConstants, is_nilpotent
from src.utils.errors import InputError, InvariantViolation, StasheffViolation
from src.utils.rational_utils import format_rational

logger = logging.getLogger(__name__)

# Smallest arity bound used when none is given
DEFAULT_MIN_ARITY = 6

Inputs = tuple[int, ...]
Operation = dict[Inputs, SparseVector]


@dataclass(frozen=True)
class MinimalAInfinity:
    """
    Minimal A-infinity structure on cohomology.

    Attributes:
        degrees: cohomological degree of each cohomology basis element
        weights: weight of each basis element, or None
        labels: display label of each basis element
        operations: {k: {input tuple: output vector}} in the shifted convention
        arity_bound: largest arity computed
    """
    degrees: tuple[int, ...]
    weights: Optional[tuple[int, ...]]
    labels: tuple[str, ...]
    operations: Mapping[int, Operation] = field(default_factory=dict)
    arity_bound: int = 2

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def basis_in_degree(self, k: int) -> list[int]:
        return [idx for idx, d in enumerate(self.degrees) if d == k]

    def shifted(self, k: int, inputs: Sequence[int]) -> SparseVector:
        """b_k on basis elements; arities outside 2..arity_bound are zero."""
        return dict(self.operations.get(k, {}).get(tuple(inputs), {}))

    def koszul_desuspension_sign(self, inputs: Sequence[int]) -> int:
        k = len(inputs)
        exponent = sum((k - j) * self.degrees[x] for j, x in enumerate(inputs, start=1))
        return -1 if exponent % 2 else 1

    def m(self, k: int, inputs: Sequence[int]) -> SparseVector:
        """m_k on basis elements in the unshifted convention."""
        sign = self.koszul_desuspension_sign(inputs)
        return {idx: sign * c for idx, c in self.shifted(k, inputs).items()}

    def apply(self, k: int, vectors: Sequence[Mapping[int, Fraction]]) -> SparseVector:
        """Multilinear evaluation of m_k on sparse cohomology vectors."""
        if len(vectors) != k:
            raise ValueError(f"m_{k} takes {k} arguments, got {len(vectors)}")
        table = self.operations.get(k, {})
        result: SparseVector = {}
        if not table:
            return result
        for combo in product(*(list(v.items()) for v in vectors)):
            inputs = tuple(idx for idx, _ in combo)
            if inputs not in table:
                continue
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            add_scaled(result, self.m(k, inputs), coeff)
        return result


# ---------------------------------------------------------------------------
# Transfer
# ---------------------------------------------------------------------------

def _representative_label(cx: CochainComplex, vector: Mapping[int, Fraction], degree: int) -> str:
    if degree == 0:
        return "[1]"
    lead = cx.bases[degree][min(vector)]
    names = cx.algebra.basis_names
    return "[" + "^".join(f"{names[i]}*" for i in lead) + "]"


class _CochainAlgebra:
    """b_2, p and -h on cochain vectors keyed by (degree, position)."""

    def __init__(self, cx: CochainComplex, td: TransferData):
        self.cx = cx
        self.projection_columns = [m.column_vectors() for m in td.projection]
        self.homotopy_columns = [td.homotopy_at(k).column_vectors() for k in range(cx.top_degree + 1)]
        self.h_offsets = []
        offset = 0
        for matrix in td.projection:
            self.h_offsets.append(offset)
            offset += matrix.rows
        self._products: dict[tuple[tuple[int, int], tuple[int, int]], Optional[tuple[int, tuple[int, int]]]] = {}

    def _basis_product(self, a: tuple[int, int], b: tuple[int, int]):
        key = (a, b)
        if key not in self._products:
            (p, s), (q, t) = a, b
            result = None
            if p + q <= self.cx.top_degree:
                sign, merged = wedge(self.cx.bases[p][s], self.cx.bases[q][t])
                if sign:
                    result = ((-1) ** p * sign, (p + q, self.cx.position(merged)))
            self._products[key] = result
        return self._products[key]

    def b2(self, u: Mapping, v: Mapping) -> dict:
        result: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                found = self._basis_product(a, b)
                if found is None:
                    continue
                sign, target = found
                value = result.get(target, 0) + sign * ca * cb
                if value:
                    result[target] = value
                else:
                    result.pop(target, None)
        return result

    def project(self, u: Mapping) -> SparseVector:
        result: SparseVector = {}
        for (k, t), c in u.items():
            column = self.projection_columns[k][t]
            shifted = {self.h_offsets[k] + r: v for r, v in column.items()}
            add_scaled(result, shifted, c)
        return result

    def minus_homotopy(self, u: Mapping) -> dict:
        result: dict = {}
        for (k, t), c in u.items():
            for r, v in self.homotopy_columns[k][t].items():
                key = (k - 1, r)
                value = result.get(key, 0) - c * v
                if value:
                    result[key] = value
                else:
                    result.pop(key, None)
        return result


def transferred_operations(cx: CochainComplex, td: TransferData, arity_bound: int) -> MinimalAInfinity:
    """
    Minimal A-infinity operations on cohomology up to arity_bound.

    Args:
        cx: cochain complex
        td: retract data with verified side conditions
        arity_bound: largest arity to compute (>= 2)

    Returns:
        MinimalAInfinity with shifted operations B_2..B_{arity_bound}

    Raises:
        InputError: If arity_bound < 2
        InvariantViolation: If degree or weight bookkeeping fails
    """
    if arity_bound < 2:
        raise InputError(f"Arity bound must be at least 2, got {arity_bound}")

    algebra = _CochainAlgebra(cx, td)

    degrees, weights, labels = [], [], []
    f_values: dict[int, dict[Inputs, dict]] = {1: {}}
    for k, inclusion in enumerate(td.inclusion):
        for t, column in enumerate(inclusion.column_vectors()):
            idx = len(degrees)
            degrees.append(k)
            labels.append(_representative_label(cx, column, k))
            if cx.weights is not None:
                weights.append(cx.weights[k][min(column)])
            f_values[1][(idx,)] = {(k, r): c for r, c in column.items()}

    operations: dict[int, Operation] = {}
    for n in range(2, arity_bound + 1):
        sums: dict[Inputs, dict] = {}
        for k in range(1, n):
            for left_inputs, left in f_values[k].items():
                for right_inputs, right in f_values[n - k].items():
                    value = algebra.b2(left, right)
                    if not value:
                        continue
                    target = sums.setdefault(left_inputs + right_inputs, {})
                    add_scaled(target, value, Fraction(1))

        operation: Operation = {}
        f_next: dict[Inputs, dict] = {}
        for inputs in sorted(sums):
            total = sums[inputs]
            if not total:
                continue
            projected = algebra.project(total)
            if projected:
                operation[inputs] = dict(sorted(projected.items()))
            lifted = algebra.minus_homotopy(total)
            if lifted:
                f_next[inputs] = lifted

        operations[n] = operation
        f_values[n] = f_next
        logger.debug("arity %d: %d nonzero operation values, %d tree values", n, len(operation), len(f_next))

    ma = MinimalAInfinity(
        degrees=tuple(degrees),
        weights=tuple(weights) if cx.weights is not None else None,
        labels=tuple(labels),
        operations=operations,
        arity_bound=arity_bound,
    )

    problems = bookkeeping_violations(ma)
    if problems:
        raise InvariantViolation("; ".join(problems[:5]))
    if ma.weights is not None:
        _assert_vanishing_above_weight(ma)

    logger.info(
        "transferred operations up to arity %d: %s nonzero values",
        arity_bound, {k: len(v) for k, v in operations.items()},
    )
    return ma


def _assert_vanishing_above_weight(ma: MinimalAInfinity) -> None:
    top = max(ma.weights, default=0)
    for k in range(max(3, top + 1), ma.arity_bound + 1):
        if ma.operations.get(k):
            raise InvariantViolation(
                f"Operation of arity {k} is nonzero although cohomology weights stop at {top}"
            )


def bookkeeping_violations(ma: MinimalAInfinity) -> list[str]:
    """
    Degree and weight bookkeeping of every nonzero operation value.

    Each value must land in degree sum(|x_i|) + 2 - k and, when weighted,
    in weight sum(w(x_i)).
    """
    problems = []
    for k, table in ma.operations.items():
        for inputs, value in table.items():
            expected_degree = sum(ma.degrees[x] for x in inputs) + 2 - k
            for out in value:
                if ma.degrees[out] != expected_degree:
                    problems.append(f"m_{k}{inputs} hits degree {ma.degrees[out]}, expected {expected_degree}")
                if ma.weights is not None:
                    expected_weight = sum(ma.weights[x] for x in inputs)
                    if ma.weights[out] != expected_weight:
                        problems.append(f"m_{k}{inputs} hits weight {ma.weights[out]}, expected {expected_weight}")
    return problems


def euler_and_degree_report(ma: MinimalAInfinity) -> dict:
    """Per-arity counts of nonzero values and the bookkeeping verdict."""
    dims_by_degree: dict[int, int] = {}
    for d in ma.degrees:
        dims_by_degree[d] = dims_by_degree.get(d, 0) + 1
    return {
        "cohomology_dims": dims_by_degree,
        "euler_characteristic": sum((-1) ** d * n for d, n in dims_by_degree.items()),
        "nonzero_values": {k: len(v) for k, v in sorted(ma.operations.items())},
        "bookkeeping_ok": not bookkeeping_violations(ma),
    }


# ---------------------------------------------------------------------------
# Stasheff identities
# ---------------------------------------------------------------------------

def stasheff_defects(ma: MinimalAInfinity, n: int) -> dict[Inputs, SparseVector]:
    """
    Nonzero values of sum (-1)^{e_r} B_a(x_1..x_r, B_s(...), ...) over a + s - 1 = n.

    e_r is the sum of shifted degrees |x_i| - 1 of the first r inputs.
    """
    by_slot: dict[int, dict[tuple[int, int], list[tuple[Inputs, SparseVector]]]] = {}
    for a, table in ma.operations.items():
        slots: dict[tuple[int, int], list] = {}
        for inputs, value in table.items():
            for r, x in enumerate(inputs):
                slots.setdefault((r, x), []).append((inputs, value))
        by_slot[a] = slots

    defects: dict[Inputs, SparseVector] = {}
    for s in range(2, n):
        a = n - s + 1
        if s > ma.arity_bound or a > ma.arity_bound:
            continue
        outer_slots = by_slot.get(a, {})
        for inner_inputs, inner_value in ma.operations.get(s, {}).items():
            for middle, coeff in inner_value.items():
                for r in range(a):
                    for outer_inputs, outer_value in outer_slots.get((r, middle), ()):
                        exponent = sum(ma.degrees[x] - 1 for x in outer_inputs[:r])
                        sign = -1 if exponent % 2 else 1
                        combined = outer_inputs[:r] + inner_inputs + outer_inputs[r + 1:]
                        target = defects.setdefault(combined, {})
                        add_scaled(target, outer_value, sign * coeff)

    return {inputs: value for inputs, value in sorted(defects.items()) if value}


def check_stasheff(ma: MinimalAInfinity, up_to_arity: Optional[int] = None) -> list[int]:
    """
    Verify the Stasheff identities of arity 3..up_to_arity.

    Returns:
        the arities checked

    Raises:
        InputError: If up_to_arity exceeds the arity bound
        StasheffViolation: On the first arity and (smallest) input tuple that fails
    """
    up_to_arity = ma.arity_bound if up_to_arity is None else up_to_arity
    if up_to_arity > ma.arity_bound:
        raise InputError(f"Cannot check arity {up_to_arity} beyond the arity bound {ma.arity_bound}")

    checked = []
    for n in range(3, up_to_arity + 1):
        defects = stasheff_defects(ma, n)
        if defects:
            inputs, defect = next(iter(defects.items()))
            raise StasheffViolation(n, inputs, defect)
        checked.append(n)
    logger.info("Stasheff identities hold for arities %s", checked)
    return checked


def corrupt(ma: MinimalAInfinity, k: int, inputs: Sequence[int], factor) -> MinimalAInfinity:
    """Copy of ma with the shifted value B_k(inputs) multiplied by factor."""
    operations = {arity: dict(table) for arity, table in ma.operations.items()}
    inputs = tuple(inputs)
    if inputs not in operations.get(k, {}):
        raise InputError(f"B_{k}{inputs} is zero; nothing to corrupt")
    operations[k][inputs] = {idx: c * Fraction(factor) for idx, c in operations[k][inputs].items()}
    return replace(ma, operations=operations)


# ---------------------------------------------------------------------------
# Shuffles and H^2
# ---------------------------------------------------------------------------

def _koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of permuting elements of the given shifted degrees into order."""
    exponent = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                exponent += degrees[order[a]] * degrees[order[b]]
    return -1 if exponent % 2 else 1


def shuffle_sum(ma: MinimalAInfinity, u: Inputs, v: Inputs) -> SparseVector:
    """sum over (|u|, |v|)-shuffles of the Koszul-signed shifted operation."""
    k = len(u) + len(v)
    letters = tuple(u) + tuple(v)
    shifted_degrees = [ma.degrees[x] - 1 for x in letters]
    result: SparseVector = {}
    for positions in combinations(range(k), len(u)):
        order = [0] * k
        rest = iter(range(len(u), k))
        first = iter(range(len(u)))
        chosen = set(positions)
        for slot in range(k):
            order[slot] = next(first) if slot in chosen else next(rest)
        inputs = tuple(letters[i] for i in order)
        add_scaled(result, ma.shifted(k, inputs), Fraction(_koszul_sign(shifted_degrees, order)))
    return result


def shuffle_defect(ma: MinimalAInfinity, k: int) -> list[dict]:
    """
    Nonzero shuffle sums of the arity-k operation.

    Every candidate (u, v) is obtained by splitting a nonzero input tuple of
    B_k into two complementary subsequences. Empty output means B_k vanishes
    on shuffle products at this arity.

    Returns:
        [{"split": r, "left": u, "right": v, "value": vector}] in sorted order
    """
    if k < 2 or k > ma.arity_bound:
        raise InputError(f"Shuffle defect arity must be in 2..{ma.arity_bound}, got {k}")

    candidates = set()
    for inputs in ma.operations.get(k, {}):
        for r in range(1, k):
            for positions in combinations(range(k), r):
                u = tuple(inputs[i] for i in positions)
                v = tuple(inputs[i] for i in range(k) if i not in positions)
                candidates.add((r, u, v))

    report = []
    for r, u, v in sorted(candidates):
        value = shuffle_sum(ma, u, v)
        if value:
            report.append({"split": r, "left": u, "right": v, "value": value})
    return report


def h2_component_ranks(ma: MinimalAInfinity, max_arity: Optional[int] = None) -> dict[int, int]:
    """Rank of m_j restricted to (H^1)^{(x)j} -> H^2, for j = 2..max_arity."""
    max_arity = ma.arity_bound if max_arity is None else min(max_arity, ma.arity_bound)
    ranks = {}
    for j in range(2, max_arity + 1):
        values = [
            value for inputs, value in ma.operations.get(j, {}).items()
            if all(ma.degrees[x] == 1 for x in inputs)
        ]
        ranks[j] = rank_of_vectors(values)
    return ranks


# ---------------------------------------------------------------------------
# Pipeline and serialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimalModel:
    algebra: StructureConstants
    complex: CochainComplex
    cohomology: CohomologyData
    retract: TransferData
    structure: MinimalAInfinity


def default_arity_bound(sc: StructureConstants, coh: CohomologyData) -> int:
    """
    max(DEFAULT_MIN_ARITY, 1 + nilpotency class); for weighted algebras also
    one more than the largest cohomology weight, so vanishing there is verified.
    """
    bound = DEFAULT_MIN_ARITY
    nilpotency = is_nilpotent(sc)
    if nilpotency:
        bound = max(bound, 1 + nilpotency.nilpotency_class)
    if sc.weights is not None:
        weights = [
            coh.representative_weight(split.degree, t)
            for split in coh.degrees for t in range(split.betti)
        ]
        bound = max(bound, max(weights, default=0) + 1)
    return bound


def minimal_model(sc: StructureConstants, arity_bound: Optional[int] = None, verify: bool = True) -> MinimalModel:
    """Complex, cohomology, retract and transferred operations, Stasheff-checked."""
    cx = ce_complex(sc)
    coh = cohomology(cx)
    td = retract_data(cx, coh)
    bound = arity_bound if arity_bound is not None else default_arity_bound(sc, coh)
    ma = transferred_operations(cx, td, bound)
    if verify:
        check_stasheff(ma)
    return MinimalModel(sc, cx, coh, td, ma)


def to_json_dict(ma: MinimalAInfinity) -> dict:
    """Operations in the unshifted convention, per arity, sorted by input tuple."""
    return {
        "arity_bound": ma.arity_bound,
        "basis": [
            {
                "index": idx,
                "degree": ma.degrees[idx],
                "label": ma.labels[idx],
                **({"weight": ma.weights[idx]} if ma.weights is not None else {}),
            }
            for idx in range(ma.dim)
        ],
        "operations": {
            str(k): [
                {
                    "inputs": list(inputs),
                    "output": {str(i): format_rational(c) for i, c in sorted(ma.m(k, inputs).items())},
                }
                for inputs in sorted(table)
            ]
            for k, table in sorted(ma.operations.items())
        },
    }
