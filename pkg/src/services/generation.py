"""
1-generation of a minimal A-infinity algebra.

A positively graded minimal model H is 1-generated when every class of
degree >= 2 is a linear combination of iterated operations m_j applied to
degree-1 classes. span_closure decides this by building, degree by degree,

    S^1 = H^1,
    S^k = span of m_j(S^{p_1}, ..., S^{p_j}) over j >= 2, p_i >= 1,
          p_1 + ... + p_j = k + j - 2,

and keeps one certificate expression per spanning vector. The equivalent
formulation through the bar construction (classes of tensor length 1 vanish
in positive bar degree) is checked independently by bar_filtration_check.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Union

from src.services.bar_pbw import DEFAULT_MAX_WEIGHT, build_bar_complex
from src.services.exact_linalg import SparseVector, echelon_span, quotient_section, rank_of_vectors
from src.services.lie_model import StructureConstants, is_nilpotent
from src.services.transfer import MinimalAInfinity
from src.utils.errors import ArityBoundInsufficient, InputError, UnweightedInput
from src.utils.rational_utils import format_rational

logger = logging.getLogger(__name__)

# ("h1", index) or ("m", arity, [children])
Certificate = Union[tuple[str, int], tuple[str, int, list]]


def compositions(total: int, parts: int):
    """Compositions of total into parts positive integers, lexicographic."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def evaluate_certificate(ma: MinimalAInfinity, expr: Certificate) -> SparseVector:
    """Evaluate a certificate expression through the operations of ma."""
    if expr[0] == "h1":
        return {expr[1]: Fraction(1)}
    if expr[0] == "m":
        _, arity, children = expr
        return ma.apply(arity, [evaluate_certificate(ma, child) for child in children])
    raise ValueError(f"Unknown certificate node {expr[0]!r}")


def certificate_to_json(expr: Certificate) -> list:
    if expr[0] == "h1":
        return ["h1", expr[1]]
    return ["m", expr[1], [certificate_to_json(child) for child in expr[2]]]


@dataclass(frozen=True)
class DegreeGeneration:
    """
    Generated part of one cohomological degree.

    spanning holds (vector, certificate) pairs whose vectors span S^k;
    cokernel holds the indices of basis classes completing S^k to H^k.
    """
    degree: int
    dim_h: int
    dim_s: int
    spanning: tuple[tuple[SparseVector, Certificate], ...]
    cokernel: tuple[int, ...]


@dataclass(frozen=True)
class GenerationReport:
    degrees: tuple[DegreeGeneration, ...]
    verdict: bool
    arity_bound: int
    required_arity: Optional[int]
    bound_sufficient: bool
    weights: Optional[tuple[int, ...]] = field(default=None, repr=False)

    def cokernel_by_weight(self) -> dict[int, dict[int, int]]:
        """Cokernel dimensions refined by weight: {degree: {weight: dim}}."""
        if self.weights is None:
            raise UnweightedInput("Cokernel weights need a weighted model")
        table = {}
        for entry in self.degrees:
            row: dict[int, int] = {}
            for idx in entry.cokernel:
                row[self.weights[idx]] = row.get(self.weights[idx], 0) + 1
            table[entry.degree] = dict(sorted(row.items()))
        return table


def required_arity(ma: MinimalAInfinity, sc: Optional[StructureConstants] = None) -> Optional[int]:
    """
    Largest arity that can contribute to S^k for some k.

    Weighted: inputs have weight >= 1 and operations preserve weight, so
    arities above the largest weight of H^{>=2} contribute nothing.
    Unweighted nilpotent: class times degree, from the lower central
    series filtration. Otherwise unknown (None).
    """
    top_degree = max(ma.degrees, default=0)
    if ma.weights is not None:
        weights = [ma.weights[idx] for idx in range(ma.dim) if ma.degrees[idx] >= 2]
        return max(weights, default=0)
    if sc is not None:
        nilpotency = is_nilpotent(sc)
        if nilpotency:
            return nilpotency.nilpotency_class * top_degree
    return None


def _multilinear_images(ma: MinimalAInfinity, arity: int, factors: list[list[tuple[SparseVector, Certificate]]]):
    for choice in product(*factors):
        value = ma.apply(arity, [vector for vector, _ in choice])
        if value:
            yield value, ("m", arity, [cert for _, cert in choice])


def span_closure(
    ma: MinimalAInfinity,
    sc: Optional[StructureConstants] = None,
    strict: bool = False,
) -> GenerationReport:
    """
    Decide whether H is generated by H^1 under the operations m_j.

    Args:
        ma: minimal model
        sc: the Lie algebra, used for the arity analysis of unweighted models
        strict: raise instead of flagging an uncertified arity bound

    Returns:
        GenerationReport, degrees ascending, deterministic certificates

    Raises:
        ArityBoundInsufficient: In strict mode, if arities beyond ma.arity_bound
            might contribute
    """
    top_degree = max(ma.degrees, default=0)
    h1 = ma.basis_in_degree(1)
    needed = required_arity(ma, sc)

    if not h1:
        # nothing can be generated, whatever the arity
        entries = [
            DegreeGeneration(k, len(ma.basis_in_degree(k)), 0, (), tuple(ma.basis_in_degree(k)))
            for k in range(1, top_degree + 1)
        ]
        verdict = all(e.dim_h == 0 for e in entries)
        return GenerationReport(tuple(entries), verdict, ma.arity_bound, needed, True, ma.weights)

    bound_sufficient = needed is not None and needed <= ma.arity_bound
    if not bound_sufficient and strict:
        raise ArityBoundInsufficient(ma.arity_bound, needed if needed is not None else -1, top_degree)
    max_arity = ma.arity_bound if needed is None else min(ma.arity_bound, max(needed, 2))

    generated: dict[int, list[tuple[SparseVector, Certificate]]] = {
        1: [({idx: Fraction(1)}, ("h1", idx)) for idx in h1]
    }
    entries = [DegreeGeneration(1, len(h1), len(h1), tuple(generated[1]), ())]

    for k in range(2, top_degree + 1):
        basis = ma.basis_in_degree(k)
        local = {idx: t for t, idx in enumerate(basis)}
        found: list[tuple[SparseVector, Certificate]] = []
        vectors_local: list[SparseVector] = []

        for arity in range(2, max_arity + 1):
            if len(found) == len(basis):
                break
            for parts in compositions(k + arity - 2, arity):
                if len(found) == len(basis):
                    break
                if any(p >= k or not generated.get(p) for p in parts):
                    continue
                factors = [generated[p] for p in parts]
                for value, cert in _multilinear_images(ma, arity, factors):
                    candidate = {local[idx]: c for idx, c in value.items()}
                    if rank_of_vectors(vectors_local + [candidate]) > len(vectors_local):
                        vectors_local.append(candidate)
                        found.append((value, cert))
                        if len(found) == len(basis):
                            break

        span = echelon_span(vectors_local, len(basis))
        section = quotient_section(len(basis), span)
        cokernel = tuple(basis[next(iter(rep))] for rep in section.representatives)
        generated[k] = found
        entries.append(DegreeGeneration(k, len(basis), len(found), tuple(found), cokernel))
        logger.info("degree %d: generated %d of %d", k, len(found), len(basis))

    verdict = all(not e.cokernel for e in entries)
    return GenerationReport(tuple(entries), verdict, ma.arity_bound, needed, bound_sufficient, ma.weights)


def report_to_json(report: GenerationReport) -> dict:
    return {
        "verdict": report.verdict,
        "arity_bound": report.arity_bound,
        "required_arity": report.required_arity,
        "bound_sufficient": report.bound_sufficient,
        "degrees": [
            {
                "degree": e.degree,
                "dim_h": e.dim_h,
                "dim_generated": e.dim_s,
                "cokernel": list(e.cokernel),
                "certificates": [
                    {
                        "value": {str(i): format_rational(c) for i, c in sorted(vector.items())},
                        "expression": certificate_to_json(cert),
                    }
                    for vector, cert in e.spanning
                ],
            }
            for e in report.degrees
        ],
    }


# ---------------------------------------------------------------------------
# Bar filtration check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationRow:
    weight: int
    length_one_classes: Mapping[int, int]

    @property
    def ok(self) -> bool:
        return not any(self.length_one_classes.values())


def bar_filtration_check(ma: MinimalAInfinity, max_weight: int = DEFAULT_MAX_WEIGHT) -> list[FiltrationRow]:
    """
    Per weight, the dimension of bar classes of tensor length 1 in degree j >= 1.

    The bar construction is built on H^{>0} with the shifted operations.
    A length-1 word x of degree |x| - 1 = j >= 1 is a cocycle; it gives a
    nonzero class unless it lies in the image of d.

    Raises:
        UnweightedInput: If ma has no weights
    """
    if ma.weights is None:
        raise UnweightedInput("The bar filtration check needs a weighted model")
    if max_weight < 1:
        raise InputError(f"max_weight must be >= 1, got {max_weight}")

    letters = [idx for idx in range(ma.dim) if ma.degrees[idx] >= 1]
    letter_index = {idx: t for t, idx in enumerate(letters)}
    degrees = [ma.degrees[idx] for idx in letters]
    weights = [ma.weights[idx] for idx in letters]

    def make_operation(arity):
        def op(inputs):
            value = ma.shifted(arity, tuple(letters[t] for t in inputs))
            return {letter_index[idx]: c for idx, c in value.items() if idx in letter_index}
        return op

    operations = {arity: make_operation(arity) for arity in range(2, ma.arity_bound + 1)}

    rows = []
    for w in range(1, max_weight + 1):
        bar = build_bar_complex(degrees, weights, operations, w)
        classes = {}
        for j in bar.degrees:
            if j < 1:
                continue
            positions = {word: t for t, word in enumerate(bar.words[j])}
            length_one = [{positions[word]: Fraction(1)} for word in bar.words[j] if len(word) == 1]
            if not length_one:
                continue
            image = bar.differential(j - 1).column_vectors() if j - 1 in bar.words else []
            image_rank = rank_of_vectors(image)
            classes[j] = rank_of_vectors(image + length_one) - image_rank
        rows.append(FiltrationRow(weight=w, length_one_classes=classes))
        logger.debug("bar filtration weight %d: %s", w, classes)
    return rows
