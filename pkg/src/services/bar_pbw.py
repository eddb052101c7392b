"""
Weight-truncated bar constructions and the conilpotent PBW check.

The bar construction of an A-infinity algebra A (here either the positive
part of the cochain algebra, or a minimal model on cohomology) is the tensor
coalgebra on the shifted space, with a word x_1 | ... | x_j placed in degree
sum(|x_i| - 1). Its differential is the coderivation

    d(x_1 | ... | x_j) = sum (-1)^{e_r} x_1 | ... | x_r | b_s(x_{r+1}, ..., x_{r+s}) | ...

with e_r the sum of shifted degrees of x_1..x_r. Every letter has weight at
least 1, so the words of a fixed total weight form a finite complex.

For C^{>0}(g) the operations are b_1 = delta (the vertical part) and
b_2(a, b) = (-1)^|a| a ^ b (the horizontal part). Its degree 0 cohomology
has the graded dimensions of Sym(g), and higher cohomology vanishes.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from src.services.chevalley import CochainComplex, ce_complex, wedge
from src.services.exact_linalg import SparseMatrix, rank
from src.services.lie_model import StructureConstants
from src.utils.errors import InputError, InvariantViolation, UnweightedInput

logger = logging.getLogger(__name__)

# Largest weight checked when none is given
DEFAULT_MAX_WEIGHT = 6

Word = tuple[int, ...]
# ops(inputs) -> {letter: coeff}, the shifted operation b_s on a slice of a word
LetterOperation = Callable[[tuple[int, ...]], Mapping[int, Fraction]]


def enumerate_words(letter_weights: Sequence[int], weight: int) -> list[Word]:
    """
    All words in the letters whose weights add up to weight.

    Words are produced by peeling off a first letter, letters ascending, so
    the list is in lexicographic order.
    """
    if any(w < 1 for w in letter_weights):
        raise InputError("Bar letters must have weight >= 1")

    cache: dict[int, list[Word]] = {0: [()]}

    def words_of(w: int) -> list[Word]:
        if w not in cache:
            found = []
            for letter, lw in enumerate(letter_weights):
                if lw <= w:
                    found.extend((letter,) + rest for rest in words_of(w - lw))
            cache[w] = found
        return cache[w]

    return list(words_of(weight))


@dataclass(frozen=True)
class BarWeightComplex:
    """
    Weight-w part of a bar construction.

    Attributes:
        weight: total weight w
        words: words[j] lists the words of total degree j
        vertical: vertical[j] is the arity-1 part of d on degree j
        horizontal: horizontal[j] is the part of d from arities >= 2
    """
    weight: int
    words: Mapping[int, tuple[Word, ...]]
    vertical: Mapping[int, SparseMatrix]
    horizontal: Mapping[int, SparseMatrix]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.words)

    def dim(self, j: int) -> int:
        return len(self.words.get(j, ()))

    def differential(self, j: int) -> SparseMatrix:
        if j in self.vertical:
            return self.vertical[j] + self.horizontal[j]
        return SparseMatrix.zero(self.dim(j + 1), self.dim(j))

    def cohomology_dims(self) -> dict[int, int]:
        ranks = {j: rank(self.differential(j)) for j in self.degrees}
        return {j: self.dim(j) - ranks[j] - ranks.get(j - 1, 0) for j in self.degrees}


def build_bar_complex(
    letter_degrees: Sequence[int],
    letter_weights: Sequence[int],
    operations: Mapping[int, LetterOperation],
    weight: int,
) -> BarWeightComplex:
    """
    Assemble the weight-w bar complex of a generic A-infinity algebra.

    Args:
        letter_degrees: unshifted degree of each letter
        letter_weights: weight (>= 1) of each letter
        operations: {arity: b_arity} on letter tuples
        weight: total weight w

    Raises:
        InvariantViolation: If d^2 != 0
    """
    words = enumerate_words(letter_weights, weight)
    by_degree: dict[int, list[Word]] = {}
    for word in words:
        degree = sum(letter_degrees[x] - 1 for x in word)
        by_degree.setdefault(degree, []).append(word)

    positions = {degree: {w: t for t, w in enumerate(ws)} for degree, ws in by_degree.items()}

    vertical, horizontal = {}, {}
    for degree, ws in by_degree.items():
        entries = {1: {}, 2: {}}
        target_positions = positions.get(degree + 1, {})
        for col, word in enumerate(ws):
            prefix_degree = 0
            for r in range(len(word)):
                sign = -1 if prefix_degree % 2 else 1
                for s, op in operations.items():
                    if r + s > len(word):
                        continue
                    part = 1 if s == 1 else 2
                    for letter, coeff in op(word[r:r + s]).items():
                        image = word[:r] + (letter,) + word[r + s:]
                        row = target_positions.get(image)
                        if row is None:
                            raise InvariantViolation(f"Bar differential leaves degree {degree + 1} at {image}")
                        key = (row, col)
                        value = entries[part].get(key, 0) + sign * coeff
                        if value:
                            entries[part][key] = value
                        else:
                            entries[part].pop(key, None)
                prefix_degree += letter_degrees[word[r]] - 1
        rows = len(by_degree.get(degree + 1, ()))
        vertical[degree] = SparseMatrix(rows, len(ws), entries[1])
        horizontal[degree] = SparseMatrix(rows, len(ws), entries[2])

    complex_ = BarWeightComplex(
        weight=weight,
        words={d: tuple(ws) for d, ws in sorted(by_degree.items())},
        vertical=vertical,
        horizontal=horizontal,
    )

    for degree in complex_.degrees:
        if degree + 1 in complex_.words:
            square = complex_.differential(degree + 1) @ complex_.differential(degree)
            if not square.is_zero():
                raise InvariantViolation(f"Bar d^2 != 0 in weight {weight}, degree {degree}")

    logger.debug("bar complex of weight %d: dims %s", weight, {d: len(ws) for d, ws in by_degree.items()})
    return complex_


# ---------------------------------------------------------------------------
# Bar construction of C^{>0}(g)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CochainLetters:
    """Letters of Bar C^{>0}: cochain monomials of degree >= 1."""
    complex: CochainComplex
    monomials: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    weights: tuple[int, ...]

    def operations(self) -> dict[int, LetterOperation]:
        index = {mono: t for t, mono in enumerate(self.monomials)}
        cx = self.complex
        columns = [cx.differential(k).column_vectors() for k in range(cx.top_degree + 1)]

        def vertical(inputs):
            (letter,) = inputs
            mono = self.monomials[letter]
            k = len(mono)
            column = columns[k][cx.position(mono)]
            return {index[cx.bases[k + 1][r]]: c for r, c in column.items()}

        def horizontal(inputs):
            a, b = (self.monomials[x] for x in inputs)
            sign, merged = wedge(a, b)
            if not sign:
                return {}
            return {index[merged]: Fraction((-1) ** len(a) * sign)}

        return {1: vertical, 2: horizontal}


def cochain_letters(sc: StructureConstants) -> CochainLetters:
    """
    Raises:
        UnweightedInput: If sc has no weights
    """
    if sc.weights is None:
        raise UnweightedInput("The bar construction is truncated by weight; the algebra has no weights")
    cx = ce_complex(sc)
    monomials, degrees, weights = [], [], []
    for k in range(1, cx.top_degree + 1):
        for t, mono in enumerate(cx.bases[k]):
            monomials.append(mono)
            degrees.append(k)
            weights.append(cx.weights[k][t])
    return CochainLetters(cx, tuple(monomials), tuple(degrees), tuple(weights))


def bar_weight_complex(sc: StructureConstants, w: int, letters: Optional[CochainLetters] = None) -> BarWeightComplex:
    """
    Weight-w component of Bar C^{>0}(g).

    Examples:
        heisenberg(3), w = 2: degree 0 has the four words e_a*|e_b* (a, b in
        {1, 2}) and e3*; degree 1 has e1*^e2*.

    Raises:
        UnweightedInput: If sc has no weights
        InputError: If w < 0
    """
    if w < 0:
        raise InputError(f"Weight must be non-negative, got {w}")
    letters = letters or cochain_letters(sc)
    return build_bar_complex(letters.degrees, letters.weights, letters.operations(), w)


def word_label(letters: CochainLetters, word: Word) -> str:
    names = letters.complex.algebra.basis_names
    return "|".join("^".join(f"{names[i]}*" for i in letters.monomials[x]) for x in word)


def sym_dimensions(weights: Sequence[int], max_weight: int) -> list[int]:
    """
    Coefficients of prod_i 1/(1 - t^{w_i}) up to t^max_weight.

    Examples:
        >>> sym_dimensions([1, 1, 2], 4)
        [1, 2, 4, 6, 9]
    """
    dims = [1] + [0] * max_weight
    for w in weights:
        for total in range(w, max_weight + 1):
            dims[total] += dims[total - w]
    return dims


@dataclass(frozen=True)
class PBWRow:
    weight: int
    h0: int
    sym: int
    higher: Mapping[int, int]

    @property
    def ok(self) -> bool:
        return self.h0 == self.sym and not any(self.higher.values())


@dataclass(frozen=True)
class PBWReport:
    rows: tuple[PBWRow, ...]

    @property
    def verdict(self) -> bool:
        return all(row.ok for row in self.rows)


def pbw_check(sc: StructureConstants, max_weight: int = DEFAULT_MAX_WEIGHT) -> PBWReport:
    """
    Compare dim H^0(Bar)_w with dim Sym(g)_w and check H^{>=1}(Bar)_w = 0.

    Raises:
        UnweightedInput: If sc has no weights
        InputError: If max_weight < 0
    """
    if max_weight < 0:
        raise InputError(f"max_weight must be non-negative, got {max_weight}")
    letters = cochain_letters(sc)
    sym = sym_dimensions(sc.weights, max_weight)

    rows = []
    for w in range(max_weight + 1):
        bar = bar_weight_complex(sc, w, letters)
        dims = bar.cohomology_dims()
        higher = {j: d for j, d in dims.items() if j >= 1}
        rows.append(PBWRow(weight=w, h0=dims.get(0, 0), sym=sym[w], higher=higher))
        logger.info("PBW weight %d: H0 %d, Sym %d, higher %s", w, rows[-1].h0, sym[w], higher)

    return PBWReport(rows=tuple(rows))
