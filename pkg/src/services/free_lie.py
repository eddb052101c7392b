"""
Free Lie algebras on m generators and their free nilpotent quotients.

The free Lie algebra L(V) on V = Q^m is graded by commutator length. Its
Lyndon words, taken with their standard bracketing, form a basis, and the
quotient L^{<=n}(V) = L(V)/L^{>n}(V) has the Lyndon words of length <= n as a
basis, ordered by (length, lex).

Brackets are put in normal form by expanding into the free associative
algebra and peeling off Lyndon words: the standard bracketing P(w) of a Lyndon
word w expands to w plus lexicographically larger words of the same length,
so the smallest word of any Lie polynomial is Lyndon and its coefficient is
the coefficient of P(w).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import divisors, factorint

from src.services.exact_linalg import SparseMatrix
from src.utils.errors import InputError

logger = logging.getLogger(__name__)

Word = tuple[int, ...]
BracketTree = Union[int, tuple["BracketTree", "BracketTree"]]
AssociativePolynomial = dict[Word, Fraction]

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

def generator_name(i: int, m: int) -> str:
    """
    Display name of generator i out of m: a, b, c, ... up to 26 generators,
    x0, x1, ... beyond that.
    """
    if m <= len(_LETTERS):
        return _LETTERS[i]
    return f"x{i}"


def word_name(word: Word, m: int) -> str:
    """Display name of a word, e.g. (0, 0, 1) -> "aab"."""
    separator = "" if m <= len(_LETTERS) else "."
    return separator.join(generator_name(letter, m) for letter in word)


def is_lyndon(word: Word) -> bool:
    """True if word is nonempty and strictly smaller than each proper rotation."""
    word = tuple(word)
    if not word:
        return False
    return all(word < word[r:] + word[:r] for r in range(1, len(word)))


def lyndon_words(m: int, max_len: int) -> list[Word]:
    """
    All Lyndon words of length <= max_len on m letters, in (length, lex) order.

    Generation follows Duval's algorithm, which visits Lyndon words in
    lexicographic order; the result is then sorted by length.

    Examples:
        >>> lyndon_words(2, 3)
        [(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)]

    Raises:
        InputError: If m < 1 or max_len < 1
    """
    if m < 1 or max_len < 1:
        raise InputError(f"lyndon_words needs m >= 1 and max_len >= 1, got m={m}, max_len={max_len}")

    found = []
    w = [-1]
    while w:
        w[-1] += 1
        found.append(tuple(w))
        period = len(w)
        while len(w) < max_len:
            w.append(w[-period])
        while w and w[-1] == m - 1:
            w.pop()

    return sorted(found, key=lambda word: (len(word), word))


def _mobius(d: int) -> int:
    exponents = factorint(d).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def witt_dimension(m: int, n: int) -> int:
    """
    Dimension of the length-n component L^n(V) for dim V = m.

    Necklace formula (1/n) * sum over d | n of mu(d) * m^(n/d).

    Examples:
        >>> [witt_dimension(2, n) for n in range(1, 6)]
        [2, 1, 2, 3, 6]
    """
    if m < 1 or n < 1:
        raise InputError(f"witt_dimension needs m >= 1 and n >= 1, got m={m}, n={n}")
    total = sum(_mobius(d) * m ** (n // d) for d in divisors(n))
    return total // n


# ---------------------------------------------------------------------------
# Bracketings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def standard_bracketing(word: Word) -> BracketTree:
    """
    Standard bracketing of a Lyndon word.

    w = uv with v the longest proper Lyndon suffix maps to [b(u), b(v)];
    a single letter maps to itself. Trees are nested pairs of letters.

    Examples:
        >>> standard_bracketing((0, 0, 1))
        (0, (0, 1))

        >>> standard_bracketing((0, 1, 1))
        ((0, 1), 1)
    """
    word = tuple(word)
    if not is_lyndon(word):
        raise InputError(f"{word} is not a Lyndon word")
    if len(word) == 1:
        return word[0]

    for split in range(1, len(word)):
        suffix = word[split:]
        if is_lyndon(suffix):
            return (standard_bracketing(word[:split]), standard_bracketing(suffix))

    raise AssertionError("the last letter is always a Lyndon suffix")


def _multiply(left: AssociativePolynomial, right: AssociativePolynomial) -> AssociativePolynomial:
    product: AssociativePolynomial = {}
    for u, a in left.items():
        for v, b in right.items():
            key = u + v
            value = product.get(key, 0) + a * b
            if value:
                product[key] = value
            else:
                product.pop(key, None)
    return product


def _commutator(left: AssociativePolynomial, right: AssociativePolynomial) -> AssociativePolynomial:
    result = _multiply(left, right)
    for word, coeff in _multiply(right, left).items():
        value = result.get(word, 0) - coeff
        if value:
            result[word] = value
        else:
            result.pop(word, None)
    return result


def expand_bracketing(tree: BracketTree) -> AssociativePolynomial:
    """Image of a bracket tree in the free associative algebra ([x, y] = xy - yx)."""
    if isinstance(tree, int):
        return {(tree,): Fraction(1)}
    left, right = tree
    return _commutator(expand_bracketing(left), expand_bracketing(right))


@lru_cache(maxsize=None)
def _expanded_basis_element(word: Word) -> tuple[tuple[Word, Fraction], ...]:
    return tuple(sorted(expand_bracketing(standard_bracketing(word)).items()))


def lie_to_lyndon(poly: AssociativePolynomial) -> dict[Word, Fraction]:
    """
    Coordinates of a Lie polynomial on the Lyndon basis.

    Args:
        poly: element of the free associative algebra lying in the free Lie algebra

    Returns:
        {Lyndon word: coefficient}

    Raises:
        ValueError: If poly is not a Lie polynomial
    """
    remainder = {w: Fraction(c) for w, c in poly.items() if c}
    coordinates: dict[Word, Fraction] = {}

    while remainder:
        smallest = min(remainder, key=lambda w: (len(w), w))
        if not is_lyndon(smallest):
            raise ValueError(f"Not a Lie polynomial: leading word {smallest} is not Lyndon")
        coeff = remainder[smallest]
        coordinates[smallest] = coeff
        for word, c in _expanded_basis_element(smallest):
            value = remainder.get(word, 0) - coeff * c
            if value:
                remainder[word] = value
            else:
                remainder.pop(word, None)

    return coordinates


@lru_cache(maxsize=None)
def _bracket_words(u: Word, v: Word) -> tuple[tuple[Word, Fraction], ...]:
    product = _commutator(
        dict(_expanded_basis_element(u)),
        dict(_expanded_basis_element(v)),
    )
    return tuple(sorted(lie_to_lyndon(product).items()))


def bracket_lyndon(u: Word, v: Word, max_len: int) -> dict[Word, Fraction]:
    """Bracket of two Lyndon basis elements in L^{<=max_len}; longer words vanish."""
    if len(u) + len(v) > max_len:
        return {}
    return dict(_bracket_words(tuple(u), tuple(v)))


# ---------------------------------------------------------------------------
# Free nilpotent quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeNilpotentPresentation:
    """
    Structure constants of L^{<=n}(V) on the Lyndon basis.

    Attributes:
        generators: m = dim V
        nilpotency_class: n
        basis: Lyndon words of length <= n in (length, lex) order
        brackets: {(i, j): {k: coeff}} for i < j, nonzero entries only
    """
    generators: int
    nilpotency_class: int
    basis: tuple[Word, ...]
    brackets: dict[tuple[int, int], dict[int, Fraction]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def basis_names(self) -> list[str]:
        return [word_name(w, self.generators) for w in self.basis]

    @property
    def weights(self) -> list[int]:
        return [len(w) for w in self.basis]


def free_nilpotent(m: int, n: int) -> FreeNilpotentPresentation:
    """
    Free nilpotent Lie algebra of class n on m generators.

    Examples:
        >>> fn = free_nilpotent(2, 2)
        >>> fn.basis_names, fn.brackets
        (['a', 'b', 'ab'], {(0, 1): {2: Fraction(1, 1)}})

    Raises:
        InputError: If m < 1 or n < 1
    """
    if m < 1 or n < 1:
        raise InputError(f"free_nilpotent needs m >= 1 and n >= 1, got m={m}, n={n}")

    basis = tuple(lyndon_words(m, n))
    position = {word: idx for idx, word in enumerate(basis)}

    brackets = {}
    for i, u in enumerate(basis):
        for j in range(i + 1, len(basis)):
            v = basis[j]
            value = bracket_lyndon(u, v, n)
            if value:
                brackets[(i, j)] = {position[w]: c for w, c in sorted(value.items(), key=lambda item: position[item[0]])}

    logger.info("free_nilpotent(%d, %d): dim %d, %d nonzero brackets", m, n, len(basis), len(brackets))
    return FreeNilpotentPresentation(generators=m, nilpotency_class=n, basis=basis, brackets=brackets)


def truncation_projection(m: int, n: int) -> SparseMatrix:
    """
    The quotient map L^{<=n+1}(V) -> L^{<=n}(V) on Lyndon bases.

    Both bases are in (length, lex) order, so the map keeps the first
    dim L^{<=n} coordinates and kills the length n+1 words.
    """
    source = len(lyndon_words(m, n + 1))
    target = len(lyndon_words(m, n))
    return SparseMatrix(target, source, {(i, i): Fraction(1) for i in range(target)})
