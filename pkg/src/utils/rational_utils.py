"""
Exact rational helpers.

Every number in this library is a fractions.Fraction. Floats are refused at
the boundary: a cohomology dimension or a Stasheff identity is an exact fact,
and a rounded coefficient silently changes ranks.

The string form "p/q" (or "n" for integers) is the only serialization used
in JSON reports, ingestion files and the ledger.
"""

import re
from fractions import Fraction

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def ensure_rational(value) -> Fraction:
    """
    Safely convert input to Fraction.

    NEVER accept float - a float has already lost the exact value.

    Examples:
        >>> ensure_rational("3/4")
        Fraction(3, 4)

        >>> ensure_rational(-2)
        Fraction(-2, 1)

    Args:
        value: Fraction, int or str ("p/q" or "n")

    Returns:
        Fraction in lowest terms with positive denominator

    Raises:
        TypeError: If value is a float, a bool or an unsupported type
        ValueError: If a string is not a valid rational
    """
    if isinstance(value, Fraction):
        return value

    # bool is an int subclass; a True coefficient is almost certainly a bug upstream
    if isinstance(value, bool):
        raise TypeError("Cannot convert bool to a rational coefficient")

    if isinstance(value, int):
        return Fraction(value)

    if isinstance(value, str):
        return parse_rational(value)

    if isinstance(value, float):
        raise TypeError(
            f"Cannot convert float {value!r} to an exact rational. "
            f"Pass a string such as \"1/3\" or an int instead."
        )

    raise TypeError(
        f"Cannot convert {type(value).__name__} to Fraction. "
        f"Supported types: Fraction, int, str"
    )


def parse_rational(text: str) -> Fraction:
    """
    Parse the canonical string form "p/q" or "n".

    Args:
        text: rational literal, optional sign on the numerator

    Returns:
        Fraction

    Raises:
        ValueError: If text is not of the form "p/q" or "n", or q == 0
    """
    match = _RATIONAL_PATTERN.match(text)
    if not match:
        raise ValueError(f"Cannot convert string '{text}' to a rational (expected \"p/q\" or \"n\")")

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"Zero denominator in '{text}'")

    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """
    Format a Fraction as "p/q", or "n" when the denominator is 1.

    Examples:
        >>> format_rational(Fraction(-1, 2))
        '-1/2'

        >>> format_rational(Fraction(4, 2))
        '2'
    """
    value = ensure_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_sparse_vector(vector: dict[int, Fraction]) -> dict[str, str]:
    """Render a sparse vector as {index: "p/q"} with string keys, sorted by index."""
    return {str(idx): format_rational(coeff) for idx, coeff in sorted(vector.items())}


def parse_sparse_vector(data: dict[str, str]) -> dict[int, Fraction]:
    """Inverse of format_sparse_vector; zero coefficients are dropped."""
    vector = {}
    for key, literal in data.items():
        coeff = ensure_rational(literal)
        if coeff != 0:
            vector[int(key)] = coeff
    return vector
