"""
Tests for weight-truncated bar complexes and the PBW dimension check.
"""

import pytest
from fractions import Fraction
from src.services.bar_pbw import (
    build_bar_complex,
    bar_weight_complex,
    cochain_letters,
    enumerate_words,
    pbw_check,
    sym_dimensions,
    word_label,
)
from src.services.lie_model import abelian, example, heisenberg, sl2
from src.utils.errors import InputError, InvariantViolation, UnweightedInput


class TestWords:
    """Test word enumeration."""

    def test_lexicographic(self):
        """Weights (1, 2): words of weight 3."""
        assert enumerate_words([1, 2], 3) == [(0, 0, 0), (0, 1), (1, 0)]

    def test_weight_zero(self):
        """Only the empty word has weight 0."""
        assert enumerate_words([1], 0) == [()]

    def test_letters_need_positive_weight(self):
        """Weight-0 letters would make the complex infinite."""
        with pytest.raises(InputError, match="weight >= 1"):
            enumerate_words([0, 1], 2)


class TestSymDimensions:
    """Test Hilbert series of Sym."""

    def test_heisenberg(self):
        """Weights (1, 1, 2) give 1, 2, 4, 6, 9."""
        assert sym_dimensions([1, 1, 2], 4) == [1, 2, 4, 6, 9]

    def test_polynomial_ring(self):
        """Two weight-1 variables give n + 1 monomials."""
        assert sym_dimensions([1, 1], 5) == [1, 2, 3, 4, 5, 6]


class TestBarComplex:
    """Test the bar complex of C^{>0}(g)."""

    def test_heisenberg_weight_two(self):
        """Five words in degree 0, e1*^e2* in degree 1, H^0 of dimension 4."""
        sc = heisenberg(3)
        letters = cochain_letters(sc)
        bar = bar_weight_complex(sc, 2, letters)
        assert bar.dim(0) == 5
        assert [word_label(letters, w) for w in bar.words[1]] == ["e1*^e2*"]
        assert bar.cohomology_dims() == {0: 4, 1: 0}

    def test_vertical_and_horizontal_parts(self):
        """delta(e3*) and e1*|e2* both hit -e1*^e2*."""
        sc = heisenberg(3)
        letters = cochain_letters(sc)
        bar = bar_weight_complex(sc, 2, letters)
        position = {word_label(letters, w): t for t, w in enumerate(bar.words[0])}
        assert bar.vertical[0].column(position["e3*"]) == {0: Fraction(-1)}
        assert bar.horizontal[0].column(position["e1*|e2*"]) == {0: Fraction(-1)}
        assert bar.horizontal[0].column(position["e2*|e1*"]) == {0: Fraction(1)}

    @pytest.mark.parametrize("member", [("heisenberg", [3]), ("abelian", [3]), ("filiform", [4]), ("free_nilpotent", [2, 2])])
    def test_d_squared_zero_up_to_weight_six(self, member):
        """The assembled differential squares to zero in every weight up to 6."""
        sc = example(*member)
        letters = cochain_letters(sc)
        for w in range(7):
            bar = bar_weight_complex(sc, w, letters)
            for j in bar.degrees:
                if j + 1 in bar.words:
                    assert (bar.differential(j + 1) @ bar.differential(j)).is_zero()

    def test_unweighted_rejected(self):
        """sl2 has no weights to truncate by."""
        with pytest.raises(UnweightedInput):
            cochain_letters(sl2())

    def test_negative_weight(self):
        """Weights are non-negative."""
        with pytest.raises(InputError, match="non-negative"):
            bar_weight_complex(heisenberg(3), -1)

    def test_broken_operation_detected(self):
        """A b_1 with b_1^2 != 0 fails the d^2 = 0 check."""
        with pytest.raises(InvariantViolation, match=r"d\^2"):
            build_bar_complex([2, 3, 4], [1, 1, 1], {1: _bad_differential}, 1)


def _bad_differential(inputs):
    # b_1 with b_1^2 != 0: letter 0 -> letter 1 -> letter 2
    (letter,) = inputs
    return {letter + 1: Fraction(1)} if letter < 2 else {}


class TestPBW:
    """Test the conilpotent PBW dimension equality."""

    def test_heisenberg(self):
        """H^0 matches Sym dims 1, 2, 4, 6, 9 and H^{>=1} vanishes."""
        report = pbw_check(heisenberg(3), 4)
        assert [row.h0 for row in report.rows] == [1, 2, 4, 6, 9]
        assert [row.sym for row in report.rows] == [1, 2, 4, 6, 9]
        assert report.verdict

    @pytest.mark.parametrize("member,max_weight", [(("free_nilpotent", [2, 3]), 4), (("abelian", [2]), 4), (("filiform", [4]), 4)])
    def test_other_algebras(self, member, max_weight):
        """PBW holds for graded nilpotent algebras."""
        assert pbw_check(example(*member), max_weight).verdict

    def test_heisenberg_to_weight_six(self):
        """H^0 follows Sym on weights (1, 1, 2) through weight 6."""
        report = pbw_check(heisenberg(3), 6)
        assert [row.h0 for row in report.rows] == [1, 2, 4, 6, 9, 12, 16]
        assert all(not any(row.higher.values()) for row in report.rows)
        assert report.verdict

    @pytest.mark.parametrize("member", [("abelian", [3]), ("filiform", [4]), ("free_nilpotent", [2, 2])])
    def test_weight_six(self, member):
        """PBW holds through weight 6."""
        report = pbw_check(example(*member), 6)
        assert report.verdict
        assert [row.weight for row in report.rows] == list(range(7))

    def test_abelian_three_generators(self):
        """Weights (1, 1, 1): H^0 has dimension C(w + 2, 2)."""
        report = pbw_check(abelian(3), 6)
        assert [row.h0 for row in report.rows] == [1, 3, 6, 10, 15, 21, 28]

    def test_abelian_is_symmetric_algebra(self):
        """For abelian g, H^0 of weight w has dimension C(w + 1, 1) on two generators."""
        report = pbw_check(abelian(2), 3)
        assert [row.h0 for row in report.rows] == [1, 2, 3, 4]

    def test_negative_max_weight(self):
        """Bounds are non-negative."""
        with pytest.raises(InputError):
            pbw_check(heisenberg(3), -1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
