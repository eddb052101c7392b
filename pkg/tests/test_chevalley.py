"""
Tests for Chevalley-Eilenberg cochains, cohomology and the retract data.

Critical: delta^2 = 0 and the five side conditions hold exactly.
"""

import random

import pytest
from fractions import Fraction
from src.services.chevalley import (
    ce_complex,
    cohomology,
    euler_characteristic,
    exterior_dimensions,
    retract_data,
    verify_side_conditions,
    wedge,
    weighted_betti,
)
from src.services.exact_linalg import SparseMatrix, rank
from src.services.lie_model import abelian, change_basis, example, heisenberg, sl2


def _betti(sc):
    return cohomology(ce_complex(sc)).betti


class TestWedge:
    """Test signs of exterior monomials."""

    def test_transposition(self):
        """e1* ^ e0* = -e0* ^ e1*."""
        assert wedge((1,), (0,)) == (-1, (0, 1))

    def test_repeated_index(self):
        """Repeated indices give zero."""
        assert wedge((0, 1), (1,)) == (0, None)

    def test_three_factors(self):
        """(e0 ^ e2) ^ e1 needs one transposition."""
        assert wedge((0, 2), (1,)) == (-1, (0, 1, 2))


class TestComplex:
    """Test the cochain complex."""

    def test_dimensions_are_binomial(self):
        """dim Lambda^k = C(n, k)."""
        cx = ce_complex(heisenberg(5))
        assert [cx.dim(k) for k in range(6)] == exterior_dimensions(5)

    def test_delta_of_top_generator(self):
        """delta(e3*) = -e1* ^ e2* for Heisenberg."""
        cx = ce_complex(heisenberg(3))
        assert cx.differential(1).apply({2: Fraction(1)}) == {cx.position((0, 1)): Fraction(-1)}

    @pytest.mark.parametrize("member", [("heisenberg", [5]), ("free_nilpotent", [2, 3]), ("sl2", []), ("filiform", [5])])
    def test_delta_squared_zero(self, member):
        """delta_{k+1} delta_k = 0 in every degree."""
        cx = ce_complex(example(*member))
        for k in range(cx.top_degree):
            assert (cx.differential(k + 1) @ cx.differential(k)).is_zero()

    def test_weights_preserved(self):
        """Weights of cochain monomials are sums of generator weights."""
        cx = ce_complex(heisenberg(3))
        assert cx.weights[1] == (1, 1, 2)
        assert cx.weights[3] == (4,)


class TestCohomology:
    """Test Betti numbers and representatives."""

    @pytest.mark.parametrize("member,expected", [
        (("heisenberg", [3]), [1, 2, 2, 1]),
        (("heisenberg", [5]), [1, 4, 5, 5, 4, 1]),
        (("abelian", [3]), [1, 3, 3, 1]),
        (("free_nilpotent", [2, 3]), [1, 2, 3, 3, 2, 1]),
        (("sl2", []), [1, 0, 0, 1]),
    ])
    def test_betti_numbers(self, member, expected):
        """Known Betti tables."""
        assert _betti(example(*member)) == expected

    @pytest.mark.parametrize("member", [
        ("heisenberg", [3]), ("heisenberg", [5]), ("filiform", [4]), ("filiform", [5]),
        ("free_nilpotent", [2, 2]), ("free_nilpotent", [2, 3]), ("free_nilpotent", [3, 2]),
        ("abelian", [3]), ("sl2", []),
    ])
    def test_poincare_duality(self, member):
        """b_k = b_{dim - k} for every unimodular algebra in the zoo."""
        betti = _betti(example(*member))
        assert betti == betti[::-1]

    def test_zero_algebra(self):
        """The zero algebra has H^0 = Q only."""
        assert _betti(abelian(0)) == [1]

    def test_heisenberg_representatives(self):
        """H^2 of Heisenberg is spanned by e1*^e3* and e2*^e3*."""
        cx = ce_complex(heisenberg(3))
        coh = cohomology(cx)
        reps = coh.degrees[2].representatives
        assert reps == ({cx.position((0, 2)): Fraction(1)}, {cx.position((1, 2)): Fraction(1)})

    def test_rank_formula(self):
        """b_k = dim Lambda^k - rank delta_k - rank delta_{k-1}."""
        cx = ce_complex(example("free_nilpotent", [2, 3]))
        betti = cohomology(cx).betti
        for k in range(cx.top_degree + 1):
            expected = cx.dim(k) - rank(cx.differential(k)) - (rank(cx.differential(k - 1)) if k else 0)
            assert betti[k] == expected

    def test_euler_characteristic_vanishes(self):
        """Nonzero Lie algebras have Euler characteristic zero."""
        for member in [("heisenberg", [5]), ("free_nilpotent", [2, 3]), ("sl2", [])]:
            assert euler_characteristic(cohomology(ce_complex(example(*member)))) == 0

    def test_invariant_under_change_of_basis(self):
        """A random change of basis leaves the Betti numbers alone."""
        rng = random.Random(5)
        sc = heisenberg(5)
        dense = [[Fraction(0)] * 5 for _ in range(5)]
        for i in range(5):
            dense[i][i] = Fraction(1)
            for j in range(i + 1, 5):
                dense[i][j] = Fraction(rng.randint(-2, 2))
        moved = change_basis(sc, SparseMatrix.from_dense(dense))
        assert _betti(moved) == _betti(sc)

    def test_weighted_betti_heisenberg(self):
        """H^2 of Heisenberg sits in weight 3."""
        table = weighted_betti(cohomology(ce_complex(heisenberg(3))))
        assert table == {0: {0: 1}, 1: {1: 2}, 2: {3: 2}, 3: {4: 1}}

    def test_free_nilpotent_h2_weight(self):
        """H^2 of L^{<=3}(Q^2) is concentrated in weight 4."""
        table = weighted_betti(cohomology(ce_complex(example("free_nilpotent", [2, 3]))))
        assert table[2] == {4: 3}

    def test_weighted_betti_needs_weights(self):
        """sl2 is not graded."""
        with pytest.raises(ValueError, match="weighted"):
            weighted_betti(cohomology(ce_complex(sl2())))


class TestRetract:
    """Test i, p, h."""

    @pytest.mark.parametrize("member", [("heisenberg", [3]), ("free_nilpotent", [2, 3]), ("sl2", []), ("abelian", [2])])
    def test_side_conditions(self, member):
        """All five identities hold."""
        cx = ce_complex(example(*member))
        td = retract_data(cx, cohomology(cx))
        assert all(ok for _, ok in verify_side_conditions(td))

    def test_homotopy_inverts_delta_on_heisenberg(self):
        """h(e1* ^ e2*) = -e3*."""
        cx = ce_complex(heisenberg(3))
        td = retract_data(cx, cohomology(cx))
        assert td.homotopy_at(2).apply({cx.position((0, 1)): Fraction(1)}) == {2: Fraction(-1)}

    def test_projection_of_representatives(self):
        """p i = identity on H^2."""
        cx = ce_complex(heisenberg(3))
        td = retract_data(cx, cohomology(cx))
        assert td.projection[2] @ td.inclusion[2] == SparseMatrix.identity(2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
