"""
Tests for structure constants, validation, nilpotency and the JSON format.
"""

import json

import pytest
from fractions import Fraction
from src.services.exact_linalg import SparseMatrix
from src.services.lie_model import (
    StructureConstants,
    abelian,
    abelianization,
    center,
    change_basis,
    derived_algebra,
    example,
    from_json_dict,
    heisenberg,
    ingest,
    is_nilpotent,
    jacobi_defect,
    lower_central_series,
    parse_algebra_spec,
    serialize,
    sl2,
    validate,
)
from src.utils.errors import InputError, JacobiFailure, WeightMismatch


def _corrupted_heisenberg() -> StructureConstants:
    return StructureConstants(
        3, ("e1", "e2", "e3"),
        {(0, 1): {2: Fraction(1)}, (0, 2): {0: Fraction(1)}},
    )


class TestStructureConstants:
    """Test construction and normalization."""

    def test_zeros_dropped(self):
        """Zero coefficients and empty brackets are not stored."""
        sc = StructureConstants(2, ("x", "y"), {(0, 1): {0: "0", 1: 0}})
        assert sc.bracket == {}

    def test_antisymmetry(self):
        """[e_j, e_i] = -[e_i, e_j] and [e_i, e_i] = 0."""
        sc = heisenberg(3)
        assert sc.bracket_basis(1, 0) == {2: Fraction(-1)}
        assert sc.bracket_basis(1, 1) == {}

    def test_bad_key_order(self):
        """Keys must have i < j."""
        with pytest.raises(InputError, match="0 <= i < j"):
            StructureConstants(2, ("x", "y"), {(1, 0): {0: 1}})

    def test_bad_weights(self):
        """Weights must be positive and match the dimension."""
        with pytest.raises(InputError, match="positive"):
            StructureConstants(1, ("x",), {}, weights=(0,))
        with pytest.raises(InputError, match="Expected 1 weights"):
            StructureConstants(1, ("x",), {}, weights=(1, 1))

    @pytest.mark.parametrize("weights", [(1.7, 1, 2), (True, 1, 2), ("1", 1, 2)])
    def test_non_integer_weights_rejected(self, weights):
        """Weights are never coerced: 1.7 does not become 1."""
        with pytest.raises(InputError, match="positive integers"):
            StructureConstants(3, ("x", "y", "z"), {(0, 1): {2: 1}}, weights=weights)


class TestValidate:
    """Test the Jacobi identity and weight checks."""

    @pytest.mark.parametrize("member", ["heisenberg:5", "filiform:5", "abelian:3", "sl2", "free_nilpotent:2,4"])
    def test_zoo_members_valid(self, member):
        """Every zoo member passes validation."""
        name, params = parse_algebra_spec(member)
        sc = example(name, params)
        assert validate(sc) is sc

    def test_corrupted_jacobi_reports_first_triple(self):
        """Adding [e1, e3] = e1 to Heisenberg breaks Jacobi on (0, 1, 2)."""
        with pytest.raises(JacobiFailure) as info:
            validate(_corrupted_heisenberg())
        assert (info.value.i, info.value.j, info.value.k) == (0, 1, 2)
        assert info.value.defect == {2: Fraction(1)}

    def test_jacobi_defect_zero_on_valid(self):
        """The defect vanishes for a Lie algebra."""
        assert jacobi_defect(sl2(), 0, 1, 2) == {}

    def test_weight_mismatch(self):
        """Heisenberg with all weights 1 is not graded."""
        sc = StructureConstants(3, ("x", "y", "z"), {(0, 1): {2: 1}}, weights=(1, 1, 1))
        with pytest.raises(WeightMismatch, match=r"\[e0, e1\]"):
            validate(sc)


class TestNilpotency:
    """Test lower central series and nilpotency class."""

    def test_heisenberg(self):
        """dims [3, 1, 0], class 2."""
        sc = heisenberg(3)
        assert lower_central_series(sc).dims == [3, 1, 0]
        assert is_nilpotent(sc).nilpotency_class == 2

    def test_free_nilpotent_class(self):
        """L^{<=3}(Q^2) has class 3."""
        result = is_nilpotent(example("free_nilpotent", [2, 3]))
        assert result
        assert result.nilpotency_class == 3

    def test_filiform_class(self):
        """The filiform algebra of dimension n has class n - 1."""
        assert is_nilpotent(example("filiform", [5])).nilpotency_class == 4

    def test_sl2_not_nilpotent(self):
        """sl2 = [sl2, sl2]: the series stabilizes."""
        series = lower_central_series(sl2())
        assert series.stabilized
        assert series.dims == [3, 3]
        assert not is_nilpotent(sl2())

    def test_zero_and_abelian(self):
        """Zero algebra has class 0, nonzero abelian class 1."""
        assert is_nilpotent(abelian(0)).nilpotency_class == 0
        assert is_nilpotent(abelian(2)).nilpotency_class == 1

    def test_center_and_derived(self):
        """For Heisenberg both are spanned by e3."""
        sc = heisenberg(3)
        assert center(sc).basis == ({2: Fraction(1)},)
        assert derived_algebra(sc).basis == ({2: Fraction(1)},)

    def test_abelianization(self):
        """heisenberg(5)/[g, g] is abelian of dimension 4 with weight 1."""
        ab = abelianization(heisenberg(5))
        assert ab.dim == 4
        assert ab.bracket == {}
        assert ab.weights == (1, 1, 1, 1)

    def test_change_basis_preserves_invariants(self):
        """A change of basis keeps the lower central series dimensions."""
        sc = example("free_nilpotent", [2, 3])
        dense = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
        dense[0][1] = 2
        dense[3][4] = -1
        moved = change_basis(sc, SparseMatrix.from_dense(dense))
        validate(moved)
        assert moved.weights is None
        assert lower_central_series(moved).dims == lower_central_series(sc).dims


class TestZooAndParsing:
    """Test named examples and the "name:params" grammar."""

    def test_parse(self):
        """name:params splits into name and integers."""
        assert parse_algebra_spec("free_nilpotent:2,3") == ("free_nilpotent", [2, 3])
        assert parse_algebra_spec("sl2") == ("sl2", [])

    def test_parse_non_integer(self):
        """Parameters must be integers."""
        with pytest.raises(InputError, match="not an integer"):
            parse_algebra_spec("heisenberg:x")

    def test_unknown_name(self):
        """Unknown names list the zoo."""
        with pytest.raises(InputError, match="Unknown algebra"):
            example("e8", [])

    def test_wrong_parameter_count(self):
        """free_nilpotent takes two parameters."""
        with pytest.raises(InputError, match="takes 2"):
            example("free_nilpotent", [2])

    def test_even_heisenberg(self):
        """Heisenberg dimensions are odd."""
        with pytest.raises(InputError, match="odd"):
            example("heisenberg", [4])


class TestJsonFormat:
    """Test the ingestion format."""

    def test_round_trip_is_exact(self):
        """ingest(serialize(sc)) == sc and serializing again is byte-identical."""
        sc = StructureConstants(3, ("x", "y", "z"), {(0, 1): {2: Fraction(-2, 3)}}, weights=(1, 1, 2))
        text = serialize(sc)
        assert ingest(text) == sc
        assert serialize(ingest(text)) == text

    def test_rationals_are_strings(self):
        """Coefficients are serialized as "p/q" strings."""
        data = json.loads(serialize(heisenberg(3)))
        assert data["brackets"] == [{"i": 0, "j": 1, "coeffs": {"2": "1"}}]
        assert data["weights"] == [1, 1, 2]

    def test_missing_field(self):
        """A missing key is reported by name."""
        with pytest.raises(InputError, match="'brackets'"):
            from_json_dict({"dim": 1, "basis": ["x"]})

    def test_requires_i_less_than_j(self):
        """Entries with i >= j are rejected."""
        with pytest.raises(InputError, match="i < j"):
            from_json_dict({"dim": 2, "basis": ["x", "y"], "brackets": [{"i": 1, "j": 0, "coeffs": {}}]})

    def test_float_coefficient_rejected(self):
        """Float coefficients are input errors."""
        data = {"dim": 2, "basis": ["x", "y"], "brackets": [{"i": 0, "j": 1, "coeffs": {"0": 0.5}}]}
        with pytest.raises(InputError, match="Bad coefficients"):
            from_json_dict(data)

    def test_invalid_json(self):
        """Malformed text is an input error."""
        with pytest.raises(InputError, match="Invalid JSON"):
            ingest("{not json")

    @pytest.mark.parametrize("field,value", [("brackets", 5), ("basis", 5), ("brackets", {"i": 0}), ("weights", 2)])
    def test_non_list_fields_rejected(self, field, value):
        """basis, brackets and weights must be JSON arrays."""
        data = {"dim": 2, "basis": ["a", "b"], "brackets": []}
        data[field] = value
        with pytest.raises(InputError, match=f"'{field}' must be a list"):
            from_json_dict(data)

    @pytest.mark.parametrize("entry", [5, ["i", "j"], {"i": 0, "j": 1, "coeffs": 3}, {"i": 0, "j": 1}, {"i": True, "j": 1, "coeffs": {}}])
    def test_malformed_bracket_entries(self, entry):
        """Every bracket entry needs integer i, j and a coeffs object."""
        with pytest.raises(InputError):
            from_json_dict({"dim": 2, "basis": ["a", "b"], "brackets": [entry]})

    def test_float_weights_rejected(self):
        """A float weight in the file is an input error, not a truncation."""
        text = json.dumps({"dim": 3, "basis": ["x", "y", "z"], "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}], "weights": [1.7, 1, 2]})
        with pytest.raises(InputError, match="positive integers"):
            ingest(text)

    def test_unknown_field_rejected(self):
        """A misspelt key such as 'weight' is reported instead of ignored."""
        with pytest.raises(InputError, match="Unknown field\(s\).*weight"):
            from_json_dict({"dim": 1, "basis": ["x"], "brackets": [], "weight": [1]})


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
