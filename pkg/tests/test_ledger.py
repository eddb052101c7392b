"""
Tests for the ledger: algebra catalogue and run audit trail.
"""

import json

import pytest
from fractions import Fraction
from src.db.connection import MEMORY, get_db, ledger_url, reset_db
from src.services.ledger_service import (
    delete_algebra,
    list_algebras,
    list_runs,
    load_algebra,
    record_run,
    save_algebra,
)
from src.services.lie_model import StructureConstants, example, heisenberg, sl2
from src.utils.errors import InputError, JacobiFailure


@pytest.fixture
def db():
    reset_db(MEMORY)
    session = get_db(MEMORY)
    yield session
    session.close()


class TestConnection:
    """Test ledger URLs."""

    def test_memory_url(self):
        """:memory: maps to the in-memory SQLite URL."""
        assert ledger_url(MEMORY) == "sqlite://"

    def test_file_url(self):
        """Paths map to sqlite:/// URLs."""
        assert ledger_url("data/ledger.db") == "sqlite:///data/ledger.db"


class TestCatalogue:
    """Test storing and loading algebras."""

    def test_round_trip(self, db):
        """Stored structure constants come back unchanged."""
        sc = example("free_nilpotent", [2, 3])
        save_algebra(db, "fn23", sc)
        assert load_algebra(db, "fn23") == sc

    def test_rational_coefficients_exact(self, db):
        """Coefficients such as -2/3 survive the TEXT column."""
        sc = StructureConstants(3, ("x", "y", "z"), {(0, 1): {2: Fraction(-2, 3)}}, weights=(1, 1, 2))
        save_algebra(db, "scaled", sc)
        loaded = load_algebra(db, "scaled")
        assert loaded.bracket[(0, 1)][2] == Fraction(-2, 3)

    def test_unweighted(self, db):
        """An ungraded algebra loads with weights None."""
        save_algebra(db, "sl2", sl2())
        assert load_algebra(db, "sl2").weights is None

    def test_duplicate_name(self, db):
        """Names are unique unless replace is requested."""
        save_algebra(db, "h", heisenberg(3))
        with pytest.raises(InputError, match="already exists"):
            save_algebra(db, "h", heisenberg(5))
        save_algebra(db, "h", heisenberg(5), replace=True)
        assert load_algebra(db, "h").dim == 5

    def test_empty_name(self, db):
        """Blank names are refused."""
        with pytest.raises(InputError, match="cannot be empty"):
            save_algebra(db, "  ", heisenberg(3))

    def test_invalid_algebra_not_stored(self, db):
        """Validation runs before anything is written."""
        bad = StructureConstants(3, ("a", "b", "c"), {(0, 1): {2: 1}, (0, 2): {0: 1}})
        with pytest.raises(JacobiFailure):
            save_algebra(db, "bad", bad)
        assert list_algebras(db) == []

    def test_missing(self, db):
        """Loading an unknown name is an input error."""
        with pytest.raises(InputError, match="No algebra named"):
            load_algebra(db, "nothing")

    def test_list_and_delete(self, db):
        """Listing is by name; deleting reports whether anything was removed."""
        save_algebra(db, "b", heisenberg(3))
        save_algebra(db, "a", sl2())
        assert [r.name for r in list_algebras(db)] == ["a", "b"]
        assert delete_algebra(db, "a")
        assert not delete_algebra(db, "a")
        assert [r.name for r in list_algebras(db)] == ["b"]


class TestRuns:
    """Test the audit trail."""

    def test_record_and_list(self, db):
        """Runs are listed newest first with their JSON report."""
        record_run(db, "cohomology", "heisenberg:3", None, 0, {"result": {"betti": [1, 2, 2, 1]}})
        record_run(db, "check pbw", "heisenberg:3", True, 0, {"result": {"verdict": True}})
        runs = list_runs(db)
        assert [r.command for r in runs] == ["check pbw", "cohomology"]
        assert runs[0].verdict == "true"
        assert runs[1].verdict is None
        assert json.loads(runs[1].result_json)["result"]["betti"] == [1, 2, 2, 1]

    def test_filter_by_command(self, db):
        """Runs can be filtered by command."""
        record_run(db, "cohomology", None, None, 0, {})
        record_run(db, "check littlewood", None, False, 1, {})
        runs = list_runs(db, command="check littlewood")
        assert len(runs) == 1
        assert runs[0].exit_code == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
