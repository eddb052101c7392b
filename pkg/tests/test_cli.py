"""
Tests for the command-line entry point: outputs and exit codes.
"""

import csv
import io
import json

import pytest
import main
from src.db.connection import get_db
from src.services import ledger_service, transfer
from src.utils.errors import StasheffViolation

BROKEN_JACOBI = {
    "dim": 3,
    "basis": ["e1", "e2", "e3"],
    "brackets": [
        {"i": 0, "j": 1, "coeffs": {"2": "1"}},
        {"i": 0, "j": 2, "coeffs": {"0": "1"}},
    ],
}


def _run(capsys, *argv):
    code = main.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _json(capsys, *argv):
    code, out, _ = _run(capsys, *argv)
    return code, json.loads(out)


class TestCohomologyCommand:
    """Test the cohomology command."""

    def test_heisenberg(self, capsys):
        """Betti [1, 2, 2, 1] with passing invariant checks."""
        code, data = _json(capsys, "cohomology", "--algebra", "heisenberg:3")
        assert code == 0
        assert sorted(data) == ["command", "input", "invariant_checks", "result"]
        assert data["result"]["betti"] == [1, 2, 2, 1]
        assert all(data["invariant_checks"].values())
        assert data["result"]["representatives"]["2"] == [{"e1*^e3*": "1"}, {"e2*^e3*": "1"}]

    def test_abelian(self, capsys):
        """Binomial Betti numbers."""
        code, data = _json(capsys, "cohomology", "--algebra", "abelian:3")
        assert code == 0
        assert data["result"]["betti"] == [1, 3, 3, 1]

    def test_by_weight(self, capsys):
        """Weight refinement of Heisenberg cohomology."""
        _, data = _json(capsys, "cohomology", "--algebra", "heisenberg:3", "--by-weight")
        assert data["result"]["weighted_betti"]["2"] == {"3": 2}

    def test_invalid_jacobi_file(self, capsys, tmp_path):
        """A file failing Jacobi exits with 2 and names the triple."""
        path = tmp_path / "g.json"
        path.write_text(json.dumps(BROKEN_JACOBI))
        code, out, err = _run(capsys, "cohomology", "--file", str(path))
        assert code == 2
        assert out == ""
        assert "Jacobi identity fails on (0, 1, 2)" in err

    @pytest.mark.parametrize("field,value", [("brackets", 5), ("basis", 5), ("weights", [1.7, 1, 2]), ("weight", [1, 1, 2])])
    def test_malformed_file(self, capsys, tmp_path, field, value):
        """Malformed descriptions exit with 2 and a message, never a traceback."""
        data = {"dim": 3, "basis": ["e1", "e2", "e3"], "brackets": [{"i": 0, "j": 1, "coeffs": {"2": "1"}}]}
        data[field] = value
        path = tmp_path / "g.json"
        path.write_text(json.dumps(data))
        code, out, err = _run(capsys, "cohomology", "--file", str(path))
        assert code == 2
        assert out == ""
        assert err.startswith("error: ")

    def test_missing_file(self, capsys, tmp_path):
        """An unreadable file is an input error."""
        code, _, err = _run(capsys, "cohomology", "--file", str(tmp_path / "absent.json"))
        assert code == 2
        assert "Cannot read" in err

    def test_unknown_algebra(self, capsys):
        """Unknown zoo names exit with 2."""
        code, _, err = _run(capsys, "cohomology", "--algebra", "e8")
        assert code == 2
        assert "Unknown algebra" in err

    def test_both_sources(self, capsys, tmp_path):
        """--algebra and --file are exclusive."""
        code, _, _ = _run(capsys, "cohomology", "--algebra", "sl2", "--file", str(tmp_path / "x.json"))
        assert code == 2

    def test_deterministic(self, capsys):
        """Two runs print byte-identical JSON."""
        _, first, _ = _run(capsys, "cohomology", "--algebra", "free_nilpotent:2,3")
        _, second, _ = _run(capsys, "cohomology", "--algebra", "free_nilpotent:2,3")
        assert first == second


class TestMinimalModelCommand:
    """Test the minimal-model command."""

    def test_heisenberg(self, capsys):
        """m_2 is zero on H^1 (x) H^1 and m_3 reaches H^2."""
        code, data = _json(capsys, "minimal-model", "--algebra", "heisenberg:3", "--arity", "4")
        assert code == 0
        result = data["result"]
        h1 = [b["index"] for b in result["basis"] if b["degree"] == 1]
        m2_on_h1 = [e for e in result["operations"]["2"] if all(x in h1 for x in e["inputs"])]
        assert m2_on_h1 == []
        assert result["h2_component_ranks"]["3"] == {"rank": 2, "h2_dim": 2}
        assert data["invariant_checks"]["stasheff_identities"]

    def test_abelian_only_m2(self, capsys):
        """Exterior algebras carry only m_2."""
        code, data = _json(capsys, "minimal-model", "--algebra", "abelian:2")
        assert code == 0
        operations = data["result"]["operations"]
        assert operations["2"]
        assert all(not operations[k] for k in operations if k != "2")

    def test_free_nilpotent_m4(self, capsys):
        """m_4 on (H^1)^4 hits H^2 for L^{<=3}(Q^2)."""
        code, data = _json(capsys, "minimal-model", "--algebra", "free_nilpotent:2,3", "--arity", "5")
        assert code == 0
        assert data["result"]["h2_component_ranks"]["4"]["rank"] == 3

    def test_stasheff_failure_exit_code(self, capsys, monkeypatch):
        """A failing identity exits with 3."""
        def failing(ma, up_to_arity=None):
            raise StasheffViolation(4, (1, 1, 2, 2), {5: 1})

        monkeypatch.setattr(transfer, "check_stasheff", failing)
        code, out, err = _run(capsys, "minimal-model", "--algebra", "heisenberg:3")
        assert code == 3
        assert "Stasheff identity of arity 4" in err

    def test_arity_below_two(self, capsys):
        """--arity 1 is an input error."""
        code, _, _ = _run(capsys, "minimal-model", "--algebra", "heisenberg:3", "--arity", "1")
        assert code == 2


class TestCheckCommand:
    """Test the check subcommands."""

    def test_one_generated(self, capsys):
        """L^{<=3}(Q^2) is 1-generated, with certificates."""
        code, data = _json(capsys, "check", "one-generated", "--algebra", "free_nilpotent:2,3")
        assert code == 0
        assert data["result"]["verdict"] is True
        degree_two = data["result"]["degrees"][1]
        assert degree_two["dim_generated"] == 3
        assert degree_two["certificates"][0]["expression"][:2] == ["m", 4]

    def test_one_generated_false(self, capsys):
        """sl2 is not 1-generated: exit 1."""
        code, data = _json(capsys, "check", "one-generated", "--algebra", "sl2")
        assert code == 1
        assert data["result"]["verdict"] is False

    def test_strict_bound(self, capsys):
        """Strict mode with a short arity bound exits with 1."""
        code, _, err = _run(capsys, "check", "one-generated", "--algebra", "heisenberg:3", "--arity", "3", "--strict")
        assert code == 1
        assert "arity 4" in err

    def test_short_arity_on_weighted_model(self, capsys):
        """An uncertified --arity gives a qualified verdict, not an internal error."""
        code, out, err = _run(capsys, "check", "one-generated", "--algebra", "heisenberg:5", "--arity", "2")
        assert code == 1
        assert "internal error" not in err
        data = json.loads(out)
        assert data["result"]["verdict"] is False
        assert data["result"]["bound_sufficient"] is False
        assert data["result"]["qualification"] == "generated up to arity 2"
        assert "bar_filtration" not in data["result"]
        assert "bar_filtration_agrees" not in data["invariant_checks"]

    @pytest.mark.parametrize("algebra", ["heisenberg:5", "filiform:5", "free_nilpotent:2,3"])
    def test_bar_filtration_agrees_with_certified_bound(self, capsys, algebra):
        """With the default bound the bar filtration is compared weight by weight."""
        code, data = _json(capsys, "check", "one-generated", "--algebra", algebra)
        assert code == 0
        assert data["invariant_checks"]["bar_filtration_agrees"] is True
        assert all(row["ok"] for row in data["result"]["bar_filtration"])

    def test_pbw(self, capsys):
        """Heisenberg H^0 matches Sym: 1, 2, 4, 6, 9."""
        code, data = _json(capsys, "check", "pbw", "--algebra", "heisenberg:3", "--max-weight", "4")
        assert code == 0
        rows = data["result"]["rows"]
        assert [r["h0"] for r in rows] == [1, 2, 4, 6, 9]
        assert [r["sym"] for r in rows] == [1, 2, 4, 6, 9]
        assert all(r["ok"] for r in rows)

    def test_pbw_csv_matches_json(self, capsys):
        """CSV carries the same numbers as JSON."""
        _, data = _json(capsys, "check", "pbw", "--algebra", "heisenberg:3", "--max-weight", "3")
        _, out, _ = _run(capsys, "check", "pbw", "--algebra", "heisenberg:3", "--max-weight", "3", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [int(r["h0"]) for r in rows] == [r["h0"] for r in data["result"]["rows"]]
        assert [int(r["sym"]) for r in rows] == [r["sym"] for r in data["result"]["rows"]]

    def test_pbw_unweighted(self, capsys):
        """sl2 cannot be truncated by weight: exit 2."""
        code, _, err = _run(capsys, "check", "pbw", "--algebra", "sl2")
        assert code == 2
        assert "weights" in err

    def test_littlewood(self, capsys):
        """Two variables, degree 6."""
        code, data = _json(capsys, "check", "littlewood", "--vars", "2", "--max-degree", "6")
        assert code == 0
        assert data["result"]["ok"] is True
        assert data["result"]["lhs"] == "1 - x1 - x2 + x1^2*x2 + x1*x2^2 - x1^2*x2^2"

    def test_littlewood_needs_vars(self, capsys):
        """--vars is required."""
        code, _, err = _run(capsys, "check", "littlewood")
        assert code == 2
        assert "--vars" in err

    def test_euler(self, capsys):
        """Graded Euler characteristic of Heisenberg."""
        code, data = _json(capsys, "check", "euler", "--algebra", "heisenberg:3")
        assert code == 0
        assert data["result"]["product_side"] == "1 - 2*t + 2*t^3 - t^4"

    def test_unknown_check(self):
        """argparse rejects unknown checks."""
        with pytest.raises(SystemExit) as info:
            main.main(["check", "everything"])
        assert info.value.code == 2


class TestOutputAndLedger:
    """Test --out, --format and --ledger."""

    def test_table_format(self, capsys):
        """Plain-text table with the verdict in the header."""
        code, out, _ = _run(capsys, "check", "pbw", "--algebra", "heisenberg:3", "--max-weight", "2", "--format", "table")
        assert code == 0
        assert out.splitlines()[0] == "check pbw  verdict: true"

    def test_pdf_needs_out(self, capsys):
        """PDF goes to a file only."""
        code, _, _ = _run(capsys, "cohomology", "--algebra", "heisenberg:3", "--format", "pdf")
        assert code == 2

    def test_pdf_written(self, capsys, tmp_path):
        """--out receives the PDF bytes."""
        path = tmp_path / "report.pdf"
        code, out, _ = _run(capsys, "cohomology", "--algebra", "heisenberg:3", "--format", "pdf", "--out", str(path))
        assert code == 0
        assert out == ""
        assert path.read_bytes().startswith(b"%PDF")

    def test_ledger_records_and_reloads(self, capsys, tmp_path):
        """A run stores the algebra, which stored:NAME then reuses."""
        ledger = str(tmp_path / "ledger.db")
        code, _, _ = _run(capsys, "cohomology", "--algebra", "heisenberg:3", "--ledger", ledger)
        assert code == 0

        code, data = _json(capsys, "cohomology", "--algebra", "stored:heisenberg:3", "--ledger", ledger)
        assert code == 0
        assert data["result"]["betti"] == [1, 2, 2, 1]

        db = get_db(ledger)
        try:
            runs = ledger_service.list_runs(db)
            assert [r.algebra for r in runs] == ["stored:heisenberg:3", "heisenberg:3"]
            assert [r.name for r in ledger_service.list_algebras(db)] == ["heisenberg:3"]
        finally:
            db.close()

    def test_stored_needs_ledger(self, capsys):
        """stored:NAME without --ledger is an input error."""
        code, _, err = _run(capsys, "cohomology", "--algebra", "stored:h")
        assert code == 2
        assert "--ledger" in err


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
