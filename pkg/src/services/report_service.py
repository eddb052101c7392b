"""
Rendering of command reports as JSON, CSV, plain-text tables or PDF.

Every command produces a Report. JSON carries the full structure with the
top-level keys command, input, result and invariant_checks; CSV and table
render the report's primary table through pandas, with the same numbers as
the JSON result.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import pandas as pd

from src.utils.errors import InputError

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "table", "pdf")


@dataclass(frozen=True)
class Report:
    """
    Attributes:
        command: command name, e.g. "check pbw"
        input: description of the input (algebra, bounds)
        result: JSON-ready result
        invariant_checks: {check name: passed}
        table: primary table as a list of rows (dicts with the same keys)
        verdict: overall verdict for check commands, None otherwise
    """
    command: str
    input: dict
    result: Any
    invariant_checks: dict = field(default_factory=dict)
    table: list = field(default_factory=list)
    verdict: Optional[bool] = None

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "invariant_checks": self.invariant_checks,
        }


def _cell(value) -> Any:
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def report_frame(report: Report) -> pd.DataFrame:
    """The primary table as a DataFrame; nested values become JSON text."""
    rows = [{key: _cell(value) for key, value in row.items()} for row in report.table]
    if not rows:
        return pd.DataFrame()
    return pd.DataFrame(rows, columns=list(report.table[0].keys()))


def render_json(report: Report) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"


def render_csv(report: Report) -> str:
    return report_frame(report).to_csv(index=False)


def render_table(report: Report) -> str:
    frame = report_frame(report)
    header = f"{report.command}"
    if report.verdict is not None:
        header += f"  verdict: {str(report.verdict).lower()}"
    if frame.empty:
        return header + "\n(no rows)\n"
    return header + "\n" + frame.to_string(index=False) + "\n"


def render(report: Report, fmt: str):
    """
    Render a report.

    Returns:
        str for json/csv/table, bytes for pdf

    Raises:
        InputError: On an unknown format
    """
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "table":
        return render_table(report)
    if fmt == "pdf":
        from src.services.pdf_service import generate_verification_pdf

        return generate_verification_pdf(report)
    raise InputError(f"Unknown format '{fmt}'. Supported: {', '.join(FORMATS)}")
