"""
PDF generation for verification reports.

Uses the fpdf2 library; the layout has an input section, the primary result
table and the list of invariant checks with their outcome.
"""

import json
from datetime import datetime

from fpdf import FPDF

from src.services.report_service import Report, report_frame


def _latin1(text: str) -> str:
    # core PDF fonts only cover Latin-1
    return str(text).encode("latin-1", "replace").decode("latin-1")


class VerificationReport(FPDF):
    """
    PDF report for one command run.

    Sections: input, result table, invariant checks, verdict.
    """

    def __init__(self):
        super().__init__(orientation="P", unit="mm", format="A4")
        self.set_auto_page_break(auto=True, margin=15)
        self.add_page()

    def header(self):
        self.set_font("Helvetica", "B", 16)
        self.cell(0, 10, "Nilpotent Lie algebra verification", new_x="LMARGIN", new_y="NEXT", align="C")
        self.set_font("Helvetica", "", 10)
        self.cell(0, 6, "Exact rational computation report", new_x="LMARGIN", new_y="NEXT", align="C")
        self.ln(5)

    def footer(self):
        self.set_y(-15)
        self.set_font("Helvetica", "I", 8)
        self.cell(0, 10, f"Page {self.page_no()} - generated {datetime.now().strftime('%Y-%m-%d %H:%M')}", align="C")

    def generate_report(self, report: Report) -> bytes:
        """
        Lay out the full report.

        Returns:
            bytes: PDF file content
        """
        self.set_font("Helvetica", "B", 14)
        self.set_fill_color(200, 220, 255)
        self.cell(0, 10, _latin1(report.command.upper()), new_x="LMARGIN", new_y="NEXT", align="C", fill=True)
        self.ln(6)

        self._section("1. INPUT")
        for key, value in sorted(report.input.items()):
            self._add_info_line(f"{key}:", value if isinstance(value, str) else json.dumps(value))
        self.ln(4)

        self._section("2. RESULT")
        frame = report_frame(report)
        if frame.empty:
            self.set_font("Helvetica", "I", 10)
            self.cell(0, 6, "(no table rows)", new_x="LMARGIN", new_y="NEXT")
        else:
            self._add_table(list(frame.columns), [list(row) for row in frame.itertuples(index=False)])
        self.ln(4)

        self._section("3. INVARIANT CHECKS")
        self.set_font("Helvetica", "", 10)
        for name, passed in sorted(report.invariant_checks.items()):
            if passed:
                self.set_text_color(0, 110, 0)
            else:
                self.set_text_color(180, 0, 0)
            self._add_info_line(name, "pass" if passed else "FAIL")
        self.set_text_color(0, 0, 0)
        self.ln(4)

        if report.verdict is not None:
            self.set_font("Helvetica", "B", 11)
            self.set_fill_color(255, 255, 200)
            self.cell(0, 8, f"Verdict: {str(report.verdict).lower()}", new_x="LMARGIN", new_y="NEXT", fill=True)

        return bytes(self.output())

    def _section(self, title: str):
        self.set_font("Helvetica", "B", 12)
        self.cell(0, 8, title, new_x="LMARGIN", new_y="NEXT")
        self.ln(1)

    def _add_info_line(self, label: str, value: str):
        self.set_font("Helvetica", "B", 10)
        self.cell(60, 6, _latin1(label))
        self.set_font("Helvetica", "", 10)
        self.multi_cell(0, 6, _latin1(value), new_x="LMARGIN", new_y="NEXT")

    def _add_table(self, columns: list, rows: list):
        width = (self.w - self.l_margin - self.r_margin) / max(len(columns), 1)
        self.set_font("Helvetica", "B", 9)
        self.set_fill_color(240, 240, 240)
        for name in columns:
            self.cell(width, 7, _latin1(name), border=1, fill=True)
        self.ln()
        self.set_font("Helvetica", "", 9)
        for row in rows:
            for value in row:
                text = _latin1(value)
                if len(text) > 28:
                    text = text[:25] + "..."
                self.cell(width, 7, text, border=1)
            self.ln()


def generate_verification_pdf(report: Report) -> bytes:
    """Convenience wrapper around VerificationReport.generate_report()."""
    return VerificationReport().generate_report(report)
