"""
Shared plumbing for the command modules: run configuration, algebra
resolution, output writing and the optional ledger.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from src.db.connection import get_db
from src.services import ledger_service
from src.services.lie_model import StructureConstants, example, ingest, parse_algebra_spec, validate
from src.services.report_service import FORMATS, Report, render
from src.utils.errors import InputError

logger = logging.getLogger(__name__)

STORED_PREFIX = "stored"


@dataclass(frozen=True)
class RunConfig:
    """
    Configuration of one CLI run, built from the parsed flags.

    Attributes:
        command: cohomology, minimal-model or check
        check: check name for the check command (one-generated, pbw, littlewood, euler)
        algebra: zoo spec "name:params" or "stored:NAME"
        file: path of a JSON algebra description
        max_weight, arity, max_degree, vars: bounds (None means the default)
        fmt: json, csv, table or pdf
        out: output path, or None for standard output
        ledger: ledger path, or None to leave the ledger alone
        by_weight: refine Betti numbers by weight
        strict: fail instead of qualifying an uncertified arity bound
    """
    command: str
    check: Optional[str] = None
    algebra: Optional[str] = None
    file: Optional[str] = None
    max_weight: Optional[int] = None
    arity: Optional[int] = None
    max_degree: Optional[int] = None
    vars: Optional[int] = None
    fmt: str = "json"
    out: Optional[str] = None
    ledger: Optional[str] = None
    by_weight: bool = False
    strict: bool = False

    def __post_init__(self):
        for name in ("max_weight", "arity", "max_degree", "vars"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive, got {value}")
        if self.arity is not None and self.arity < 2:
            raise InputError(f"--arity must be at least 2, got {self.arity}")
        if self.algebra is not None and self.file is not None:
            raise InputError("Give either --algebra or --file, not both")
        if self.fmt not in FORMATS:
            raise InputError(f"Unknown format '{self.fmt}'. Supported: {', '.join(FORMATS)}")
        if self.fmt == "pdf" and not self.out:
            raise InputError("--format pdf needs --out")

    @property
    def needs_algebra(self) -> bool:
        return not (self.command == "check" and self.check == "littlewood")

    @property
    def algebra_label(self) -> Optional[str]:
        if self.algebra is not None:
            return self.algebra
        if self.file is not None:
            return os.path.splitext(os.path.basename(self.file))[0]
        return None

    @property
    def command_name(self) -> str:
        return f"{self.command} {self.check}" if self.check else self.command


def resolve_algebra(cfg: RunConfig) -> StructureConstants:
    """
    Load and validate the algebra named by the configuration.

    Raises:
        InputError: If no source is given, the file is unreadable or the name unknown
        JacobiFailure, WeightMismatch: If the structure constants are invalid
    """
    if cfg.algebra is None and cfg.file is None:
        raise InputError("An algebra is required: use --algebra name:params or --file path")

    if cfg.file is not None:
        try:
            with open(cfg.file, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise InputError(f"Cannot read {cfg.file}: {exc.strerror}") from None
        return validate(ingest(text))

    prefix, _, stored_name = cfg.algebra.strip().partition(":")
    if prefix == STORED_PREFIX:
        stored_name = stored_name.strip()
        if not cfg.ledger:
            raise InputError("--algebra stored:NAME needs --ledger PATH")
        db = get_db(cfg.ledger)
        try:
            return validate(ledger_service.load_algebra(db, stored_name))
        finally:
            db.close()

    name, params = parse_algebra_spec(cfg.algebra)
    return example(name, params)


def describe_input(cfg: RunConfig, sc: Optional[StructureConstants]) -> dict:
    info = {}
    if cfg.algebra_label is not None:
        info["algebra"] = cfg.algebra_label
    if sc is not None:
        info["dim"] = sc.dim
        info["basis"] = list(sc.basis_names)
        info["weights"] = list(sc.weights) if sc.weights is not None else None
    for name in ("max_weight", "arity", "max_degree", "vars"):
        value = getattr(cfg, name)
        if value is not None:
            info[name] = value
    return info


def emit(cfg: RunConfig, report: Report, stdout) -> None:
    """Write the rendered report to --out or to stdout."""
    rendered = render(report, cfg.fmt)
    if cfg.out:
        if isinstance(rendered, bytes):
            with open(cfg.out, "wb") as handle:
                handle.write(rendered)
        else:
            with open(cfg.out, "w", encoding="utf-8") as handle:
                handle.write(rendered)
        logger.info("report written to %s", cfg.out)
    else:
        stdout.write(rendered)


def record_in_ledger(cfg: RunConfig, sc: Optional[StructureConstants], report: Report, exit_code: int) -> None:
    """Store the algebra and the run when --ledger is given."""
    if not cfg.ledger:
        return
    db = get_db(cfg.ledger)
    try:
        label = cfg.algebra_label
        if sc is not None and label and not label.startswith(f"{STORED_PREFIX}:"):
            ledger_service.save_algebra(db, label, sc, replace=True)
        ledger_service.record_run(db, cfg.command_name, label, report.verdict, exit_code, report.to_json_dict())
    finally:
        db.close()
