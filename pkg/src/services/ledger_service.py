"""
Service layer for the ledger: the algebra catalogue and the run audit trail.

Provides CRUD operations on StoredAlgebra/StoredBracket and appends
RunRecord rows for every CLI run made with --ledger.
"""

import json
import logging
from typing import Optional

from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session

from src.db.models import RunRecord, StoredAlgebra, StoredBracket
from src.services.lie_model import StructureConstants, validate
from src.utils.errors import InputError

logger = logging.getLogger(__name__)


def save_algebra(db: Session, name: str, sc: StructureConstants, replace: bool = False) -> StoredAlgebra:
    """
    Store structure constants under a catalogue name.

    Args:
        db: Database session
        name: unique catalogue name
        sc: structure constants (validated before storing)
        replace: overwrite an existing entry of the same name

    Returns:
        StoredAlgebra: the stored record

    Raises:
        InputError: If the name is empty or already taken and replace is False
        JacobiFailure: If sc fails validation
    """
    name = name.strip()
    if not name:
        raise InputError("Catalogue name cannot be empty")
    validate(sc)

    existing = find_algebra(db, name)
    if existing is not None:
        if not replace:
            raise InputError(f"Algebra '{name}' already exists in the ledger. Use replace=True to overwrite it.")
        db.delete(existing)
        db.flush()

    record = StoredAlgebra(
        name=name,
        dim=sc.dim,
        basis=",".join(sc.basis_names),
        weights=",".join(str(w) for w in sc.weights) if sc.weights is not None else None,
    )
    record.brackets = [
        StoredBracket(i=i, j=j, k=k, coeff=c)
        for (i, j), coeffs in sorted(sc.bracket.items())
        for k, c in sorted(coeffs.items())
    ]

    try:
        db.add(record)
        db.commit()
        db.refresh(record)
    except IntegrityError:
        db.rollback()
        raise InputError(f"Algebra '{name}' could not be stored (duplicate entry)") from None

    logger.info("stored algebra %s (dim %d, %d constants)", name, sc.dim, len(record.brackets))
    return record


def find_algebra(db: Session, name: str) -> Optional[StoredAlgebra]:
    return db.query(StoredAlgebra).filter(StoredAlgebra.name == name).first()


def load_algebra(db: Session, name: str) -> StructureConstants:
    """
    Rebuild structure constants from the catalogue.

    Raises:
        InputError: If no algebra has that name
    """
    record = find_algebra(db, name)
    if record is None:
        raise InputError(f"No algebra named '{name}' in the ledger")

    bracket: dict[tuple[int, int], dict[int, object]] = {}
    for entry in sorted(record.brackets, key=lambda b: (b.i, b.j, b.k)):
        bracket.setdefault((entry.i, entry.j), {})[entry.k] = entry.coeff

    basis = tuple(record.basis.split(",")) if record.dim else ()
    weights = None
    if record.weights is not None:
        weights = tuple(int(w) for w in record.weights.split(",") if w)
    return StructureConstants(dim=record.dim, basis_names=basis, bracket=bracket, weights=weights)


def list_algebras(db: Session) -> list[StoredAlgebra]:
    return db.query(StoredAlgebra).order_by(StoredAlgebra.name).all()


def delete_algebra(db: Session, name: str) -> bool:
    """
    Delete an algebra and its structure constants.

    Returns:
        bool: True if deleted, False if not found
    """
    record = find_algebra(db, name)
    if record is None:
        return False
    db.delete(record)
    db.commit()
    return True


def record_run(
    db: Session,
    command: str,
    algebra: Optional[str],
    verdict: Optional[bool],
    exit_code: int,
    report: dict,
) -> RunRecord:
    """
    Append a run to the audit trail.

    Args:
        db: Database session
        command: command name
        algebra: algebra label as given by the user, if any
        verdict: overall verdict, or None for commands without one
        exit_code: process exit code
        report: the JSON-ready report

    Returns:
        RunRecord: saved record
    """
    run = RunRecord(
        command=command,
        algebra=algebra,
        verdict=None if verdict is None else str(bool(verdict)).lower(),
        exit_code=exit_code,
        result_json=json.dumps(report, sort_keys=True),
    )
    db.add(run)
    db.commit()
    db.refresh(run)
    return run


def list_runs(db: Session, limit: int = 100, command: Optional[str] = None) -> list[RunRecord]:
    """Most recent runs first."""
    query = db.query(RunRecord)
    if command is not None:
        query = query.filter(RunRecord.command == command)
    return query.order_by(RunRecord.id.desc()).limit(limit).all()
