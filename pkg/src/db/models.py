"""
Ledger models: a catalogue of structure constants and an audit trail of runs.

SQLite has no exact rational type, so coefficients go through RationalType,
which stores the canonical "p/q" text.
"""

import datetime

from sqlalchemy import Column, DateTime, ForeignKey, Integer, String, Text, TypeDecorator, UniqueConstraint
from sqlalchemy.orm import declarative_base, relationship

from src.utils.rational_utils import ensure_rational, format_rational, parse_rational

Base = declarative_base()


class RationalType(TypeDecorator):
    """
    Fraction stored as TEXT "p/q" (or "n").

    Floats are refused on the way in, like everywhere else in the library.
    """
    impl = Text
    cache_ok = True

    def process_bind_param(self, value, dialect):
        if value is None:
            return None
        return format_rational(ensure_rational(value))

    def process_result_value(self, value, dialect):
        if value is None:
            return None
        return parse_rational(value)


class StoredAlgebra(Base):
    """
    A named Lie algebra in the catalogue.

    Attributes:
        name: unique catalogue name, used as --algebra stored:NAME
        dim: dimension
        basis: basis names joined by commas
        weights: weights joined by commas, or NULL if ungraded
    """
    __tablename__ = "algebras"

    id = Column(Integer, primary_key=True)
    name = Column(String(100), unique=True, nullable=False)
    dim = Column(Integer, nullable=False)
    basis = Column(Text, nullable=False)
    weights = Column(Text, nullable=True)
    created_at = Column(DateTime, default=datetime.datetime.utcnow)

    brackets = relationship(
        "StoredBracket",
        back_populates="algebra",
        cascade="all, delete-orphan",
    )

    def __repr__(self):
        return f"<StoredAlgebra(name={self.name}, dim={self.dim})>"


class StoredBracket(Base):
    """One structure constant c^k_ij with i < j."""
    __tablename__ = "brackets"
    __table_args__ = (UniqueConstraint("algebra_id", "i", "j", "k"),)

    id = Column(Integer, primary_key=True)
    algebra_id = Column(Integer, ForeignKey("algebras.id"), nullable=False)
    i = Column(Integer, nullable=False)
    j = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)
    coeff = Column(RationalType, nullable=False)

    algebra = relationship("StoredAlgebra", back_populates="brackets")

    def __repr__(self):
        return f"<StoredBracket([{self.i}, {self.j}] -> {self.coeff} e{self.k})>"


class RunRecord(Base):
    """
    Audit trail of a CLI run.

    Attributes:
        command: command name, e.g. "cohomology" or "check pbw"
        algebra: algebra label as given on the command line
        verdict: "true", "false" or NULL for commands without a verdict
        exit_code: process exit code
        result_json: the full JSON report
    """
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True)
    command = Column(String(50), nullable=False)
    algebra = Column(String(200), nullable=True)
    verdict = Column(String(10), nullable=True)
    exit_code = Column(Integer, nullable=False)
    result_json = Column(Text, nullable=False)
    created_at = Column(DateTime, default=datetime.datetime.utcnow)

    def __repr__(self):
        return f"<RunRecord(id={self.id}, command={self.command}, exit={self.exit_code})>"
