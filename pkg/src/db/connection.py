"""
Database connection management for the run ledger.

The ledger is an SQLite file chosen per invocation (--ledger PATH); engines
are cached per URL. ":memory:" gives a private in-memory database, which is
what the tests use.
"""

import logging
import os
from functools import lru_cache

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

logger = logging.getLogger(__name__)

DEFAULT_LEDGER_PATH = os.path.join("data", "ledger.db")
MEMORY = ":memory:"


def ledger_url(path: str) -> str:
    if path == MEMORY:
        return "sqlite://"
    return f"sqlite:///{path}"


@lru_cache(maxsize=None)
def get_engine(path: str = DEFAULT_LEDGER_PATH) -> Engine:
    """
    Create and cache the SQLAlchemy engine for a ledger file.

    StaticPool keeps a single connection, so an in-memory ledger survives
    across sessions of the same engine.

    Returns:
        Engine: SQLAlchemy engine instance
    """
    if path != MEMORY:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    logger.debug("opening ledger %s", path)
    return create_engine(
        ledger_url(path),
        connect_args={"check_same_thread": False},
        poolclass=StaticPool,
        echo=False,
    )


@lru_cache(maxsize=None)
def get_session_local(path: str = DEFAULT_LEDGER_PATH) -> sessionmaker:
    return sessionmaker(autocommit=False, autoflush=False, bind=get_engine(path))


def get_db(path: str = DEFAULT_LEDGER_PATH) -> Session:
    """
    Get a new session on the ledger at path, creating tables if needed.

    Usage:
        db = get_db(path)
        try:
            ...
            db.commit()
        except Exception:
            db.rollback()
            raise
        finally:
            db.close()
    """
    init_db(path)
    return get_session_local(path)()


def init_db(path: str = DEFAULT_LEDGER_PATH) -> None:
    """Create all tables; existing tables are left alone."""
    from src.db.models import Base

    Base.metadata.create_all(bind=get_engine(path))


def reset_db(path: str = DEFAULT_LEDGER_PATH) -> None:
    """Drop and recreate all tables. Deletes every stored run and algebra."""
    from src.db.models import Base

    engine = get_engine(path)
    Base.metadata.drop_all(bind=engine)
    Base.metadata.create_all(bind=engine)
