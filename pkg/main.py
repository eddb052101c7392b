"""
nilmodel - cohomology and minimal models of nilpotent Lie algebras

Command-line entry point. Parses flags, dispatches to the command modules
under views/, renders the report and maps failures to exit codes.

Usage:
    python main.py cohomology --algebra heisenberg:3
    python main.py minimal-model --algebra free_nilpotent:2,3 --arity 4
    python main.py check pbw --algebra heisenberg:3 --max-weight 4 --format table
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from src.services.report_service import FORMATS
from src.utils.errors import (
    EXIT_INPUT_ERROR,
    EXIT_INVARIANT_VIOLATION,
    EXIT_VERDICT_FALSE,
    ArityBoundInsufficient,
    InputError,
    InvariantViolation,
    JacobiFailure,
    NoSolution,
    UnweightedInput,
    WeightMismatch,
)
from views.checks import CHECKS, cmd_check
from views.cohomology import cmd_cohomology
from views.common import RunConfig, emit, record_in_ledger, resolve_algebra
from views.minimal_model import cmd_minimal_model

logger = logging.getLogger("nilmodel")

COMMANDS = {
    "cohomology": cmd_cohomology,
    "minimal-model": cmd_minimal_model,
    "check": cmd_check,
}

INPUT_ERRORS = (InputError, JacobiFailure, WeightMismatch, UnweightedInput, NoSolution, OSError)


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("algebra source")
    source.add_argument("--algebra", help="zoo spec name:params (e.g. heisenberg:3) or stored:NAME")
    source.add_argument("--file", help="JSON description of the structure constants")

    bounds = parser.add_argument_group("bounds")
    bounds.add_argument("--max-weight", type=int, help="largest weight examined")
    bounds.add_argument("--arity", type=int, help="largest arity of transferred operations")
    bounds.add_argument("--max-degree", type=int, help="total degree bound for power series")
    bounds.add_argument("--vars", type=int, help="number of variables for symmetric functions")

    output = parser.add_argument_group("output")
    output.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    output.add_argument("--out", help="write the report here instead of stdout")
    output.add_argument("--ledger", help="SQLite file recording algebras and runs")

    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilmodel",
        description="Exact cohomology, A-infinity minimal models and verdicts for nilpotent Lie algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    coh = sub.add_parser("cohomology", help="Betti numbers and representative cocycles")
    _add_common_flags(coh)
    coh.add_argument("--by-weight", action="store_true", help="refine Betti numbers by weight")

    mm = sub.add_parser("minimal-model", help="transferred operations m_2..m_J on cohomology")
    _add_common_flags(mm)

    chk = sub.add_parser("check", help="run a verdict check")
    chk.add_argument("check", choices=CHECKS)
    _add_common_flags(chk)
    chk.add_argument("--strict", action="store_true", help="fail when the arity bound is not certified")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        check=getattr(args, "check", None),
        algebra=args.algebra,
        file=args.file,
        max_weight=args.max_weight,
        arity=args.arity,
        max_degree=args.max_degree,
        vars=args.vars,
        fmt=args.fmt,
        out=args.out,
        ledger=args.ledger,
        by_weight=getattr(args, "by_weight", False),
        strict=getattr(args, "strict", False),
    )


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one configured command; exceptions propagate to main."""
    report, exit_code = COMMANDS[cfg.command](cfg)
    emit(cfg, report, stdout or sys.stdout)
    if cfg.ledger:
        sc = resolve_algebra(cfg) if cfg.needs_algebra else None
        record_in_ledger(cfg, sc, report, exit_code)
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        cfg = config_from_args(args)
        return run(cfg)
    except INPUT_ERRORS as exc:
        logger.debug("input error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ArityBoundInsufficient as exc:
        print(f"error: {exc} (raise --arity or drop --strict)", file=sys.stderr)
        return EXIT_VERDICT_FALSE
    except InvariantViolation as exc:
        logger.error("invariant violation", exc_info=args.verbose)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT_VIOLATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
