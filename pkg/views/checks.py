"""
check command: one-generated, pbw, littlewood and euler verdicts.
"""

import logging

from src.services import bar_pbw, generation, symfun, transfer
from src.services.report_service import Report
from src.utils.errors import EXIT_OK, EXIT_VERDICT_FALSE, InputError, InvariantViolation
from src.utils.rational_utils import format_rational
from views.common import RunConfig, describe_input, resolve_algebra

logger = logging.getLogger(__name__)

# Weights compared between span closure and the bar filtration by default
DEFAULT_FILTRATION_WEIGHT = 5

CHECKS = ("one-generated", "pbw", "littlewood", "euler")


def _exit_code(verdict: bool) -> int:
    return EXIT_OK if verdict else EXIT_VERDICT_FALSE


def check_one_generated(cfg: RunConfig) -> Report:
    sc = resolve_algebra(cfg)
    model = transfer.minimal_model(sc, arity_bound=cfg.arity)
    ma = model.structure
    report = generation.span_closure(ma, sc, strict=cfg.strict)

    result = generation.report_to_json(report)
    checks = {"stasheff_identities": True}

    # the bar side needs every operation up to the required arity
    if ma.weights is not None and report.bound_sufficient:
        max_weight = cfg.max_weight or DEFAULT_FILTRATION_WEIGHT
        rows = generation.bar_filtration_check(ma, max_weight)
        cokernel = report.cokernel_by_weight()
        agreement = {}
        for row in rows:
            from_closure = sum(per_weight.get(row.weight, 0) for per_weight in cokernel.values())
            from_bar = sum(row.length_one_classes.values())
            agreement[row.weight] = from_closure == from_bar
        result["bar_filtration"] = [
            {
                "weight": row.weight,
                "length_one_classes": {str(j): n for j, n in sorted(row.length_one_classes.items())},
                "ok": row.ok,
            }
            for row in rows
        ]
        checks["bar_filtration_agrees"] = all(agreement.values())
        if not checks["bar_filtration_agrees"]:
            bad = [w for w, ok in agreement.items() if not ok]
            raise InvariantViolation(f"Span closure and bar filtration disagree in weights {bad}")

    if not report.bound_sufficient:
        result["qualification"] = f"generated up to arity {report.arity_bound}"

    table = [
        {
            "degree": e.degree,
            "dim_h": e.dim_h,
            "dim_generated": e.dim_s,
            "cokernel_dim": len(e.cokernel),
        }
        for e in report.degrees
    ]
    return Report(cfg.command_name, describe_input(cfg, sc), result, checks, table, report.verdict)


def check_pbw(cfg: RunConfig) -> Report:
    sc = resolve_algebra(cfg)
    max_weight = cfg.max_weight or bar_pbw.DEFAULT_MAX_WEIGHT
    report = bar_pbw.pbw_check(sc, max_weight)

    rows = [
        {
            "weight": row.weight,
            "h0": row.h0,
            "sym": row.sym,
            "higher": {str(j): n for j, n in sorted(row.higher.items())},
            "ok": row.ok,
        }
        for row in report.rows
    ]
    result = {"verdict": report.verdict, "rows": rows}
    checks = {"bar_d_squared_zero": True}
    return Report(cfg.command_name, describe_input(cfg, sc), result, checks, rows, report.verdict)


def check_littlewood(cfg: RunConfig) -> Report:
    if cfg.vars is None:
        raise InputError("check littlewood needs --vars N")
    degree_bound = cfg.max_degree or symfun.DEFAULT_DEGREE_BOUND
    outcome = symfun.littlewood_check(cfg.vars, degree_bound)

    result = {
        "ok": outcome.ok,
        "lhs": symfun.format_polynomial(outcome.lhs),
        "rhs": symfun.format_polynomial(outcome.rhs),
        "self_conjugate_partitions": [str(p) for p in symfun.self_conjugate_partitions(degree_bound)],
    }
    if outcome.mismatch is not None:
        exps, lhs_coeff, rhs_coeff = outcome.mismatch
        result["first_mismatch"] = {
            "exponents": list(exps),
            "lhs": format_rational(lhs_coeff),
            "rhs": format_rational(rhs_coeff),
        }

    monomials = sorted(
        set(outcome.lhs.terms) | set(outcome.rhs.terms),
        key=lambda e: (sum(e), tuple(-x for x in e)),
    )
    table = [
        {
            "exponents": list(exps),
            "lhs": format_rational(outcome.lhs.terms.get(exps, 0)),
            "rhs": format_rational(outcome.rhs.terms.get(exps, 0)),
        }
        for exps in monomials
    ]
    checks = {"sign_exponents_integral": True}
    inputs = {"vars": cfg.vars, "max_degree": degree_bound}
    return Report(cfg.command_name, inputs, result, checks, table, outcome.ok)


def check_euler(cfg: RunConfig) -> Report:
    sc = resolve_algebra(cfg)
    outcome = symfun.graded_euler(sc)
    degrees = sorted({e[0] for e in outcome.cohomology_side.terms} | {e[0] for e in outcome.product_side.terms})
    table = [
        {
            "weight": w,
            "cohomology_side": format_rational(outcome.cohomology_side.terms.get((w,), 0)),
            "product_side": format_rational(outcome.product_side.terms.get((w,), 0)),
        }
        for w in degrees
    ]
    result = {
        "ok": outcome.ok,
        "cohomology_side": symfun.format_polynomial(outcome.cohomology_side, ["t"]),
        "product_side": symfun.format_polynomial(outcome.product_side, ["t"]),
    }
    checks = {"delta_squared_zero": True}
    return Report(cfg.command_name, describe_input(cfg, sc), result, checks, table, outcome.ok)


def cmd_check(cfg: RunConfig) -> tuple[Report, int]:
    """
    Run one named check.

    Returns:
        (report, 0 if the verdict is true else 1)
    """
    handlers = {
        "one-generated": check_one_generated,
        "pbw": check_pbw,
        "littlewood": check_littlewood,
        "euler": check_euler,
    }
    if cfg.check not in handlers:
        raise InputError(f"Unknown check '{cfg.check}'. Known: {', '.join(CHECKS)}")
    report = handlers[cfg.check](cfg)
    logger.info("%s verdict: %s", cfg.command_name, report.verdict)
    return report, _exit_code(bool(report.verdict))
