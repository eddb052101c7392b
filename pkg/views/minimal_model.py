"""
minimal-model command: transferred A-infinity operations on cohomology.
"""

from src.services import transfer
from src.services.report_service import Report
from src.utils.errors import EXIT_OK
from src.utils.rational_utils import format_rational
from views.common import RunConfig, describe_input, resolve_algebra


def _vector_label(ma, vector) -> str:
    parts = []
    for idx, c in sorted(vector.items()):
        coeff = format_rational(c)
        parts.append(f"{coeff}*{ma.labels[idx]}" if coeff != "1" else ma.labels[idx])
    return " + ".join(parts)


def cmd_minimal_model(cfg: RunConfig) -> tuple[Report, int]:
    """
    Operations m_2..m_J with the Stasheff identities verified.

    A failing identity raises StasheffViolation (exit code 3).

    Returns:
        (report, exit code)
    """
    sc = resolve_algebra(cfg)
    model = transfer.minimal_model(sc, arity_bound=cfg.arity)
    ma = model.structure

    h2_dim = len(ma.basis_in_degree(2))
    shuffle = {
        str(k): len(transfer.shuffle_defect(ma, k)) for k in range(2, ma.arity_bound + 1)
    }

    result = transfer.to_json_dict(ma)
    result["h2_component_ranks"] = {
        str(j): {"rank": r, "h2_dim": h2_dim}
        for j, r in transfer.h2_component_ranks(ma).items()
    }
    result["shuffle_defect_counts"] = shuffle
    result["summary"] = {
        key: ({str(k): v for k, v in value.items()} if isinstance(value, dict) else value)
        for key, value in transfer.euler_and_degree_report(ma).items()
    }

    checks = {
        "retract_side_conditions": True,
        "stasheff_identities": True,
        "degree_and_weight_bookkeeping": not transfer.bookkeeping_violations(ma),
    }

    table = [
        {
            "arity": k,
            "inputs": " (x) ".join(ma.labels[x] for x in inputs),
            "output": _vector_label(ma, ma.m(k, inputs)),
        }
        for k, op in sorted(ma.operations.items())
        for inputs in sorted(op)
    ]

    report = Report(
        command=cfg.command_name,
        input=describe_input(cfg, sc),
        result=result,
        invariant_checks=checks,
        table=table,
    )
    return report, EXIT_OK
