"""
cohomology command: Betti numbers and representative cocycles.
"""

import logging

from src.services.chevalley import ce_complex, cohomology, euler_characteristic, retract_data, weighted_betti
from src.services.lie_model import is_nilpotent
from src.services.report_service import Report
from src.utils.errors import EXIT_OK
from src.utils.rational_utils import format_rational
from views.common import RunConfig, describe_input, resolve_algebra

logger = logging.getLogger(__name__)


def _monomial_label(names, monomial) -> str:
    if not monomial:
        return "1"
    return "^".join(f"{names[i]}*" for i in monomial)


def cmd_cohomology(cfg: RunConfig) -> tuple[Report, int]:
    """
    Betti table, representatives and, with --by-weight, the weight refinement.

    Returns:
        (report, exit code)
    """
    sc = resolve_algebra(cfg)
    cx = ce_complex(sc)
    coh = cohomology(cx)
    retract_data(cx, coh)

    names = sc.basis_names
    representatives = {
        str(split.degree): [
            {_monomial_label(names, cx.bases[split.degree][t]): format_rational(c) for t, c in sorted(vector.items())}
            for vector in split.representatives
        ]
        for split in coh.degrees
    }

    betti = coh.betti
    result = {
        "betti": betti,
        "euler_characteristic": euler_characteristic(coh),
        "representatives": representatives,
    }

    by_weight = None
    if cfg.by_weight and sc.weights is not None:
        by_weight = weighted_betti(coh)
        result["weighted_betti"] = {
            str(k): {str(w): n for w, n in row.items()} for k, row in by_weight.items()
        }

    checks = {"delta_squared_zero": True, "retract_side_conditions": True}
    if sc.dim > 0:
        checks["euler_characteristic_zero"] = euler_characteristic(coh) == 0
    if is_nilpotent(sc):
        checks["poincare_duality"] = betti == betti[::-1]

    table = []
    for k, b in enumerate(betti):
        row = {"degree": k, "betti": b}
        if by_weight is not None:
            row["by_weight"] = {str(w): n for w, n in by_weight[k].items()}
        table.append(row)

    report = Report(
        command=cfg.command_name,
        input=describe_input(cfg, sc),
        result=result,
        invariant_checks=checks,
        table=table,
    )
    return report, EXIT_OK
