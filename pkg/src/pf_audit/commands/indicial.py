"""Local exponents and Frobenius bases at the singular points of the operator."""

from __future__ import annotations

import logging
from typing import Any

from sympy.polys.domains import QQ

from pf_audit.exceptions import LocalAnalysisError
from pf_audit.models import RunConfig
from pf_audit.operators.diffop import DiffOperator
from pf_audit.operators.local import frobenius_solutions, indicial_polynomial, singular_points
from pf_audit.operators.series import LocalCoordinate

from .base import AuditCommand, CommandContext, compute_family_operator, operator_summary

logger = logging.getLogger(__name__)


def local_report(op: DiffOperator, coordinate: LocalCoordinate, terms: int) -> dict[str, Any]:
    data = indicial_polynomial(op, coordinate)
    report: dict[str, Any] = data.to_dict(op.scalars.name)
    try:
        solutions = frobenius_solutions(op, coordinate, terms)
    except LocalAnalysisError as exc:
        logger.warning("frobenius_unavailable location=%s reason=%s", coordinate.location(), exc)
        report["frobenius"] = {"status": "unavailable", "reason": str(exc)}
        return report
    report["frobenius"] = {
        "status": "ok",
        "solution_count": len(solutions),
        "operator_order": op.order,
        "solutions": [s.to_dict() for s in solutions],
    }
    return report


class IndicialCommand(AuditCommand):
    name = "indicial"

    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        result = compute_family_operator(config)
        operator = result.operator
        locus = singular_points(operator)
        points = sorted(set(locus.rational_points) | {QQ.zero})
        coordinates = [LocalCoordinate.at(p) for p in points] + [LocalCoordinate.infinity()]
        return {
            "family": result.family.to_dict(),
            "operator": operator_summary(operator),
            "singular_locus": locus.to_dict(),
            "points": [local_report(operator, c, config.terms) for c in coordinates],
        }
