"""Exact annihilation of the family's closed-form period series."""

from __future__ import annotations

from typing import Any

from pf_audit.exceptions import ValidationError, VerificationError
from pf_audit.models import RunConfig

from .base import AuditCommand, CommandContext, compute_family_operator, operator_summary


class SeriesCommand(AuditCommand):
    name = "series"

    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        result = compute_family_operator(config)
        family, operator = result.family, result.operator
        oracle = context.find_oracle(family)
        if oracle is None:
            available = ", ".join(o.name for o in context.oracles)
            raise ValidationError(
                f"No period oracle recognises family '{family.name}'. Available: {available}."
            )
        verdict = oracle.check(operator, family, config.terms)
        if not verdict.report.annihilated:
            raise VerificationError(
                f"Operator for '{family.name}' leaves a nonzero coefficient at index "
                f"{verdict.report.first_nonzero_index} of the {oracle.name} series."
            )
        return {
            "family": family.to_dict(),
            "operator": operator_summary(operator),
            "series_annihilation": verdict.to_dict(),
        }
