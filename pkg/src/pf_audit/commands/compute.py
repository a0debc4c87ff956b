"""Picard-Fuchs operator, certificate and checks for one family."""

from __future__ import annotations

import logging
from typing import Any

from pf_audit.exceptions import VerificationError
from pf_audit.family_file import compare_operators, load_operator_file
from pf_audit.forms.certificate import verify_certificate
from pf_audit.models import RunConfig
from pf_audit.operators.diffop import symbol
from pf_audit.operators.local import singular_points
from pf_audit.oracles import ORACLE_CATALOGUE_VERSION

from .base import AuditCommand, CommandContext, compute_family_operator, operator_summary

logger = logging.getLogger(__name__)


class ComputeCommand(AuditCommand):
    name = "compute"

    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        result = compute_family_operator(config)
        family, operator, certificate = result.family, result.operator, result.certificate
        scalars = family.scalars

        check = verify_certificate(operator, family, certificate, config.chart)
        oracle = context.find_oracle(family)
        series_check = None if oracle is None else oracle.check(operator, family, config.terms)

        comparison = None
        if config.compare_operator_path:
            reference = load_operator_file(config.compare_operator_path)
            comparison = compare_operators(operator, reference).to_dict()

        document: dict[str, Any] = {
            "family": family.to_dict(),
            "operator": operator_summary(operator),
            "symbol": symbol(operator, operator.order).to_dict(scalars),
            "singular_locus": singular_points(operator).to_dict(),
            "certificate": certificate.to_list(),
            "checks": {
                "certificate_verified": check.verified,
                "certificate_chart": check.chart,
                "certificate_residual": check.to_dict(family.space)["residual"],
                "series_annihilation": (
                    {"status": "no-oracle"} if series_check is None else series_check.to_dict()
                ),
            },
            "comparison": comparison,
            "oracle_catalogue_version": ORACLE_CATALOGUE_VERSION,
        }

        if not check.verified:
            raise VerificationError(
                f"Certificate for '{family.name}' fails in chart x{check.chart} = 1."
            )
        if series_check is not None and not series_check.report.annihilated:
            raise VerificationError(
                f"Operator for '{family.name}' does not annihilate the {series_check.oracle} "
                f"series; first nonzero coefficient at index "
                f"{series_check.report.first_nonzero_index}."
            )
        logger.info(
            "compute_done family=%s order=%d oracle=%s",
            family.name,
            operator.order,
            None if oracle is None else oracle.name,
        )
        return document
