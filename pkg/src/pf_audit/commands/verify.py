"""Re-derive the certificate and check it in every affine chart."""

from __future__ import annotations

from typing import Any

from pf_audit.exceptions import VerificationError
from pf_audit.family_file import compare_operators, load_operator_file
from pf_audit.forms.certificate import verify_certificate
from pf_audit.models import RunConfig

from .base import AuditCommand, CommandContext, compute_family_operator, operator_summary


class VerifyCommand(AuditCommand):
    """Certificate identity per chart; a reference operator is run through the series oracle."""

    name = "verify"

    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        result = compute_family_operator(config)
        family, operator, certificate = result.family, result.operator, result.certificate
        charts = range(family.nvars) if config.chart is None else (config.chart,)
        checks = [verify_certificate(operator, family, certificate, c) for c in charts]

        reference: dict[str, Any] | None = None
        if config.compare_operator_path:
            ref_op = load_operator_file(config.compare_operator_path)
            oracle = context.find_oracle(family)
            reference = {
                "operator": operator_summary(ref_op),
                "comparison": compare_operators(operator, ref_op).verdict,
                "series_annihilation": (
                    {"status": "no-oracle"}
                    if oracle is None
                    else oracle.check(ref_op, family, config.terms).to_dict()
                ),
            }

        failed = [c.chart for c in checks if not c.verified]
        if failed:
            raise VerificationError(
                f"Certificate for '{family.name}' fails in charts "
                f"{', '.join(f'x{c} = 1' for c in failed)}."
            )
        return {
            "family": family.to_dict(),
            "operator": operator_summary(operator),
            "certificate_terms": len(certificate.terms),
            "charts": [c.to_dict(family.space) for c in checks],
            "certificate_verified": True,
            "reference_operator": reference,
        }
