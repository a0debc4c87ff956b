"""Numeric period cross-checks, mu-equation checks and rational fits on the Legendre family."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any

from mpmath import mp

from pf_audit.exceptions import ValidationError
from pf_audit.models import GridSpec, RunConfig
from pf_audit.numeric.fitting import rational_fit
from pf_audit.numeric.legendre import (
    DEFAULT_CLEARANCE,
    LegendreFiber,
    format_complex,
    get_chain,
    integrate_chain,
    period_full,
    to_mp,
)
from pf_audit.numeric.normal_functions import (
    DEFAULT_STEP,
    DEFAULT_TOLERANCE,
    mu_equation_check,
)
from pf_audit.oracles import LegendreOracle

from .base import AuditCommand, CommandContext, compute_family_operator, operator_summary

logger = logging.getLogger(__name__)

DEFAULT_CHAINS = ("cycle-a", "half-period", "moving-torsion", "section-x2", "empty")
PERIOD_GRID = GridSpec(Fraction(1, 10), Fraction(17, 20), 10)
TORSION_GRID = GridSpec(Fraction(2, 5), Fraction(3, 5), 3)
SECTION_GRID = GridSpec(Fraction(2, 5), Fraction(3, 5), 6)
CONTROL_GRID = GridSpec(Fraction(0), Fraction(4), 20)
CONTROL_DEGREES = (1, 1)
PERIOD_TOLERANCE = 1e-9
CONTROL_THRESHOLD = 1e-2


def period_table(points: tuple[Fraction, ...]) -> dict[str, Any]:
    """period_full against pi * 2F1(1/2,1/2;1;t), and the half-period split, per point."""
    rows = []
    worst = mp.mpf(0)
    for t in points:
        t_mp = to_mp(t)
        a = period_full(t, "a")
        b = period_full(t, "b")
        reference = mp.pi * mp.hyp2f1(0.5, 0.5, 1, t_mp)
        half = integrate_chain(get_chain("half-period"), LegendreFiber(t)).value
        errors = [
            abs(a - reference),
            abs(abs(mp.re(half)) - abs(a)),
            abs(abs(mp.im(half)) - abs(b)),
        ]
        worst = max([worst, *errors])
        rows.append(
            {
                "t": str(t),
                "cycle_a": format_complex(a, 15),
                "cycle_b": format_complex(b, 15),
                "reference": mp.nstr(reference, 15),
                "abs_error": mp.nstr(errors[0], 5),
                "half_period": format_complex(half, 15),
                "half_period_split_error": mp.nstr(max(errors[1:]), 5),
            }
        )
    return {
        "points": rows,
        "tolerance": PERIOD_TOLERANCE,
        "passed": bool(worst < PERIOD_TOLERANCE),
    }


def control_fit(points: tuple[Fraction, ...]) -> dict[str, Any]:
    """exp(s) must not pass as a rational function of low degree."""
    values = [mp.exp(to_mp(s)) for s in points]
    fit = rational_fit(points, values, *CONTROL_DEGREES)
    return {
        "function": "exp(s)",
        "grid": [str(s) for s in points],
        "degrees": list(CONTROL_DEGREES),
        "residual": mp.nstr(fit.residual, 5),
        "threshold": CONTROL_THRESHOLD,
        "rejected": bool(fit.residual > CONTROL_THRESHOLD),
    }


class NumericCommand(AuditCommand):
    name = "numeric"

    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        result = compute_family_operator(config)
        family, operator = result.family, result.operator
        if not LegendreOracle().matches(family):
            raise ValidationError(
                f"Numeric checks run on the Legendre family only; '{family.name}' is not it."
            )
        chains = [context.chain(name) for name in (config.chains or DEFAULT_CHAINS)]

        with mp.workdps(config.digits):
            periods = period_table(PERIOD_GRID.points())
            reports = []
            for chain in chains:
                default = SECTION_GRID if chain.cover is not None else TORSION_GRID
                grid = (config.grid or default).points()
                reports.append(
                    mu_equation_check(operator, chain, grid, digits=config.digits)
                )
            control = control_fit(CONTROL_GRID.points())
            chain_docs = [r.to_dict() for r in reports]

        all_passed = periods["passed"] and control["rejected"] and all(r.passed for r in reports)
        logger.info(
            "numeric_done family=%s chains=%d all_passed=%s", family.name, len(chains), all_passed
        )
        return {
            "family": family.to_dict(),
            "operator": operator_summary(operator),
            "precision": {
                "digits": config.digits,
                "clearance": DEFAULT_CLEARANCE,
                "step": str(DEFAULT_STEP),
                "tolerance": DEFAULT_TOLERANCE,
            },
            "periods": periods,
            "chains": chain_docs,
            "control_fit": control,
            "all_passed": all_passed,
        }
