"""Series oracles for the families with a known closed-form period."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from pf_audit.forms.family import FamilySpec
from pf_audit.interfaces import PeriodOracle
from pf_audit.operators.diffop import DiffOperator
from pf_audit.periods import (
    AnnihilationReport,
    DworkSpec,
    annihilation_check,
    dwork_period_series,
    find_period_shift,
    hypergeometric_series,
    substitute_power,
)

logger = logging.getLogger(__name__)

# Bump when an oracle's recognised families or series change.
ORACLE_CATALOGUE_VERSION = "period-oracles-v1"


def _proportional(f: PolyElement, g: PolyElement) -> bool:
    """True iff f = c * g for a nonzero constant c."""
    if not f or not g or set(f.keys()) != set(g.keys()):
        return False
    monom = next(iter(g.keys()))
    ratio = f[monom] / g[monom]
    if ratio.numer.degree() > 0 or ratio.denom.degree() > 0:
        return False
    return f == g * f.ring.ground_new(ratio)


@dataclass(frozen=True)
class SeriesVerdict:
    oracle: str
    description: str
    report: AnnihilationReport
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "oracle": self.oracle,
            "series": self.description,
            **self.details,
            **self.report.to_dict(),
        }


class LegendreOracle:
    """y^2 = x(x-1)(x-t): the period of Omega/f is a multiple of 2F1(1/2, 1/2; 1; t)."""

    name = "legendre-2f1"

    def _template(self, family: FamilySpec) -> PolyElement:
        ring = family.space.ring
        x0, x1, x2 = ring.gens
        t = ring.ground_new(family.scalars.gen)
        return x1**2 * x2 - x0 * (x0 - x2) * (x0 - t * x2)

    def matches(self, family: FamilySpec) -> bool:
        if family.nvars != 3:
            return False
        return _proportional(family.f, self._template(family))

    def check(self, op: DiffOperator, family: FamilySpec, terms: int) -> SeriesVerdict:
        series = hypergeometric_series("1/2", "1/2", 1, terms)
        return SeriesVerdict(
            oracle=self.name,
            description="2F1(1/2,1/2;1;t) at t=0",
            report=annihilation_check(op, series),
        )


class DworkOracle:
    """sum x_i^m - t * prod x_i with m = n + 1: constant-term series in z = t^(-m)."""

    name = "dwork-constant-term"

    def _template(self, family: FamilySpec) -> PolyElement:
        ring = family.space.ring
        gens = ring.gens
        m = family.nvars
        t = ring.ground_new(family.scalars.gen)
        power_sum = sum((g**m for g in gens[1:]), gens[0] ** m)
        product = gens[0]
        for g in gens[1:]:
            product = product * g
        return power_sum - t * product

    def matches(self, family: FamilySpec) -> bool:
        if family.degree != family.nvars:
            return False
        return _proportional(family.f, self._template(family))

    def check(self, op: DiffOperator, family: FamilySpec, terms: int) -> SeriesVerdict:
        spec = DworkSpec(family.ambient_dim, family.degree, terms)
        series = dwork_period_series(spec)
        exponent = -family.degree
        found = find_period_shift(op, series, exponent, window=family.nvars)
        description = f"sum ((n+1)k)!/(k!)^(n+1) z^k, z = t^{exponent}, at t=infinity"
        if found is None:
            logger.warning(
                "period_shift_missing family=%s window=%d", family.name, family.nvars
            )
            report = annihilation_check(op, substitute_power(series, exponent, 0))
            return SeriesVerdict(self.name, description, report, {"shift": None})
        return SeriesVerdict(
            self.name,
            description,
            found.report,
            {"shift": int(QQ.numer(found.shift)), "substitution_exponent": exponent},
        )


ORACLE_CATALOGUE: tuple[PeriodOracle, ...] = (LegendreOracle(), DworkOracle())

