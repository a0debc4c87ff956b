"""Independent period series and exact annihilation checks.

Two closed families of exact series serve as ground truth: the constant-term
series of the Dwork family sum x_i^m - t * prod x_i (m = n + 1) and the
Gauss hypergeometric series. Both are produced without touching the
Griffiths-Dwork machinery, so agreement with a computed operator is a genuine
cross-check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Any

from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import ring

from pf_audit.algebra.rational import BigRational, format_rational, to_rational
from pf_audit.exceptions import ValidationError, VerificationError
from pf_audit.operators.diffop import DiffOperator
from pf_audit.operators.local import apply_to_series_raw
from pf_audit.operators.series import LocalCoordinate, PeriodSeries

logger = logging.getLogger(__name__)

DEFAULT_TERMS = 30
# Direct multinomial expansion is cross-checked against the factorial formula up to here.
BRUTE_FORCE_LIMIT = 6


@dataclass(frozen=True)
class DworkSpec:
    n: int
    m: int
    terms: int = DEFAULT_TERMS

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"Dwork family needs n >= 1, received {self.n}.")
        if self.m != self.n + 1:
            raise ValidationError(
                f"Dwork family requires m = n + 1, received n={self.n}, m={self.m}."
            )
        if self.terms < 0:
            raise ValidationError(f"Field 'terms' must be non-negative, received {self.terms}.")


def dwork_coefficient(n: int, k: int) -> int:
    """((n+1)k)! / (k!)^(n+1)."""
    return factorial((n + 1) * k) // factorial(k) ** (n + 1)


@lru_cache(maxsize=None)
def dwork_coefficient_expanded(n: int, m: int, k: int) -> int:
    """Coefficient of (x_0...x_n)^(mk) in (sum x_i^m)^((n+1)k), by direct expansion."""
    names = ",".join(f"x{i}" for i in range(n + 1))
    _, *gens = ring(names, ZZ)
    base = sum((g**m for g in gens[1:]), gens[0] ** m)
    power = base ** ((n + 1) * k)
    return int(power.get((m * k,) * (n + 1), 0))


def dwork_period_series(spec: DworkSpec) -> PeriodSeries:
    """Constant-term period series in z, cross-checked against direct expansion for small k."""
    coefficients = [dwork_coefficient(spec.n, k) for k in range(spec.terms + 1)]
    for k in range(min(BRUTE_FORCE_LIMIT, spec.terms) + 1):
        expanded = dwork_coefficient_expanded(spec.n, spec.m, k)
        if expanded != coefficients[k]:
            raise VerificationError(
                f"Multinomial oracle disagreement at n={spec.n}, k={k}: "
                f"{expanded} != {coefficients[k]}."
            )
    return PeriodSeries.from_coefficients(coefficients)


def _is_nonpositive_integer(value: BigRational) -> bool:
    return QQ.denom(value) == 1 and value <= 0


def hypergeometric_series(a: Any, b: Any, c: Any, terms: int = DEFAULT_TERMS) -> PeriodSeries:
    """2F1(a, b; c; t) with coefficients (a)_k (b)_k / ((c)_k k!)."""
    a, b, c = to_rational(a), to_rational(b), to_rational(c)
    if _is_nonpositive_integer(c):
        raise ValidationError(
            f"Lower parameter c = {format_rational(c)} is a nonpositive integer."
        )
    coefficients = [QQ.one]
    for k in range(terms):
        coefficients.append(coefficients[-1] * (a + k) * (b + k) / ((c + k) * (k + 1)))
    return PeriodSeries.from_coefficients(coefficients)


def substitute_power(series: PeriodSeries, exponent: int, shift: Any = 0) -> PeriodSeries:
    """Substitute z = t^exponent and multiply by t^shift.

    A negative exponent moves the germ to t = infinity, written in s = 1/t.
    """
    if exponent == 0:
        raise ValidationError("Substitution exponent must be nonzero.")
    if series.coordinate != LocalCoordinate():
        raise ValidationError("Power substitution expects a series centred at z = 0.")
    shift = to_rational(shift)
    scale = abs(exponent)
    spread = [QQ.zero] * (scale * series.truncation + 1)
    for k, c in enumerate(series.coefficients):
        spread[scale * k] = c
    if exponent > 0:
        return PeriodSeries(LocalCoordinate(), series.exponent * scale + shift, tuple(spread))
    return PeriodSeries(
        LocalCoordinate.infinity(), series.exponent * scale - shift, tuple(spread)
    )


@dataclass(frozen=True)
class AnnihilationReport:
    status: str
    truncation: int
    verified_through: BigRational
    first_nonzero_exponent: BigRational | None
    first_nonzero_index: int | None

    @property
    def annihilated(self) -> bool:
        return self.status == "zero"

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "truncation": self.truncation,
            "verified_through_exponent": format_rational(self.verified_through),
            "first_nonzero_exponent": (
                None
                if self.first_nonzero_exponent is None
                else format_rational(self.first_nonzero_exponent)
            ),
            "first_nonzero_index": self.first_nonzero_index,
        }


def annihilation_check(op: DiffOperator, series: PeriodSeries) -> AnnihilationReport:
    """Exact test that D(series) vanishes through every known coefficient."""
    base, values = apply_to_series_raw(op, series)
    truncation = len(values) - 1
    first = next((k for k, v in enumerate(values) if v), None)
    if first is None:
        return AnnihilationReport("zero", truncation, base + truncation, None, None)
    logger.debug(
        "annihilation_failure coordinate=%s index=%d", series.coordinate.location(), first
    )
    # Slots before the first nonzero one were checked successfully.
    return AnnihilationReport("nonzero", truncation, base + first - 1, base + first, first)


@dataclass(frozen=True)
class PeriodShift:
    exponent: int
    shift: BigRational
    series: PeriodSeries
    report: AnnihilationReport

    def to_dict(self) -> dict[str, Any]:
        return {
            "substitution_exponent": self.exponent,
            "shift": format_rational(self.shift),
            "series": self.series.to_dict(),
            "annihilation": self.report.to_dict(),
        }


def find_period_shift(
    op: DiffOperator, series: PeriodSeries, exponent: int, window: int
) -> PeriodShift | None:
    """Scan shifts 0, -1, ..., -window for one making the substituted series a solution."""
    for step in range(window + 1):
        shift = QQ(-step)
        candidate = substitute_power(series, exponent, shift)
        report = annihilation_check(op, candidate)
        if report.annihilated:
            logger.info("period_shift_found exponent=%d shift=%d", exponent, -step)
            return PeriodShift(exponent, shift, candidate, report)
    return None
