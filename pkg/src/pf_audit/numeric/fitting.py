"""Linearized least-squares fits of rational functions to complex samples."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any

from mpmath import mp

from pf_audit.exceptions import FitError
from pf_audit.numeric.legendre import format_complex, to_mp

logger = logging.getLogger(__name__)

MAX_DENOMINATOR = 64


@dataclass(frozen=True)
class NearestRational:
    value: Any
    rational: Fraction
    distance: Any

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": format_complex(self.value, 15),
            "rational": str(self.rational),
            "distance": mp.nstr(self.distance, 5),
        }


def nearest_rational(value: Any, max_denominator: int = MAX_DENOMINATOR) -> NearestRational:
    """Closest p/q with q <= max_denominator to the real part; distance includes Im."""
    value = mp.mpc(value)
    rational = Fraction(mp.nstr(value.real, mp.dps)).limit_denominator(max_denominator)
    return NearestRational(value, rational, abs(value - to_mp(rational)))


@dataclass(frozen=True)
class RationalFitResult:
    """g ~ (p_0 + ... + p_a s^a) / (q_0 + ... + q_{b-1} s^{b-1} + s^b)."""

    numerator_degree: int
    denominator_degree: int
    numerator: tuple[Any, ...]
    denominator: tuple[Any, ...]
    residual: Any
    max_abs_error: Any
    points: int

    def evaluate(self, s: Any) -> Any:
        return mp.polyval(list(reversed(self.numerator)), s) / mp.polyval(
            list(reversed(self.denominator)), s
        )

    def nearest_rationals(self, max_denominator: int = MAX_DENOMINATOR) -> list[NearestRational]:
        # The monic leading denominator coefficient is not a fitted unknown.
        fitted = list(self.numerator) + list(self.denominator[:-1])
        return [nearest_rational(c, max_denominator) for c in fitted]

    def rational_coefficients(
        self, tolerance: float, max_denominator: int = MAX_DENOMINATOR
    ) -> bool:
        return all(r.distance < tolerance for r in self.nearest_rationals(max_denominator))

    def to_dict(self) -> dict[str, Any]:
        return {
            "numerator_degree": self.numerator_degree,
            "denominator_degree": self.denominator_degree,
            "numerator": [format_complex(c, 15) for c in self.numerator],
            "denominator": [format_complex(c, 15) for c in self.denominator],
            "residual": mp.nstr(self.residual, 5),
            "max_abs_error": mp.nstr(self.max_abs_error, 5),
            "points": self.points,
            "nearest_rationals": [r.to_dict() for r in self.nearest_rationals()],
        }


def _svd_solve(matrix: Any, rhs: Any) -> tuple[Any, Any]:
    """Least squares through the thin SVD, with the rank check on its spectrum."""
    u, spectrum, v = mp.svd_r(matrix)
    singular = [spectrum[i] for i in range(spectrum.rows)]
    largest = max(singular)
    smallest = min(singular)
    threshold = largest * mp.mpf(10) ** (-(mp.dps // 2))
    if smallest <= threshold:
        raise FitError(
            f"Rank-deficient fit: smallest singular value {mp.nstr(smallest, 5)} against "
            f"largest {mp.nstr(largest, 5)}."
        )
    projected = u.T * rhs
    scaled = mp.matrix([projected[i] / singular[i] for i in range(len(singular))])
    solution = v.T * scaled
    return solution, mp.norm(matrix * solution - rhs)


def rational_fit(
    points: Sequence[Any],
    values: Sequence[Any],
    numerator_degree: int,
    denominator_degree: int,
) -> RationalFitResult:
    """Solve num(s) - g(s) * den(s) = 0 in least squares with den monic.

    The complex system is realified as [[Re A, -Im A], [Im A, Re A]].
    """
    if numerator_degree < 0 or denominator_degree < 0:
        raise FitError("Degree bounds must be non-negative.")
    if len(points) != len(values):
        raise FitError(f"{len(points)} sample points but {len(values)} values.")
    unknowns = numerator_degree + 1 + denominator_degree
    needed = numerator_degree + denominator_degree + 2
    if len(points) < needed:
        raise FitError(
            f"Rational fit of degrees ({numerator_degree}, {denominator_degree}) needs at least "
            f"{needed} points, received {len(points)}."
        )
    ss = [mp.mpc(to_mp(s)) for s in points]
    gs = [mp.mpc(g) for g in values]
    rows = len(ss)
    real = mp.zeros(2 * rows, 2 * unknowns)
    rhs = mp.zeros(2 * rows, 1)
    for i, (s, g) in enumerate(zip(ss, gs)):
        row = [s**k for k in range(numerator_degree + 1)]
        row += [-g * s**k for k in range(denominator_degree)]
        target = g * s**denominator_degree
        for j, entry in enumerate(row):
            real[i, j] = entry.real
            real[i, j + unknowns] = -entry.imag
            real[i + rows, j] = entry.imag
            real[i + rows, j + unknowns] = entry.real
        rhs[i] = target.real
        rhs[i + rows] = target.imag

    solution, residual = _svd_solve(real, rhs)
    coeffs = [mp.mpc(solution[j], solution[j + unknowns]) for j in range(unknowns)]
    numerator = tuple(coeffs[: numerator_degree + 1])
    denominator = tuple(coeffs[numerator_degree + 1 :]) + (mp.mpc(1),)
    result = RationalFitResult(
        numerator_degree=numerator_degree,
        denominator_degree=denominator_degree,
        numerator=numerator,
        denominator=denominator,
        residual=residual,
        max_abs_error=mp.mpf(0),
        points=rows,
    )
    max_error = max(abs(result.evaluate(s) - g) for s, g in zip(ss, gs))
    logger.debug(
        "rational_fit degrees=(%d,%d) points=%d residual=%s",
        numerator_degree,
        denominator_degree,
        rows,
        mp.nstr(residual, 5),
    )
    return replace(result, max_abs_error=max_error)
