"""Truncated exact series germs in a local coordinate."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from sympy.polys.domains import QQ

from pf_audit.algebra.rational import BigRational, format_rational, to_rational
from pf_audit.exceptions import AlgebraError


@dataclass(frozen=True)
class LocalCoordinate:
    """s = t - center, or s = 1/t when ``center`` is None."""

    center: BigRational | None = QQ.zero

    @classmethod
    def at(cls, center: Any) -> LocalCoordinate:
        return cls(to_rational(center))

    @classmethod
    def infinity(cls) -> LocalCoordinate:
        return cls(None)

    @property
    def at_infinity(self) -> bool:
        return self.center is None

    def describe(self, parameter: str = "t") -> str:
        if self.center is None:
            return f"1/{parameter}"
        if not self.center:
            return parameter
        if self.center < 0:
            return f"{parameter} + {format_rational(-self.center)}"
        return f"{parameter} - {format_rational(self.center)}"

    def location(self) -> str:
        return "infinity" if self.center is None else format_rational(self.center)


def _integer_gap(a: BigRational, b: BigRational) -> int:
    gap = a - b
    if QQ.denom(gap) != 1:
        raise AlgebraError("Series exponents differ by a non-integer.")
    return int(QQ.numer(gap))


@dataclass(frozen=True)
class PeriodSeries:
    """s^exponent * sum_{k=0}^{N} c_k s^k, exact to the stated truncation N."""

    coordinate: LocalCoordinate
    exponent: BigRational
    coefficients: tuple[BigRational, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise AlgebraError("A series needs at least one coefficient.")
        object.__setattr__(self, "exponent", to_rational(self.exponent))
        coefficients = tuple(to_rational(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def from_coefficients(
        cls,
        coefficients: Sequence[Any],
        exponent: Any = 0,
        coordinate: LocalCoordinate | None = None,
    ) -> PeriodSeries:
        return cls(coordinate or LocalCoordinate(), to_rational(exponent), tuple(coefficients))

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @property
    def last_exponent(self) -> BigRational:
        return self.exponent + self.truncation

    def coefficient_at(self, exponent: Any) -> BigRational:
        k = _integer_gap(to_rational(exponent), self.exponent)
        if k < 0:
            return QQ.zero
        if k > self.truncation:
            raise AlgebraError("Coefficient requested beyond the truncation.")
        return self.coefficients[k]

    def normalized(self) -> PeriodSeries:
        """Strip leading zeros so that c_0 != 0; the zero series is returned unchanged."""
        for k, c in enumerate(self.coefficients):
            if c:
                if k == 0:
                    return self
                return PeriodSeries(self.coordinate, self.exponent + k, self.coefficients[k:])
        return self

    def first_nonzero_exponent(self) -> BigRational | None:
        for k, c in enumerate(self.coefficients):
            if c:
                return self.exponent + k
        return None

    def _check_coordinate(self, other: PeriodSeries) -> None:
        if other.coordinate != self.coordinate:
            raise AlgebraError("Series live in different local coordinates.")

    def __add__(self, other: PeriodSeries) -> PeriodSeries:
        self._check_coordinate(other)
        _integer_gap(self.exponent, other.exponent)
        start = min(self.exponent, other.exponent)
        end = min(self.last_exponent, other.last_exponent)
        count = _integer_gap(end, start) + 1
        if count <= 0:
            raise AlgebraError("Series share no known coefficients.")
        coeffs = []
        for k in range(count):
            e = start + k
            coeffs.append(self.coefficient_at(e) + other.coefficient_at(e))
        return PeriodSeries(self.coordinate, start, tuple(coeffs))

    def __mul__(self, other: PeriodSeries) -> PeriodSeries:
        self._check_coordinate(other)
        n = min(self.truncation, other.truncation)
        coeffs = []
        for k in range(n + 1):
            acc = QQ.zero
            for i in range(k + 1):
                acc += self.coefficients[i] * other.coefficients[k - i]
            coeffs.append(acc)
        return PeriodSeries(self.coordinate, self.exponent + other.exponent, tuple(coeffs))

    def scaled(self, factor: Any) -> PeriodSeries:
        factor = to_rational(factor)
        coefficients = tuple(factor * c for c in self.coefficients)
        return PeriodSeries(self.coordinate, self.exponent, coefficients)

    def shifted(self, power: Any) -> PeriodSeries:
        """Multiply by s^power."""
        return PeriodSeries(self.coordinate, self.exponent + to_rational(power), self.coefficients)

    def to_dict(self, preview: int = 8) -> dict[str, Any]:
        return {
            "coordinate": self.coordinate.describe(),
            "location": self.coordinate.location(),
            "exponent": format_rational(self.exponent),
            "truncation": self.truncation,
            "leading_coefficients": [format_rational(c) for c in self.coefficients[:preview]],
        }
