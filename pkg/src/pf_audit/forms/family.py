"""One-parameter families of projective hypersurfaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from sympy.polys.rings import PolyElement

from pf_audit.algebra.multipoly import MultiPoly, PolynomialSpace
from pf_audit.algebra.parser import parse_polynomial
from pf_audit.algebra.rational import ParameterField
from pf_audit.exceptions import ValidationError


@dataclass(frozen=True)
class FamilySpec:
    """The family f_t = 0 in P^n with f homogeneous of degree m over QQ(t).

    ``constant`` marks families that deliberately do not depend on t.
    """

    name: str
    ambient_dim: int
    variables: tuple[str, ...]
    parameter: str
    polynomial: MultiPoly
    constant: bool = False
    _param_derivative: MultiPoly = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.ambient_dim < 1:
            raise ValidationError("Field 'ambient_dim' must be at least 1.")
        if len(self.variables) != self.ambient_dim + 1:
            raise ValidationError(
                f"Expected {self.ambient_dim + 1} variables for ambient dimension "
                f"{self.ambient_dim}, received {len(self.variables)}."
            )
        if self.polynomial.space.variables != self.variables:
            raise ValidationError("Polynomial variables do not match the declared variables.")
        if self.polynomial.is_zero:
            raise ValidationError("The defining polynomial is zero.")
        if self.polynomial.degree < 2:
            raise ValidationError(
                f"Defining polynomial must have degree at least 2, found {self.polynomial.degree}."
            )
        derivative = self.polynomial.param_derivative()
        if self.constant and not derivative.is_zero:
            raise ValidationError(f"Family '{self.name}' is flagged constant but depends on t.")
        if not self.constant and derivative.is_zero:
            raise ValidationError(
                f"Family '{self.name}' does not depend on '{self.parameter}'; "
                "flag it constant to proceed."
            )
        object.__setattr__(self, "_param_derivative", derivative)

    @classmethod
    def from_text(
        cls,
        name: str,
        variables: tuple[str, ...] | list[str],
        parameter: str,
        polynomial: str,
        constant: bool = False,
    ) -> FamilySpec:
        variables = tuple(variables)
        poly = parse_polynomial(polynomial, variables, parameter)
        return cls(name, len(variables) - 1, variables, parameter, poly, constant)

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def nvars(self) -> int:
        return self.ambient_dim + 1

    @property
    def degree(self) -> int:
        return self.polynomial.degree

    @property
    def space(self) -> PolynomialSpace:
        return self.polynomial.space

    @property
    def scalars(self) -> ParameterField:
        return self.polynomial.space.scalars

    @property
    def f(self) -> PolyElement:
        return self.polynomial.poly

    @property
    def f_t(self) -> PolyElement:
        """d f / d t."""
        return self._param_derivative.poly

    def numerator_degree(self, order: int) -> int:
        """Degree of P for which P * Omega / f^order is a well-defined n-form."""
        return order * self.degree - self.nvars

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "variables": list(self.variables),
            "parameter": self.parameter,
            "polynomial": self.polynomial.to_string(),
            "degree": self.degree,
            "constant": self.constant,
        }
