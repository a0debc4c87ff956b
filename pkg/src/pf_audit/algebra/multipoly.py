"""Homogeneous polynomials in x_0..x_n with coefficients in QQ(t)."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any

from sympy.polys.rings import PolyElement, PolyRing

from pf_audit.algebra.rational import ParameterField, ParamRat, join_signed, parameter_field
from pf_audit.exceptions import AlgebraError

Monomial = tuple[int, ...]


def monomial_key(monomial: Monomial) -> tuple[int, Monomial]:
    """Graded lexicographic key with x_n > ... > x_0."""
    return sum(monomial), tuple(reversed(monomial))


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree ``degree``, increasing in graded-lex order."""
    if nvars < 1:
        raise AlgebraError("At least one variable is required.")
    if degree < 0:
        return []
    monomials = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for index in combo:
            exps[index] += 1
        monomials.append(tuple(exps))
    monomials.sort(key=monomial_key)
    return monomials


def add_monomials(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class PolynomialSpace:
    """Ring QQ(t)[x_0..x_n] for fixed variable and parameter names."""

    def __init__(self, variables: Sequence[str], parameter: str) -> None:
        if not variables:
            raise AlgebraError("At least one variable is required.")
        if len(set(variables)) != len(variables) or parameter in variables:
            raise AlgebraError("Variable and parameter names must be distinct.")
        self.variables = tuple(variables)
        self.parameter = parameter
        self.scalars: ParameterField = parameter_field(parameter)
        self.ring: PolyRing = PolyRing(self.variables, self.scalars.domain)
        self.nvars = len(self.variables)

    def __repr__(self) -> str:
        return f"PolynomialSpace({list(self.variables)!r}, {self.parameter!r})"

    def from_terms(self, terms: Mapping[Monomial, Any]) -> PolyElement:
        clean = {m: self.scalars.convert(c) for m, c in terms.items() if c}
        return self.ring.from_dict(clean) if clean else self.ring.zero

    def monomial(self, exponents: Monomial, coeff: Any = 1) -> PolyElement:
        return self.from_terms({tuple(exponents): coeff})

    def constant(self, value: Any) -> PolyElement:
        return self.monomial((0,) * self.nvars, value)

    def param_derivative(self, poly: PolyElement) -> PolyElement:
        """Coefficient-wise d/dt."""
        terms = {}
        for monom, coeff in poly.items():
            derived = self.scalars.derivative(coeff)
            if derived:
                terms[monom] = derived
        return self.ring.from_dict(terms) if terms else self.ring.zero

    def format(self, poly: PolyElement) -> str:
        if not poly:
            return "0"
        pieces = [self._format_term(monom, coeff) for monom, coeff in poly.terms()]
        return join_signed(pieces)

    def _format_term(self, monom: Monomial, coeff: ParamRat) -> tuple[bool, str]:
        factors = []
        for name, exp in zip(self.variables, monom):
            if exp == 1:
                factors.append(name)
            elif exp > 1:
                factors.append(f"{name}^{exp}")
        mono = "*".join(factors)
        numer, denom = self.scalars.canonical_parts(coeff)
        if denom == 1 and len(numer) == 1:
            negative = numer.LC < 0
            text = self.scalars.format(-coeff if negative else coeff)
        else:
            negative = False
            text = f"({self.scalars.format(coeff)})"
        if not mono:
            return negative, text
        if text == "1":
            return negative, mono
        return negative, f"{text}*{mono}"


@lru_cache(maxsize=None)
def polynomial_space(variables: tuple[str, ...], parameter: str) -> PolynomialSpace:
    return PolynomialSpace(variables, parameter)


@dataclass(frozen=True)
class MultiPoly:
    """A homogeneous polynomial with its declared degree.

    The zero polynomial is homogeneous of every degree and keeps the declared one.
    """

    space: PolynomialSpace
    poly: PolyElement
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise AlgebraError(f"Negative degree {self.degree} for a homogeneous polynomial.")
        for monom in self.poly.keys():
            if sum(monom) != self.degree:
                raise AlgebraError(
                    f"Term of degree {sum(monom)} in a polynomial declared of degree {self.degree}."
                )

    @classmethod
    def zero(cls, space: PolynomialSpace, degree: int) -> MultiPoly:
        return cls(space, space.ring.zero, degree)

    @property
    def is_zero(self) -> bool:
        return not self.poly

    @property
    def nvars(self) -> int:
        return self.space.nvars

    def terms(self) -> list[tuple[Monomial, ParamRat]]:
        return list(self.poly.terms())

    def __add__(self, other: MultiPoly) -> MultiPoly:
        self._check_same_degree(other)
        return MultiPoly(self.space, self.poly + other.poly, self.degree)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        self._check_same_degree(other)
        return MultiPoly(self.space, self.poly - other.poly, self.degree)

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.space, -self.poly, self.degree)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        return MultiPoly(self.space, self.poly * other.poly, self.degree + other.degree)

    def scaled(self, factor: Any) -> MultiPoly:
        return MultiPoly(self.space, self.poly * self.space.scalars.convert(factor), self.degree)

    def partial(self, index: int) -> MultiPoly:
        return MultiPoly(self.space, self.poly.diff(index), max(self.degree - 1, 0))

    def param_derivative(self) -> MultiPoly:
        return MultiPoly(self.space, self.space.param_derivative(self.poly), self.degree)

    def to_string(self) -> str:
        return self.space.format(self.poly)

    def _check_same_degree(self, other: MultiPoly) -> None:
        if other.degree != self.degree:
            raise AlgebraError(
                f"Cannot add polynomials of degrees {self.degree} and {other.degree}."
            )
