"""Linear differential operators in t with coefficients in QQ(t).

An operator is stored as coefficients a_0..a_r in one of two bases: ``"d"``
(sum a_j * d^j with d = d/dt) or ``"theta"`` (sum a_j * theta^j with
theta = t d/dt). Coefficients always stand to the left of the derivation.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from math import comb, gcd, lcm
from typing import Any

from sympy.functions.combinatorial.numbers import stirling
from sympy.polys.domains import QQ

from pf_audit.algebra.rational import (
    ParameterField,
    ParamRat,
    format_rational,
    join_signed,
    low_degree,
    poly_lcm,
)
from pf_audit.exceptions import AlgebraError

BASES = ("d", "theta")
_SYMBOLS = {"d": "D", "theta": "T"}


@dataclass(frozen=True)
class DiffOperator:
    scalars: ParameterField
    coefficients: tuple[ParamRat, ...]
    basis: str = "d"

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise AlgebraError(f"Unknown operator basis '{self.basis}'. Available: d, theta.")
        coeffs = [self.scalars.convert(c) for c in self.coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def zero(cls, scalars: ParameterField, basis: str = "d") -> DiffOperator:
        return cls(scalars, (), basis)

    @classmethod
    def derivation(cls, scalars: ParameterField, basis: str = "d") -> DiffOperator:
        """d (basis "d") or theta (basis "theta")."""
        return cls(scalars, (0, 1), basis)

    @classmethod
    def multiplication(cls, scalars: ParameterField, value: Any, basis: str = "d") -> DiffOperator:
        return cls(scalars, (value,), basis)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading_coefficient(self) -> ParamRat:
        if self.is_zero:
            return self.scalars.zero
        return self.coefficients[-1]

    def coefficient(self, j: int) -> ParamRat:
        if 0 <= j < len(self.coefficients):
            return self.coefficients[j]
        return self.scalars.zero

    # ── arithmetic ──

    def _check_compatible(self, other: DiffOperator) -> None:
        if other.basis != self.basis:
            raise AlgebraError(f"Operators in bases '{self.basis}' and '{other.basis}' do not mix.")
        if other.scalars.name != self.scalars.name:
            raise AlgebraError("Operators over different parameters do not mix.")

    def __add__(self, other: DiffOperator) -> DiffOperator:
        self._check_compatible(other)
        size = max(len(self.coefficients), len(other.coefficients))
        coeffs = [self.coefficient(j) + other.coefficient(j) for j in range(size)]
        return DiffOperator(self.scalars, tuple(coeffs), self.basis)

    def __neg__(self) -> DiffOperator:
        return DiffOperator(self.scalars, tuple(-c for c in self.coefficients), self.basis)

    def __sub__(self, other: DiffOperator) -> DiffOperator:
        return self + (-other)

    def __mul__(self, other: DiffOperator) -> DiffOperator:
        return op_multiply(self, other)

    def scaled(self, factor: Any) -> DiffOperator:
        """factor * self, multiplying on the left."""
        factor = self.scalars.convert(factor)
        return DiffOperator(self.scalars, tuple(factor * c for c in self.coefficients), self.basis)

    def in_basis(self, basis: str) -> DiffOperator:
        if basis == self.basis:
            return self
        return to_theta_form(self) if basis == "theta" else from_theta_form(self)

    def apply(self, value: ParamRat) -> ParamRat:
        """Apply to a rational function of t."""
        value = self.scalars.convert(value)
        delta = _derivation(self.scalars, self.basis)
        total = self.scalars.zero
        current = value
        for coeff in self.coefficients:
            if coeff and current:
                total += coeff * current
            current = delta(current)
        return total

    # ── normal form ──

    def normalized_with_factor(self) -> tuple[DiffOperator, ParamRat]:
        """(c * self, c) with polynomial coefficients of content 1.

        The sign makes the lowest-degree coefficient of the leading polynomial positive.
        """
        scalars = self.scalars
        if self.is_zero:
            return self, scalars.one
        ring = scalars.poly_ring
        common = poly_lcm((c.denom for c in self.coefficients if c), ring)
        polys = [
            c.numer * common.exquo(c.denom) if c else ring.zero for c in self.coefficients
        ]
        content = ring.zero
        for p in polys:
            content = content.gcd(p)
        polys = [p.exquo(content) for p in polys]

        denominators = [int(QQ.denom(c)) for p in polys for c in p.values()]
        numer_scale = lcm(*denominators)
        numerators = [int(QQ.numer(c * numer_scale)) for p in polys for c in p.values()]
        integer_content = gcd(*numerators)
        rational = QQ(numer_scale, integer_content)
        polys = [p * rational for p in polys]

        lead = polys[-1]
        if lead[(low_degree(lead),)] < 0:
            polys = [-p for p in polys]
            rational = -rational
        factor = scalars.ratio(common * rational, content)
        return DiffOperator(scalars, tuple(scalars.convert(p) for p in polys), self.basis), factor

    def normalized(self) -> DiffOperator:
        return self.normalized_with_factor()[0]

    def is_proportional_to(self, other: DiffOperator) -> bool:
        if self.basis != other.basis:
            other = other.in_basis(self.basis)
        return self.normalized().coefficients == other.normalized().coefficients

    # ── output ──

    def coefficient_strings(self) -> list[str]:
        return [self.scalars.format(c) for c in self.coefficients]

    def display(self) -> str:
        if self.is_zero:
            return "0"
        symbol = _SYMBOLS[self.basis]
        pieces: list[tuple[bool, str]] = []
        for j in range(self.order, -1, -1):
            coeff = self.coefficients[j]
            if not coeff:
                continue
            op_text = "" if j == 0 else symbol if j == 1 else f"{symbol}^{j}"
            constant = self.scalars.constant_value(coeff)
            if constant is not None:
                negative = constant < 0
                magnitude = abs(constant)
                coeff_text = "" if magnitude == 1 and op_text else format_rational(magnitude)
            else:
                negative = False
                coeff_text = f"({self.scalars.format(coeff)})"
            if coeff_text and op_text:
                body = f"{coeff_text}*{op_text}"
            else:
                body = coeff_text or op_text
            pieces.append((negative, body))
        return join_signed(pieces)

    def to_dict(self) -> dict[str, Any]:
        return {
            "basis": self.basis,
            "parameter": self.scalars.name,
            "order": self.order,
            "coefficients": self.coefficient_strings(),
            "display": self.display(),
        }


def _derivation(scalars: ParameterField, basis: str) -> Callable[[ParamRat], ParamRat]:
    if basis == "d":
        return scalars.derivative
    t = scalars.gen
    return lambda value: t * scalars.derivative(value)


def op_multiply(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """Composition a o b via X^i c = sum_l C(i, l) delta^l(c) X^(i-l)."""
    a._check_compatible(b)
    scalars = a.scalars
    if a.is_zero or b.is_zero:
        return DiffOperator.zero(scalars, a.basis)
    delta = _derivation(scalars, a.basis)
    result = [scalars.zero] * (a.order + b.order + 1)
    for j, bj in enumerate(b.coefficients):
        if not bj:
            continue
        derivatives = [bj]
        for _ in range(a.order):
            derivatives.append(delta(derivatives[-1]))
        for i, ai in enumerate(a.coefficients):
            if not ai:
                continue
            for l_ in range(i + 1):
                if derivatives[l_]:
                    result[i - l_ + j] += ai * comb(i, l_) * derivatives[l_]
    return DiffOperator(scalars, tuple(result), a.basis)


def to_theta_form(op: DiffOperator) -> DiffOperator:
    """Rewrite via t^j d^j = theta (theta - 1) ... (theta - j + 1)."""
    if op.basis == "theta":
        return op
    scalars = op.scalars
    t = scalars.gen
    coeffs = [scalars.zero] * len(op.coefficients)
    for j, aj in enumerate(op.coefficients):
        if not aj:
            continue
        scaled = aj / t**j
        for i in range(j + 1):
            s = int(stirling(j, i, kind=1, signed=True))
            if s:
                coeffs[i] += scaled * s
    return DiffOperator(scalars, tuple(coeffs), "theta")


def from_theta_form(op: DiffOperator) -> DiffOperator:
    """Rewrite via theta^i = sum_j S(i, j) t^j d^j."""
    if op.basis == "d":
        return op
    scalars = op.scalars
    t = scalars.gen
    coeffs = [scalars.zero] * len(op.coefficients)
    for i, ci in enumerate(op.coefficients):
        if not ci:
            continue
        for j in range(i + 1):
            s = int(stirling(i, j, kind=2))
            if s:
                coeffs[j] += ci * s * t**j
    return DiffOperator(scalars, tuple(coeffs), "d")


@dataclass(frozen=True)
class SymbolValue:
    order: int
    value: ParamRat

    def to_dict(self, scalars: ParameterField) -> dict[str, Any]:
        return {"m": self.order, "value": scalars.format(self.value)}


def symbol(op: DiffOperator, m: int) -> SymbolValue:
    """The m-symbol: leading d-coefficient when the order is exactly m, else 0."""
    op = op.in_basis("d")
    value = op.leading_coefficient if op.order == m else op.scalars.zero
    return SymbolValue(m, value)
