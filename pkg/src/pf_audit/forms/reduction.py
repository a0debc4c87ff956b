"""Griffiths-Dwork pole-order reduction with exact-form bookkeeping.

A pole form ``P * Omega / f^k`` of order k >= 2 is rewritten through the
splitting ``P = P_rem + sum_i A_i df/dx_i`` and the identity

    A(f) Omega / f^k = div(A)/(k-1) * Omega / f^(k-1) + d(phi_A / ((k-1) f^(k-1)))

where ``phi_A`` is the double contraction of the coordinate volume form with
the Euler field and A. Each step records the witness A as a certificate term
so the accumulated exact form can be rebuilt and checked independently.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from pf_audit.algebra.multipoly import MultiPoly
from pf_audit.algebra.rational import ParamRat
from pf_audit.exceptions import ReductionError, ValidationError
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.jacobian import JacobianData

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PoleForm:
    """The rational n-form numerator * Omega / f^order."""

    numerator: MultiPoly
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValidationError(f"Pole order must be positive, received {self.order}.")

    @classmethod
    def holomorphic(cls, family: FamilySpec) -> PoleForm:
        """Omega / f, the canonical representative of the family's form."""
        return cls(MultiPoly(family.space, family.space.constant(1), 0), 1)

    def check_degree(self, family: FamilySpec) -> None:
        expected = family.numerator_degree(self.order)
        if self.numerator.degree != expected:
            raise ValidationError(
                f"Numerator of degree {self.numerator.degree} at pole order {self.order}; "
                f"expected {expected}."
            )

    def scaled(self, factor: Any) -> PoleForm:
        return PoleForm(self.numerator.scaled(factor), self.order)

    def __add__(self, other: PoleForm) -> PoleForm:
        if other.order != self.order:
            raise ValidationError("Pole forms of different orders cannot be added directly.")
        return PoleForm(self.numerator + other.numerator, self.order)


@dataclass(frozen=True)
class CertTerm:
    """scalar * phi_A / f^(order-1) for the witness vector A."""

    order: int
    witness: tuple[MultiPoly, ...]
    scalar: ParamRat

    @property
    def is_empty(self) -> bool:
        return not self.scalar or all(a.is_zero for a in self.witness)

    def with_scalar(self, scalar: ParamRat) -> CertTerm:
        return CertTerm(self.order, self.witness, scalar)

    def to_dict(self) -> dict[str, Any]:
        scalars = self.witness[0].space.scalars
        return {
            "k": self.order,
            "scalar": scalars.format(self.scalar),
            "witness": [a.to_string() for a in self.witness],
        }


@dataclass(frozen=True)
class Certificate:
    terms: tuple[CertTerm, ...] = ()

    @property
    def is_empty(self) -> bool:
        return all(term.is_empty for term in self.terms)

    @property
    def max_order(self) -> int:
        return max((term.order for term in self.terms), default=1)

    def __add__(self, other: Certificate) -> Certificate:
        return Certificate(self.terms + other.terms)

    def scaled(self, factor: ParamRat) -> Certificate:
        if not factor:
            return Certificate()
        return Certificate(tuple(t.with_scalar(t.scalar * factor) for t in self.terms))

    def merged(self) -> Certificate:
        """One term per pole order, scalar folded into the witness, empty terms dropped."""
        by_order: dict[int, list[MultiPoly]] = {}
        for term in self.terms:
            if term.is_empty:
                continue
            scaled = [a.scaled(term.scalar) for a in term.witness]
            current = by_order.get(term.order)
            by_order[term.order] = scaled if current is None else [
                x + y for x, y in zip(current, scaled)
            ]
        merged = []
        for order in sorted(by_order):
            witness = tuple(by_order[order])
            if all(a.is_zero for a in witness):
                continue
            scalars = witness[0].space.scalars
            merged.append(CertTerm(order, witness, scalars.one))
        return Certificate(tuple(merged))

    def replace(self, index: int, term: CertTerm) -> Certificate:
        terms = list(self.terms)
        terms[index] = term
        return Certificate(tuple(terms))

    def to_list(self) -> list[dict[str, Any]]:
        return [term.to_dict() for term in self.terms]


@dataclass(frozen=True)
class ReducedClass:
    """Coordinates per pole order on the complement bases of the Jacobian ring."""

    levels: Mapping[int, tuple[ParamRat, ...]] = field(default_factory=dict)

    def vector(self, orders: Sequence[int], data: JacobianData) -> list[ParamRat]:
        family = data.family
        zero = family.scalars.zero
        out: list[ParamRat] = []
        for k in orders:
            size = len(data.basis(family.numerator_degree(k)))
            out.extend(self.levels.get(k, (zero,) * size))
        return out

    def combine(self, other: ReducedClass, a: Any, b: Any, data: JacobianData) -> ReducedClass:
        """a * self + b * other."""
        orders = sorted(set(self.levels) | set(other.levels))
        levels = {}
        for k in orders:
            mine = self.vector([k], data)
            theirs = other.vector([k], data)
            levels[k] = tuple(a * x + b * y for x, y in zip(mine, theirs))
        return ReducedClass(levels)


@dataclass(frozen=True)
class ReductionStep:
    remainder: MultiPoly
    reduced: PoleForm
    term: CertTerm


def gm_derivative(form: PoleForm, family: FamilySpec) -> PoleForm:
    """d/dt of P * Omega / f^k, as (f dP/dt - k P df/dt) * Omega / f^(k+1)."""
    p = form.numerator.poly
    space = family.space
    numerator = family.f * space.param_derivative(p) - p * family.f_t * form.order
    return PoleForm(
        MultiPoly(space, numerator, form.numerator.degree + family.degree), form.order + 1
    )


def reduce_once(form: PoleForm, data: JacobianData) -> ReductionStep:
    """One pole-order step; the remainder lives on the complement basis at this order."""
    family = data.family
    k = form.order
    if k < 2:
        raise ReductionError(f"Pole order {k} cannot be reduced further.")
    form.check_degree(family)
    space = family.space
    numerator = form.numerator
    piece = data.piece(numerator.degree)
    rem, witnesses = piece.split(numerator.poly)

    reconstructed = rem
    for a, partial in zip(witnesses, data.partials):
        reconstructed += a * partial
    if reconstructed != numerator.poly:
        raise ReductionError(
            f"unexpected reduction failure: family={family.name} order={k} "
            f"degree={numerator.degree}"
        )

    scalar = family.scalars.one / (k - 1)
    divergence = space.ring.zero
    for i, a in enumerate(witnesses):
        divergence += a.diff(i)
    witness_degree = numerator.degree - family.degree + 1
    return ReductionStep(
        remainder=MultiPoly(space, rem, numerator.degree),
        reduced=PoleForm(
            MultiPoly(space, divergence * scalar, numerator.degree - family.degree), k - 1
        ),
        term=CertTerm(
            order=k,
            witness=tuple(MultiPoly(space, a, max(witness_degree, 0)) for a in witnesses),
            scalar=scalar,
        ),
    )


def reduce_full(form: PoleForm, data: JacobianData) -> tuple[ReducedClass, Certificate]:
    """Reduce to pole order 1, collecting complement coordinates at every order."""
    family = data.family
    form.check_degree(family)
    zero = family.scalars.zero
    levels: dict[int, tuple[ParamRat, ...]] = {}
    terms: list[CertTerm] = []
    current = form
    while current.order >= 2:
        step = reduce_once(current, data)
        piece = data.piece(step.remainder.degree)
        levels[current.order] = piece.coordinates(step.remainder.poly, zero)
        if not step.term.is_empty:
            terms.append(step.term)
        current = step.reduced
    piece = data.piece(current.numerator.degree)
    levels[1] = piece.coordinates(current.numerator.poly, zero)
    return ReducedClass(levels), Certificate(tuple(terms))
