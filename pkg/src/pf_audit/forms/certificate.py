"""Symbolic check of D(Omega/f) = d(beta) in an affine chart.

In the chart x_c = 1 the remaining variables are affine coordinates and
Omega restricts to (-1)^c times the affine volume form. A form is stored as
components h_I / F^e on the wedge basis dx_I (I increasing), with F the
dehomogenized defining polynomial and one pole exponent e shared by all
components. Differentiation in t acts on coefficients only.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy.polys.rings import PolyElement

from pf_audit.exceptions import ValidationError
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.reduction import Certificate, CertTerm, PoleForm
from pf_audit.operators.diffop import DiffOperator

logger = logging.getLogger(__name__)

IndexSet = tuple[int, ...]


def _dehomogenize(poly: PolyElement, chart: int) -> PolyElement:
    terms: dict[tuple[int, ...], Any] = {}
    ring = poly.ring
    for monom, coeff in poly.items():
        key = monom[:chart] + (0,) + monom[chart + 1 :]
        updated = terms.get(key, ring.domain.zero) + coeff
        if updated:
            terms[key] = updated
        else:
            terms.pop(key, None)
    return ring.from_dict(terms) if terms else ring.zero


def _check_chart(family: FamilySpec, chart: int) -> None:
    if not 0 <= chart <= family.ambient_dim:
        raise ValidationError(
            f"Chart index {chart} out of range 0..{family.ambient_dim} for family '{family.name}'."
        )


@dataclass(frozen=True)
class AffineForm:
    """sum_I components[I] / F^pole * dx_I in the chart x_chart = 1."""

    chart: int
    degree: int
    pole: int
    denominator: PolyElement
    components: dict[IndexSet, PolyElement] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return not any(self.components.values())

    def with_pole(self, pole: int) -> AffineForm:
        if pole < self.pole:
            raise ValidationError("Cannot lower the pole order of an affine form.")
        if pole == self.pole:
            return self
        lift = self.denominator ** (pole - self.pole)
        components = {key: value * lift for key, value in self.components.items()}
        return AffineForm(self.chart, self.degree, pole, self.denominator, components)

    def scaled(self, factor: Any) -> AffineForm:
        ring = self.denominator.ring
        scale = ring.ground_new(ring.domain.convert(factor))
        components = {key: value * scale for key, value in self.components.items()}
        return AffineForm(self.chart, self.degree, self.pole, self.denominator, components)

    def __add__(self, other: AffineForm) -> AffineForm:
        if other.chart != self.chart or other.degree != self.degree:
            raise ValidationError("Affine forms of different charts or degrees do not add.")
        pole = max(self.pole, other.pole)
        left, right = self.with_pole(pole), other.with_pole(pole)
        components = dict(left.components)
        for key, value in right.components.items():
            total = components.get(key, self.denominator.ring.zero) + value
            if total:
                components[key] = total
            else:
                components.pop(key, None)
        return AffineForm(self.chart, self.degree, pole, self.denominator, components)

    def __neg__(self) -> AffineForm:
        return self.scaled(-1)

    def __sub__(self, other: AffineForm) -> AffineForm:
        return self + (-other)

    def exterior_derivative(self, variables: Sequence[int]) -> AffineForm:
        """d in the affine variables; d(h/F^e) = (F dh - e h dF) / F^(e+1)."""
        F = self.denominator
        e = self.pole
        ring = F.ring
        out: dict[IndexSet, PolyElement] = {}
        for index_set, h in self.components.items():
            if not h:
                continue
            for var in variables:
                if var in index_set:
                    continue
                partial = F * h.diff(var) - h * F.diff(var) * e
                if not partial:
                    continue
                sign = -1 if sum(1 for i in index_set if i < var) % 2 else 1
                key = tuple(sorted(index_set + (var,)))
                total = out.get(key, ring.zero) + partial * sign
                if total:
                    out[key] = total
                else:
                    out.pop(key, None)
        return AffineForm(self.chart, self.degree + 1, e + 1, F, out)

    def to_dict(self, space: Any) -> dict[str, Any]:
        return {
            "chart": self.chart,
            "degree": self.degree,
            "pole": self.pole,
            "components": {
                "^".join(f"d{space.variables[i]}" for i in key): space.format(value)
                for key, value in sorted(self.components.items())
                if value
            },
        }


@dataclass(frozen=True)
class CertificateCheck:
    verified: bool
    chart: int
    residual: AffineForm

    def to_dict(self, space: Any) -> dict[str, Any]:
        return {
            "verified": self.verified,
            "chart": self.chart,
            "residual": None if self.verified else self.residual.to_dict(space),
        }


def affine_variables(family: FamilySpec, chart: int) -> tuple[int, ...]:
    return tuple(i for i in range(family.nvars) if i != chart)


def _zero_form(family: FamilySpec, chart: int, degree: int) -> AffineForm:
    F = _dehomogenize(family.f, chart)
    return AffineForm(chart, degree, 0, F)


def _term_to_affine(term: CertTerm, family: FamilySpec, chart: int) -> AffineForm:
    F = _dehomogenize(family.f, chart)
    ring = family.space.ring
    gens = ring.gens
    witness = [_dehomogenize(a.poly, chart) for a in term.witness]
    scalar = ring.ground_new(term.scalar)
    affine = affine_variables(family, chart)
    components: dict[IndexSet, PolyElement] = {}
    for o in affine:
        coefficient = witness[o] - gens[o] * witness[chart]
        if not coefficient:
            continue
        sign = (-1) ** (chart + o) * (1 if chart < o else -1)
        key = tuple(i for i in affine if i != o)
        components[key] = coefficient * scalar * sign
    return AffineForm(chart, family.ambient_dim - 1, term.order - 1, F, components)


def certificate_to_affine(
    certificate: Certificate, family: FamilySpec, chart: int | None = None
) -> AffineForm:
    """The (n-1)-form sum scalar * phi_A / f^(k-1) restricted to x_chart = 1."""
    chart = family.ambient_dim if chart is None else chart
    _check_chart(family, chart)
    total = _zero_form(family, chart, family.ambient_dim - 1)
    for term in certificate.terms:
        if not term.is_empty:
            total = total + _term_to_affine(term, family, chart)
    return total


def _top_form(numerator: PolyElement, pole: int, family: FamilySpec, chart: int) -> AffineForm:
    F = _dehomogenize(family.f, chart)
    key = affine_variables(family, chart)
    value = numerator * (-1) ** chart
    components = {key: value} if value else {}
    return AffineForm(chart, family.ambient_dim, pole, F, components)


def pole_forms_to_affine(
    forms: Iterable[PoleForm], family: FamilySpec, chart: int
) -> AffineForm:
    total = _zero_form(family, chart, family.ambient_dim)
    for form in forms:
        numerator = _dehomogenize(form.numerator.poly, chart)
        total = total + _top_form(numerator, form.order, family, chart)
    return total


def operator_on_omega(op: DiffOperator, family: FamilySpec, chart: int) -> AffineForm:
    """D(Omega/f) in the chart: sum a_j * num_j / F^(j+1) over a common F^(r+1)."""
    F = _dehomogenize(family.f, chart)
    op = op.in_basis("d")
    if op.is_zero:
        return _zero_form(family, chart, family.ambient_dim)
    ring = F.ring
    space = family.space
    F_t = space.param_derivative(F)
    numerators = [ring.one]
    for j in range(op.order):
        current = numerators[-1]
        numerators.append(F * space.param_derivative(current) - current * F_t * (j + 1))
    top = op.order + 1
    total = ring.zero
    for j, coeff in enumerate(op.coefficients):
        if coeff:
            total += numerators[j] * F ** (top - 1 - j) * ring.ground_new(coeff)
    return _top_form(total, top, family, chart)


def verify_exactness(
    forms: Iterable[PoleForm],
    family: FamilySpec,
    certificate: Certificate,
    chart: int | None = None,
) -> CertificateCheck:
    """Check sum_i P_i Omega / f^k_i = d(beta) exactly in the chart."""
    chart = family.ambient_dim if chart is None else chart
    _check_chart(family, chart)
    lhs = pole_forms_to_affine(forms, family, chart)
    return _compare(lhs, family, certificate, chart)


def verify_certificate(
    op: DiffOperator,
    family: FamilySpec,
    certificate: Certificate,
    chart: int | None = None,
) -> CertificateCheck:
    """Check D(Omega/f) = d(beta) exactly in the chart x_chart = 1 (default x_n)."""
    chart = family.ambient_dim if chart is None else chart
    _check_chart(family, chart)
    lhs = operator_on_omega(op, family, chart)
    return _compare(lhs, family, certificate, chart)


def _compare(
    lhs: AffineForm, family: FamilySpec, certificate: Certificate, chart: int
) -> CertificateCheck:
    beta = certificate_to_affine(certificate, family, chart)
    d_beta = beta.exterior_derivative(affine_variables(family, chart))
    residual = lhs - d_beta
    verified = residual.is_zero
    logger.info(
        "certificate_check family=%s chart=%d terms=%d verified=%s",
        family.name,
        chart,
        len(certificate.terms),
        verified,
    )
    return CertificateCheck(verified, chart, residual)
