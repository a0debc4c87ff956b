"""Minimal Picard-Fuchs operator of a family, with its exact-form certificate."""

from __future__ import annotations

import logging

from pf_audit.algebra.linalg import FractionFreeEchelon, SparseVector
from pf_audit.algebra.rational import ParamRat
from pf_audit.exceptions import OrderBoundExceededError, SingularFamilyError, ValidationError
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.jacobian import (
    JacobianData,
    check_generic_smooth,
    cohomology_dimension,
    jacobian_ideal_data,
    smoothness_degree,
)
from pf_audit.forms.reduction import (
    Certificate,
    PoleForm,
    ReducedClass,
    gm_derivative,
    reduce_full,
)
from pf_audit.operators.diffop import DiffOperator

logger = logging.getLogger(__name__)


def _flatten(reduced: ReducedClass, offsets: dict[int, int]) -> SparseVector:
    vec: SparseVector = {}
    for order, coords in reduced.levels.items():
        base = offsets[order]
        for i, value in enumerate(coords):
            if value:
                vec[base + i] = value
    return vec


def _offsets(data: JacobianData, top_order: int) -> dict[int, int]:
    family = data.family
    # Smooth families have an empty complement from the smoothness degree on.
    vanishing = smoothness_degree(family)
    offsets = {}
    position = 0
    for order in range(1, top_order + 1):
        offsets[order] = position
        degree = family.numerator_degree(order)
        if degree < vanishing:
            position += len(data.basis(degree))
    return offsets


def picard_fuchs(
    family: FamilySpec,
    max_order: int | None = None,
    data: JacobianData | None = None,
    start: PoleForm | None = None,
) -> tuple[DiffOperator, Certificate]:
    """Search orders 1, 2, ... for the first Q(t)-dependency among reduced derivatives.

    ``start`` defaults to Omega / f. The returned operator D is normalized and the
    certificate beta satisfies D(start) = d(beta) exactly.
    """
    data = data or jacobian_ideal_data(family)
    if not check_generic_smooth(family, data):
        raise SingularFamilyError(
            f"Family '{family.name}' is not smooth at the generic parameter value."
        )
    bound = max_order if max_order is not None else cohomology_dimension(data)
    if bound < 1:
        raise ValidationError(f"Field 'max_order' must be positive, received {bound}.")

    form = start or PoleForm.holomorphic(family)
    form.check_degree(family)
    offsets = _offsets(data, form.order + bound)
    scalars = family.scalars
    echelon = FractionFreeEchelon(scalars)

    reduced, certificate = reduce_full(form, data)
    certificates = [certificate]
    echelon.insert(_flatten(reduced, offsets), tag=0)

    for order in range(1, bound + 1):
        form = gm_derivative(form, family)
        reduced, certificate = reduce_full(form, data)
        certificates.append(certificate)
        vector = _flatten(reduced, offsets)
        remainder, combination = echelon.reduce(vector)
        if remainder:
            echelon.insert(vector, tag=order)
            continue

        coefficients: list[ParamRat] = [-combination.get(j, scalars.zero) for j in range(order)]
        coefficients.append(scalars.one)
        operator, factor = DiffOperator(scalars, tuple(coefficients), "d").normalized_with_factor()
        beta = Certificate()
        for coeff, cert in zip(coefficients, certificates):
            if coeff:
                beta = beta + cert.scaled(coeff * factor)
        beta = beta.merged()
        logger.info(
            "pf_order_found family=%s order=%d bound=%d certificate_terms=%d pieces=%s",
            family.name,
            order,
            bound,
            len(beta.terms),
            list(data.built_degrees),
        )
        return operator, beta

    raise OrderBoundExceededError(bound, echelon.rank)
