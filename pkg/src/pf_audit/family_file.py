"""Line-oriented ``key: value`` files for families and reference operators.

A family file::

    # Legendre cubic
    name: legendre
    ambient_dim: 2
    variables: x0, x1, x2
    parameter: t
    polynomial: x1^2*x2 - x0*(x0 - x2)*(x0 - t*x2)

An operator file uses ``T`` for theta = t d/dt or ``D`` for d/dt::

    basis: theta
    parameter: t
    operator: (t^4 - 256)*T^3 + 2*t^4*T^2 + 7/6*t^4*T - 1/6*t^4
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pf_audit.algebra.multipoly import polynomial_space
from pf_audit.algebra.parser import parse_expression, parse_polynomial
from pf_audit.exceptions import (
    ParseError,
    PfAuditError,
    SingularFamilyError,
    ValidationError,
)
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.jacobian import check_generic_smooth, jacobian_ideal_data
from pf_audit.operators.diffop import DiffOperator
from pf_audit.validation import parse_bool, parse_positive_int

logger = logging.getLogger(__name__)

FAMILY_KEYS = ("name", "ambient_dim", "variables", "parameter", "polynomial", "constant")
FAMILY_REQUIRED = ("name", "variables", "parameter", "polynomial")
OPERATOR_KEYS = ("basis", "parameter", "operator")
OPERATOR_SYMBOLS = {"theta": "T", "d": "D"}

_KEY_LINE = re.compile(r"^(?P<key>[A-Za-z_]+)\s*:\s*")


@dataclass(frozen=True)
class FieldEntry:
    value: str
    line: int
    column: int


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ValidationError(f"File not found: {path}") from exc
    except OSError as exc:
        raise ValidationError(f"Cannot read {path}: {exc}") from exc


def parse_fields(
    text: str, allowed: tuple[str, ...], required: tuple[str, ...]
) -> dict[str, FieldEntry]:
    fields: dict[str, FieldEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _KEY_LINE.match(raw.lstrip())
        indent = len(raw) - len(raw.lstrip())
        if match is None:
            raise ParseError("Expected 'key: value'", line=lineno, column=indent + 1)
        key = match.group("key")
        if key not in allowed:
            raise ParseError(
                f"Unknown key '{key}'. Allowed: {', '.join(allowed)}",
                line=lineno,
                column=indent + 1,
            )
        if key in fields:
            raise ParseError(f"Duplicate key '{key}'", line=lineno, column=indent + 1)
        value = raw.lstrip()[match.end() :].rstrip()
        fields[key] = FieldEntry(value, lineno, indent + match.end())
    missing = [key for key in required if key not in fields]
    if missing:
        raise ValidationError(f"Missing required field: '{missing[0]}'.")
    return fields


def _parse_at(entry: FieldEntry, parse: Any) -> Any:
    try:
        return parse(entry.value)
    except ParseError as exc:
        raise exc.at_line(entry.line, entry.column) from None


def family_from_text(text: str, check_smooth: bool = True) -> FamilySpec:
    fields = parse_fields(text, FAMILY_KEYS, FAMILY_REQUIRED)
    variables = tuple(v for v in re.split(r"[\s,]+", fields["variables"].value) if v)
    parameter = fields["parameter"].value
    if "ambient_dim" in fields:
        declared = parse_positive_int(fields["ambient_dim"].value, "ambient_dim")
        if declared + 1 != len(variables):
            raise ValidationError(
                f"Field 'ambient_dim' is {declared} but {len(variables)} variables are declared."
            )
    constant = parse_bool(fields["constant"].value, "constant") if "constant" in fields else False
    try:
        polynomial = _parse_at(
            fields["polynomial"], lambda text: parse_polynomial(text, variables, parameter)
        )
    except PfAuditError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError(f"Invalid polynomial: {exc}") from exc
    family = FamilySpec(
        name=fields["name"].value,
        ambient_dim=len(variables) - 1,
        variables=variables,
        parameter=parameter,
        polynomial=polynomial,
        constant=constant,
    )
    if check_smooth and not check_generic_smooth(family, jacobian_ideal_data(family)):
        raise SingularFamilyError(
            f"Family '{family.name}' is not smooth at the generic parameter value."
        )
    return family


def load_family(path: str | Path, check_smooth: bool = True) -> FamilySpec:
    """Parse and validate a family file; singular generic fibers are rejected."""
    path = Path(path)
    family = family_from_text(_read_text(path), check_smooth)
    logger.info(
        "family_loaded path=%s name=%s n=%d degree=%d",
        path,
        family.name,
        family.ambient_dim,
        family.degree,
    )
    return family


def parse_operator_text(text: str, basis: str, parameter: str) -> DiffOperator:
    """Operator text in T (theta) or D (d/dt); coefficients multiply from the left."""
    if basis not in OPERATOR_SYMBOLS:
        raise ValidationError(f"Unknown operator basis '{basis}'. Available: theta, d.")
    symbol = OPERATOR_SYMBOLS[basis]
    space = polynomial_space((symbol,), parameter)
    poly = parse_expression(text, space)
    if not poly:
        raise ValidationError("The operator is zero.")
    order = max(exp for (exp,) in poly.keys())
    coefficients: list[Any] = [space.scalars.zero] * (order + 1)
    for (exp,), coeff in poly.items():
        coefficients[exp] = coeff
    return DiffOperator(space.scalars, tuple(coefficients), basis)


def operator_from_text(text: str) -> DiffOperator:
    fields = parse_fields(text, OPERATOR_KEYS, ("operator",))
    basis = fields["basis"].value if "basis" in fields else "theta"
    parameter = fields["parameter"].value if "parameter" in fields else "t"
    return _parse_at(
        fields["operator"], lambda body: parse_operator_text(body, basis, parameter)
    )


def load_operator_file(path: str | Path) -> DiffOperator:
    return operator_from_text(_read_text(Path(path)))


@dataclass(frozen=True)
class OperatorComparison:
    """equal, proportional or mismatch, with the normalized theta-forms side by side."""

    verdict: str
    computed: DiffOperator
    reference: DiffOperator

    def differences(self) -> list[dict[str, Any]]:
        ours = self.computed.in_basis("theta").normalized()
        theirs = self.reference.in_basis("theta").normalized()
        scalars = ours.scalars
        rows = []
        for j in range(max(ours.order, theirs.order) + 1):
            a, b = ours.coefficient(j), theirs.coefficient(j)
            if a != b:
                rows.append(
                    {
                        "theta_power": j,
                        "computed": scalars.format(a),
                        "reference": scalars.format(b),
                        "difference": scalars.format(a - b),
                    }
                )
        return rows

    def to_dict(self) -> dict[str, Any]:
        return {
            "paper_operator_match": self.verdict,
            "reference_operator": self.reference.in_basis("theta").normalized().to_dict(),
            "differences": self.differences(),
        }


def compare_operators(computed: DiffOperator, reference: DiffOperator) -> OperatorComparison:
    if computed.scalars.name != reference.scalars.name:
        raise ValidationError(
            f"Reference operator is in '{reference.scalars.name}', "
            f"expected '{computed.scalars.name}'."
        )
    ours = computed.in_basis("theta")
    theirs = reference.in_basis("theta")
    if ours.coefficients == theirs.coefficients:
        verdict = "equal"
    elif ours.is_proportional_to(theirs):
        verdict = "proportional"
    else:
        verdict = "mismatch"
    logger.info("operator_comparison verdict=%s", verdict)
    return OperatorComparison(verdict, computed, reference)
