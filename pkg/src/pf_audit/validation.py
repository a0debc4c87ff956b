"""Input parsing and validation helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from pf_audit.exceptions import ValidationError


def require_field(payload: dict[str, Any], key: str, expected_type: type | tuple[type, ...]) -> Any:
    value = payload.get(key)
    if value is None:
        raise ValidationError(f"Missing required field: '{key}'.")
    # bool is a subclass of int; True is not an order bound.
    if isinstance(value, bool):
        _is_numeric = (
            expected_type is int
            or expected_type is float
            or (isinstance(expected_type, tuple) and any(t in (int, float) for t in expected_type))
        )
        if _is_numeric:
            raise ValidationError(f"Field '{key}' must be numeric, received bool.")
    if not isinstance(value, expected_type):
        if isinstance(expected_type, tuple):
            expected_name = ", ".join(t.__name__ for t in expected_type)
        else:
            expected_name = expected_type.__name__
        raise ValidationError(
            f"Field '{key}' must be of type {expected_name}, received {type(value).__name__}."
        )
    return value


def parse_positive_int(value: Any, field_name: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"Field '{field_name}' must be an integer, received bool.")
    try:
        parsed = int(str(value).strip())
    except (ValueError, TypeError) as exc:
        raise ValidationError(
            f"Field '{field_name}' must be an integer, received {value!r}."
        ) from exc
    if parsed < 1:
        raise ValidationError(f"Field '{field_name}' must be positive, received {parsed}.")
    return parsed


def parse_bool(value: Any, field_name: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "yes", "1"):
        return True
    if text in ("false", "no", "0"):
        return False
    raise ValidationError(f"Field '{field_name}' must be true or false, received {value!r}.")


def parse_fraction(value: Any, field_name: str) -> Fraction:
    """Exact rational from '3/10', '0.3' or an int; floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(
            f"Field '{field_name}' must be an exact rational such as '3/10', received {value!r}."
        )
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(
            f"Field '{field_name}' must be an exact rational such as '3/10', received {value!r}."
        ) from exc


def parse_grid(value: str, field_name: str = "grid") -> tuple[Fraction, Fraction, int]:
    """'start:stop:count' with exact endpoints and count >= 1."""
    if not isinstance(value, str):
        raise ValidationError(f"Field '{field_name}' must be a string 'start:stop:count'.")
    parts = value.split(":")
    if len(parts) != 3:
        raise ValidationError(
            f"Field '{field_name}' must look like 'start:stop:count', received {value!r}."
        )
    start = parse_fraction(parts[0], f"{field_name}.start")
    stop = parse_fraction(parts[1], f"{field_name}.stop")
    count = parse_positive_int(parts[2], f"{field_name}.count")
    if count > 1 and stop <= start:
        raise ValidationError(f"Field '{field_name}' needs stop > start, received {value!r}.")
    return start, stop, count
