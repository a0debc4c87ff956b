"""Typed run configuration and output documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any
from uuid import uuid4

from pf_audit import __version__
from pf_audit.exceptions import ValidationError
from pf_audit.periods import DEFAULT_TERMS
from pf_audit.validation import parse_grid, parse_positive_int, require_field

COMMANDS = ("compute", "verify", "indicial", "series", "numeric")
DEFAULT_DIGITS = 30


@dataclass(frozen=True)
class GridSpec:
    """count equally spaced exact points from start to stop inclusive."""

    start: Fraction
    stop: Fraction
    count: int

    @staticmethod
    def parse(text: str) -> GridSpec:
        return GridSpec(*parse_grid(text))

    def points(self) -> tuple[Fraction, ...]:
        if self.count == 1:
            return (self.start,)
        step = (self.stop - self.start) / (self.count - 1)
        return tuple(self.start + i * step for i in range(self.count))

    def to_dict(self) -> dict[str, Any]:
        return {"start": str(self.start), "stop": str(self.stop), "count": self.count}


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; embedded verbatim in its document.

    ``max_order`` and ``chart`` default to the cohomology dimension and the
    last coordinate once the family is known.
    """

    command: str
    family_path: str | None = None
    max_order: int | None = None
    terms: int = DEFAULT_TERMS
    chart: int | None = None
    digits: int = DEFAULT_DIGITS
    grid: GridSpec | None = None
    output_path: str | None = None
    compare_operator_path: str | None = None
    chains: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(
                f"Unknown command '{self.command}'. Available: {', '.join(COMMANDS)}."
            )
        if self.max_order is not None:
            parse_positive_int(self.max_order, "max_order")
        parse_positive_int(self.terms, "terms")
        parse_positive_int(self.digits, "digits")
        if self.chart is not None and (isinstance(self.chart, bool) or self.chart < 0):
            raise ValidationError(
                f"Field 'chart' must be a coordinate index, received {self.chart}."
            )

    @staticmethod
    def from_dict(payload: dict[str, Any]) -> RunConfig:
        command = require_field(payload, "command", str)
        grid_raw = payload.get("grid")
        return RunConfig(
            command=command,
            family_path=payload.get("family_path"),
            max_order=payload.get("max_order"),
            terms=payload.get("terms", DEFAULT_TERMS),
            chart=payload.get("chart"),
            digits=payload.get("digits", DEFAULT_DIGITS),
            grid=None if grid_raw is None else GridSpec.parse(grid_raw),
            output_path=payload.get("output_path"),
            compare_operator_path=payload.get("compare_operator_path"),
            chains=tuple(payload.get("chains", ())),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "family_path": self.family_path,
            "max_order": self.max_order if self.max_order is not None else "auto",
            "terms": self.terms,
            "chart": self.chart if self.chart is not None else "n",
            "digits": self.digits,
            "grid": None if self.grid is None else self.grid.to_dict(),
            "output_path": self.output_path,
            "compare_operator_path": self.compare_operator_path,
            "chains": list(self.chains),
        }


@dataclass
class RunDocument:
    """Deterministic ``document`` plus per-run metadata kept apart from it."""

    command: str
    document: dict[str, Any]
    run_id: str = field(default_factory=lambda: str(uuid4()))
    generated_at_utc: str = field(
        default_factory=lambda: datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    )
    engine_version: str = field(default_factory=lambda: __version__)

    def to_dict(self) -> dict[str, Any]:
        return {
            "document": self.document,
            "run_metadata": {
                "run_id": self.run_id,
                "command": self.command,
                "generated_at_utc": self.generated_at_utc,
                "engine_version": self.engine_version,
            },
        }
