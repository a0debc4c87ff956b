"""Provider interfaces for period oracles.

Protocol classes so the catalogue can hold any structural match without an
inheritance chain.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from pf_audit.forms.family import FamilySpec
from pf_audit.operators.diffop import DiffOperator
from pf_audit.periods import AnnihilationReport


@runtime_checkable
class PeriodOracle(Protocol):
    """Contract for an independent source of period series of a recognised family."""

    name: str

    def matches(self, family: FamilySpec) -> bool: ...

    def check(self, op: DiffOperator, family: FamilySpec, terms: int) -> OracleVerdict: ...


@runtime_checkable
class OracleVerdict(Protocol):
    oracle: str
    report: AnnihilationReport

    def to_dict(self) -> dict[str, object]: ...
