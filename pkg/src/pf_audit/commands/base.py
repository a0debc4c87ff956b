"""Command abstraction."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

from pf_audit.exceptions import ValidationError
from pf_audit.family_file import load_family
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.picard_fuchs import picard_fuchs
from pf_audit.forms.reduction import Certificate
from pf_audit.interfaces import PeriodOracle
from pf_audit.models import RunConfig
from pf_audit.numeric.legendre import ChainSpec
from pf_audit.operators.diffop import DiffOperator


@dataclass
class CommandContext:
    """Runtime context carrying the oracle and chain catalogues.

    Typed to the ``PeriodOracle`` protocol so tests can inject their own.
    """

    oracles: tuple[PeriodOracle, ...]
    chains: Mapping[str, ChainSpec]

    def find_oracle(self, family: FamilySpec) -> PeriodOracle | None:
        return next((o for o in self.oracles if o.matches(family)), None)

    def chain(self, name: str) -> ChainSpec:
        chain = self.chains.get(name)
        if chain is None:
            available = ", ".join(sorted(self.chains))
            raise ValidationError(f"Unknown chain '{name}'. Available: {available}.")
        return chain


@dataclass(frozen=True)
class FamilyOperator:
    family: FamilySpec
    operator: DiffOperator
    certificate: Certificate


def require_family(config: RunConfig) -> FamilySpec:
    if not config.family_path:
        raise ValidationError(f"Command '{config.command}' needs a family file.")
    return load_family(config.family_path)


def compute_family_operator(config: RunConfig) -> FamilyOperator:
    family = require_family(config)
    operator, certificate = picard_fuchs(family, config.max_order)
    return FamilyOperator(family, operator, certificate)


def operator_summary(operator: DiffOperator) -> dict[str, Any]:
    return {
        "d_form": operator.in_basis("d").to_dict(),
        "theta_form": operator.in_basis("theta").normalized().to_dict(),
    }


class AuditCommand(ABC):
    """Base class for all commands.

    Subclasses MUST set ``name`` as a class attribute and implement ``run``.
    """

    name: str

    @abstractmethod
    def run(self, config: RunConfig, context: CommandContext) -> dict[str, Any]:
        """Execute the command and return its deterministic document body."""
