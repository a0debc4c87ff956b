"""Audit engine orchestration."""

from __future__ import annotations

import logging
from typing import Any

from pf_audit.commands.base import AuditCommand, CommandContext
from pf_audit.commands.compute import ComputeCommand
from pf_audit.commands.indicial import IndicialCommand
from pf_audit.commands.numeric import NumericCommand
from pf_audit.commands.series import SeriesCommand
from pf_audit.commands.verify import VerifyCommand
from pf_audit.exceptions import ValidationError
from pf_audit.models import RunConfig, RunDocument
from pf_audit.numeric.legendre import CHAIN_CATALOGUE
from pf_audit.oracles import ORACLE_CATALOGUE

logger = logging.getLogger(__name__)


class AuditEngine:
    def __init__(self, context: CommandContext | None = None) -> None:
        self.context = context or CommandContext(
            oracles=ORACLE_CATALOGUE,
            chains=CHAIN_CATALOGUE,
        )
        self._commands: dict[str, AuditCommand] = {
            ComputeCommand.name: ComputeCommand(),
            VerifyCommand.name: VerifyCommand(),
            IndicialCommand.name: IndicialCommand(),
            SeriesCommand.name: SeriesCommand(),
            NumericCommand.name: NumericCommand(),
        }

    def run(self, config: RunConfig) -> RunDocument:
        command = self._commands.get(config.command)
        if not command:
            available = ", ".join(sorted(self._commands.keys()))
            raise ValidationError(f"Unknown command '{config.command}'. Available: {available}.")
        logger.info("run_started command=%s family=%s", config.command, config.family_path)
        body = command.run(config, self.context)
        return RunDocument(command=config.command, document={"config": config.to_dict(), **body})

    def run_from_dict(self, payload: dict[str, Any]) -> RunDocument:
        config = RunConfig.from_dict(payload)
        return self.run(config)
