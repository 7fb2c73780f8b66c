# lab.py
from typing import Dict, Optional

import pandas as pd
from loguru import logger

from src.cli.artifacts import write_artifacts
from src.cli.config import COMMANDS, RunConfig
from src.cli.sweep import run_sweep
from src.common.errors import ConfigError
from src.services.base import LabService, RunOutcome
from src.services.bounds import BoundsService
from src.services.flow import FlowService
from src.services.holder import HolderService
from src.services.measure import MeasureService
from src.services.ode import OdeService
from src.services.soliton import SolitonService


class GCFLab:
    """Main facade for the curvature flow and Lp Minkowski lab"""

    def __init__(self):
        self.services: Dict[str, LabService] = {
            service.command: service
            for service in (
                FlowService(),
                SolitonService(),
                BoundsService(),
                OdeService(),
                HolderService(),
                MeasureService(),
            )
        }
        self.logger = logger

    def service(self, command: str) -> LabService:
        if command not in self.services:
            raise ConfigError(
                f"unknown command {command!r} (expected one of "
                f"{', '.join(COMMANDS)})"
            )
        return self.services[command]

    def execute(self, config: RunConfig, command: str) -> RunOutcome:
        """Run one subcommand without writing anything."""
        return self.service(command).run(config)

    def run(
        self, config: RunConfig, command: Optional[str] = None
    ) -> RunOutcome:
        """Run one subcommand and write its artifacts under config.out."""
        outcome = self.execute(config, command or config.sweep_target)
        write_artifacts(config, outcome)
        return outcome

    def sweep(self, config: RunConfig) -> pd.DataFrame:
        """Run config.sweep_target over the cartesian sweep grid."""
        service = self.service(config.sweep_target)
        return run_sweep(config, service.run)
