from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import pandas as pd
from loguru import logger
from matplotlib.figure import Figure

from src.cli.config import RunConfig
from src.common.errors import ConfigError, LabError, PipelineError
from src.flow.trajectory import FlowTrajectory

MODULE_NAMES = {
    "src.geometry": "geometry_core",
    "src.flow": "flow_engine",
    "src.estimates": "estimates_harness",
    "src.minkowski": "minkowski_ode",
    "src.regularity": "regularity_analysis",
}


def module_of(error: Exception) -> str:
    """Lab module an exception class was raised from."""
    origin = type(error).__module__
    for prefix, name in MODULE_NAMES.items():
        if origin.startswith(prefix):
            return name
    return "cli"


@dataclass
class RunOutcome:
    """Checks, results and artifacts produced by one subcommand."""

    command: str
    checks: Dict[str, bool] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    figures: Dict[str, Figure] = field(default_factory=dict)
    documents: Dict[str, str] = field(default_factory=dict)
    trajectory: Optional[FlowTrajectory] = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


class LabService:
    """Base class for subcommand services"""

    command = "lab"

    def __init__(self):
        self.logger = logger

    def _run(self, config: RunConfig) -> RunOutcome:
        raise NotImplementedError

    def run(self, config: RunConfig) -> RunOutcome:
        self.logger.info(f"🚀 {self.command}: starting (n={config.n})")
        try:
            outcome = self._run(config)
        except ConfigError:
            raise
        except ValueError as e:
            self.logger.error(f"❌ {self.command}: bad parameters: {e}")
            raise ConfigError(f"{self.command}: {e}") from e
        except LabError as e:
            module = module_of(e)
            self.logger.error(f"❌ {self.command}: {module} failed: {e}")
            raise PipelineError(str(e), module=module, cause=e) from e

        failed = sorted(k for k, ok in outcome.checks.items() if not ok)
        if failed:
            self.logger.warning(
                f"⚠️ {self.command}: checks failed: {', '.join(failed)}"
            )
        else:
            self.logger.info(
                f"✅ {self.command}: {len(outcome.checks)} checks passed"
            )
        return outcome
