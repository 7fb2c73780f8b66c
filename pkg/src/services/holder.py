import numpy as np
import pandas as pd

from src.cli.config import RunConfig
from src.cli.plots import holder_plot
from src.minkowski.picard import solve_profile
from src.regularity.chou_wang import chou_wang_example
from src.regularity.holder import holder_exponent
from src.services.base import LabService, RunOutcome
from src.services.builders import build_ode_params


class HolderService(LabService):
    """Estimate the Hölder class of a constructed solution"""

    command = "holder"

    def _samples(self, config: RunConfig, outcome: RunOutcome):
        if config.holder_source == "chou_wang":
            example = chou_wang_example(config.n, config.p)
            r = np.geomspace(1e-6, 1e-1, 401)
            outcome.checks["determinant"] = (
                example.determinant_residual(r) <= config.residual_tol
            )
            outcome.checks["legendre"] = (
                example.legendre_residual(r) <= config.residual_tol
            )
            return r, example.v_r(r), example.exponent
        params = build_ode_params(config)
        profile = solve_profile(params, config.r0, config.tol, config.mesh)
        _, v_r, _ = profile.v()
        return profile.r, v_r, params.holder_total

    def _run(self, config: RunConfig) -> RunOutcome:
        outcome = RunOutcome(command=self.command)
        r, v_r, predicted = self._samples(config, outcome)
        estimate = holder_exponent(r, v_r, snap_tol=config.snap_tol)

        outcome.checks["fit_accepted"] = estimate.accepted
        outcome.checks["matches_prediction"] = (
            abs(estimate.total - predicted) <= config.slope_tol
        )
        outcome.results.update(
            {
                "source": config.holder_source,
                "predicted_total": predicted,
                "class": estimate.label,
                **estimate.dict(),
            }
        )
        outcome.tables["holder"] = pd.DataFrame({"r": r, "v_r": v_r})
        if config.plots:
            outcome.figures["holder"] = holder_plot(r, v_r, estimate)
        return outcome
