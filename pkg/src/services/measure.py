import numpy as np
import pandas as pd

from src.cli.config import RunConfig
from src.minkowski.picard import solve_profile
from src.regularity.bodies import (
    build_glued_body,
    cap_density_residuals,
    flat_part_measure_check,
)
from src.regularity.chou_wang import chou_wang_example
from src.services.base import LabService, RunOutcome
from src.services.builders import build_ode_params


class MeasureService(LabService):
    """
    Glue the solved profile into a closed body, recover its density and
    measure how much Lp mass the flat bottom carries.
    """

    command = "measure"

    def _run(self, config: RunConfig) -> RunOutcome:
        params = build_ode_params(config)
        if params.p > 1.0:
            raise ValueError(
                f"flat part has infinite Lp mass for p={params.p:g} > 1"
            )
        profile = solve_profile(params, config.r0, config.tol, config.mesh)
        body = build_glued_body(profile)
        density = body.recover_density(params.p)
        density_error = float(np.max(np.abs(density - 1.0)))
        flat = flat_part_measure_check(body, params.p, config.cap_angles)

        outcome = RunOutcome(command=self.command)
        outcome.checks["density"] = density_error <= config.residual_tol
        if params.p < 1.0:
            outcome.checks["flat_ratio"] = flat.ratio <= config.flat_tol
            outcome.checks["caps_decreasing"] = flat.decreasing
        else:
            outcome.checks["flat_mass"] = body.flat_mass(params.p) > 0.0
        outcome.results.update(
            {
                "p": params.p,
                "r0": profile.r0,
                "density_error": density_error,
                "flat_mass": body.flat_mass(params.p),
                "total_mass": flat.total,
                "flat_ratio": flat.ratio,
                "junction": body.junction._asdict(),
            }
        )

        if config.holder_source == "chou_wang":
            local = cap_density_residuals(
                chou_wang_example(params.n, params.p)
            )
            outcome.results["local_max_relative"] = local.max_relative

        outcome.tables["body"] = body.to_frame()
        outcome.tables["caps"] = pd.DataFrame(
            {"cap_angle": flat.cap_angles, "mass": flat.masses}
        )
        return outcome
