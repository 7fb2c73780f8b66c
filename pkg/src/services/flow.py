from src.cli.config import RunConfig
from src.cli.plots import curvature_plot
from src.flow.engine import barrier_time, evolve
from src.flow.identities import verify_evolution_identities
from src.flow.trajectory import DIAGNOSTIC_COLUMNS
from src.geometry.shape import inradius
from src.services.base import LabService, RunOutcome
from src.services.builders import (
    build_body,
    build_control,
    build_flow_params,
    build_grid,
)


class FlowService(LabService):
    """Evolve one body and check the trajectory and its identities"""

    command = "flow"

    def _run(self, config: RunConfig) -> RunOutcome:
        grid = build_grid(config)
        u0 = build_body(config, grid)
        params = build_flow_params(config)
        control = build_control(config, params, u0)

        trajectory = evolve(u0, params, control)
        problems = trajectory.monotonicity_violations()
        for problem in problems[:5]:
            self.logger.warning(f"⚠️ {problem}")
        identities = verify_evolution_identities(
            trajectory, params, until=0.5 * trajectory.reference_time
        )

        outcome = RunOutcome(command=self.command, trajectory=trajectory)
        outcome.checks["monotone"] = not problems
        outcome.checks["identities"] = (
            max(identities.metric, identities.speed) <= config.identity_tol
        )
        outcome.results.update(
            {
                "t_end": control.t_end,
                "terminated_by": trajectory.terminated_by,
                "extinction_time": trajectory.extinction_time,
                "snapshots": len(trajectory),
                "inscribed_barrier_time": barrier_time(params, inradius(u0)),
                "identity_metric": identities.metric,
                "identity_speed": identities.speed,
                "identity_snapshots": identities.snapshots_used,
                "field": params.field.describe(),
            }
        )
        outcome.tables["trajectory"] = trajectory.to_frame()[
            DIAGNOSTIC_COLUMNS
        ]
        if config.plots:
            outcome.figures["curvature"] = curvature_plot(trajectory)
        return outcome
