from src.cli.config import RunConfig
from src.estimates.harness import soliton_selfsimilarity_check
from src.flow.params import StepControl
from src.services.base import LabService, RunOutcome
from src.services.builders import build_body, build_grid


class SolitonService(LabService):
    """Flow a manufactured Lp solution and compare with a(t) u0"""

    command = "soliton"

    def _run(self, config: RunConfig) -> RunOutcome:
        if not config.p < 1.0:
            raise ValueError(f"soliton runs need p < 1, got {config.p:g}")
        grid = build_grid(config)
        u0 = build_body(config, grid)
        control = StepControl(
            t_end=config.t_end or 1.0,
            safety=config.safety,
            max_dt=config.max_dt,
            min_radius_stop=config.min_radius,
            snapshot_count=config.snapshots,
            diffusion_number=config.diffusion_number,
        )
        # the check itself caps t_end at 0.5/(n alpha + 1)
        report = soliton_selfsimilarity_check(u0, config.p, control)

        outcome = RunOutcome(command=self.command)
        outcome.checks["self_similar"] = (
            report.max_deviation <= config.soliton_tol
        )
        outcome.results.update(
            {
                "p": report.p,
                "alpha": report.alpha,
                "max_deviation": report.max_deviation,
                "final_time": float(report.times[-1]),
                "final_scale": float(report.scales[-1]),
            }
        )
        outcome.tables["soliton"] = report.to_frame()
        return outcome
