import pandas as pd

from src.cli.config import RunConfig
from src.cli.plots import bound_plot, curvature_plot
from src.estimates.harness import (
    DegenerateWindowError,
    fit_exponent,
    verify_gauss_bound,
    verify_lambda_bound,
    verify_viscosity_lambda_bound,
)
from src.flow.engine import evolve
from src.services.base import LabService, RunOutcome
from src.services.builders import (
    build_body,
    build_control,
    build_flow_params,
    build_grid,
)


class BoundsService(LabService):
    """Run a flow and test the curvature bounds over an early window"""

    command = "bounds"

    def _run(self, config: RunConfig) -> RunOutcome:
        grid = build_grid(config)
        u0 = build_body(config, grid)
        params = build_flow_params(config)
        trajectory = evolve(u0, params, build_control(config, params, u0))

        options = dict(
            window=(config.window_lo, config.window_hi),
            ratio_cap=config.ratio_cap,
        )
        reports = [verify_gauss_bound(trajectory, params, **options)]
        if params.n >= 2 and params.alpha <= 1.0 / (params.n - 1):
            reports.append(verify_lambda_bound(trajectory, params, **options))
            reports.append(
                verify_viscosity_lambda_bound(trajectory, params, **options)
            )
        else:
            self.logger.info(
                f"principal curvature bound skipped for n={params.n}, "
                f"alpha={params.alpha:g}"
            )

        fits = {}
        for report in reports:
            try:
                fits[report.bound_id] = fit_exponent(report.times, report.values)
            except DegenerateWindowError as e:
                self.logger.warning(f"⚠️ no fit for {report.bound_id}: {e}")

        outcome = RunOutcome(command=self.command)
        table = pd.DataFrame({"t": reports[0].times})
        for report in reports:
            outcome.checks[report.bound_id] = report.bounded
            outcome.results[report.bound_id] = {
                "exponent": report.exponent,
                "sup_q": report.sup_q,
                "median_q": report.median_q,
                "verdict": report.verdict,
                "fitted_slope": getattr(fits.get(report.bound_id), "slope", None),
            }
            outcome.documents[f"bound_{report.bound_id}"] = report.to_json()
            table[report.bound_id] = report.values
            table[f"q_{report.bound_id}"] = report.q
        outcome.results["window"] = list(reports[0].window)
        outcome.tables["bounds"] = table
        if config.plots:
            outcome.figures["curvature"] = curvature_plot(trajectory)
            outcome.figures["bounds"] = bound_plot(reports, fits)
        return outcome
