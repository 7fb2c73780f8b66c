from src.cli.config import RunConfig
from src.cli.plots import profile_plot
from src.minkowski.lemmas import lemma_bound_fits
from src.minkowski.picard import ode_residual, solve_profile
from src.services.base import LabService, RunOutcome
from src.services.builders import build_ode_params


class OdeService(LabService):
    """Solve the radial profile by contraction and certify it"""

    command = "ode"

    def _run(self, config: RunConfig) -> RunOutcome:
        params = build_ode_params(config)
        profile = solve_profile(params, config.r0, config.tol, config.mesh)
        residual = ode_residual(profile)
        fits = lemma_bound_fits(params, profile.mesh)
        log = profile.log

        accepted = [it for it in log.iterations if it.r0 == log.r0]
        outcome = RunOutcome(command=self.command)
        outcome.checks["certified"] = log.certified
        outcome.checks["ode_residual"] = residual <= config.residual_tol
        outcome.results.update(
            {
                "n": params.n,
                "p": params.p,
                "m": params.m,
                "delta": params.delta,
                "r0": log.r0,
                "restarts": len(log.restarts),
                "iterations": len(accepted),
                "c0": log.c0,
                "certificate": log.certificate,
                "certificate_limit": params.certificate_limit,
                "ode_residual": residual,
                "lemma_c1": fits.c1,
                "lemma_c2": fits.c2,
                "lemma_c3": fits.c3,
            }
        )
        outcome.tables["profile"] = profile.to_frame()
        outcome.documents["convergence_log"] = log.json(
            sort_keys=True, indent=2
        )
        if config.plots:
            outcome.figures["profile"] = profile_plot(profile)
        return outcome
