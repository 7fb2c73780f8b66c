from typing import Iterable, Optional

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from src.estimates.harness import ExponentFit
from src.flow.trajectory import FlowTrajectory
from src.minkowski.picard import RadialProfile
from src.schemas.reports import BoundReport, HolderEstimate

matplotlib.use("Agg")
# fixed ids keep SVG output byte-identical between runs
matplotlib.rcParams["svg.hashsalt"] = "gcf-lab"


def _figure(title: str, xlabel: str, ylabel: str):
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.subplots()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def curvature_plot(trajectory: FlowTrajectory) -> Figure:
    fig, ax = _figure("curvature along the flow", "t", "max curvature")
    t = trajectory.times
    keep = t > 0.0
    ax.loglog(t[keep], trajectory.series("K_max")[keep], label="K_max")
    ax.loglog(
        t[keep], trajectory.series("lambda_max")[keep], "--", label="lambda_max"
    )
    ax.legend()
    return fig


def bound_plot(
    reports: Iterable[BoundReport], fits: Optional[dict] = None
) -> Figure:
    fig, ax = _figure("curvature bounds", "t", "value")
    fits = fits or {}
    for report in reports:
        t = np.asarray(report.times)
        ax.loglog(t, report.values, "o", ms=3, label=report.bound_id)
        ax.loglog(
            t,
            report.median_q * (1.0 + t ** (-report.exponent)),
            ":",
            label=f"C(1 + t^-{report.exponent:.3g})",
        )
        fit: Optional[ExponentFit] = fits.get(report.bound_id)
        if fit is not None:
            ax.loglog(
                t,
                np.exp(fit.intercept) * t**fit.slope,
                "-",
                label=f"fit slope {fit.slope:.3f}",
            )
    ax.legend(fontsize="small")
    return fig


def profile_plot(profile: RadialProfile) -> Figure:
    fig, ax = _figure("radial profile", "h", "|w|")
    h, _, _ = profile.model()
    ax.loglog(h, np.abs(profile.w), label="|w|")
    ax.loglog(h, h, ":", label="h")
    ax.legend()
    return fig


def holder_plot(r, v_r, estimate: HolderEstimate) -> Figure:
    fig, ax = _figure(
        f"Hölder fit: C^({estimate.k},{estimate.gamma:.3g})", "r", "v_r"
    )
    r = np.asarray(r, dtype=float)
    ax.loglog(r, v_r, label="v_r")
    lo, hi = estimate.window
    x = np.geomspace(lo, hi, 64)
    ax.loglog(
        x,
        np.exp(estimate.intercept) * x**estimate.slope,
        "--",
        label=f"slope {estimate.slope:.4f}",
    )
    ax.legend()
    return fig
