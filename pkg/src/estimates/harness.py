from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.common.errors import LabError
from src.flow.engine import evolve
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import FlowTrajectory
from src.geometry.anisotropy import AnisotropyField
from src.geometry.curvature import curvature
from src.geometry.shape import diameter
from src.geometry.support import SupportFunction
from src.schemas.reports import BoundReport

DEFAULT_WINDOW = (1e-3, 1e-1)
DEFAULT_RATIO_CAP = 10.0
MIN_FIT_SAMPLES = 8


class RegimeViolationError(LabError):
    """Raised when a principal curvature bound is asked for outside
    n >= 2, alpha <= 1/(n-1)"""

    pass


class OriginNotInteriorError(LabError):
    """Raised when the origin is not strictly inside the body"""

    pass


class DegenerateWindowError(LabError):
    """Raised when a fit window holds too few or nonpositive samples"""

    pass


class ExponentFit(NamedTuple):
    window: Tuple[float, float]
    slope: float
    intercept: float
    residual: float
    samples: int


def normalized_series(times, values, exponent: float) -> np.ndarray:
    """q(t) = v(t) / (1 + t^-beta); q(0) = 0."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        return v / (1.0 + t ** (-exponent))


def _absolute_window(
    trajectory: FlowTrajectory,
    window: Tuple[float, float],
    absolute: bool,
) -> Tuple[float, float]:
    lo, hi = window
    if not 0.0 <= lo < hi:
        raise ValueError(f"bad window {window}")
    if absolute:
        return float(lo), float(hi)
    t_ref = trajectory.reference_time
    return lo * t_ref, hi * t_ref


def bound_report(
    trajectory: FlowTrajectory,
    series: str,
    exponent: float,
    bound_id: str,
    window: Tuple[float, float] = DEFAULT_WINDOW,
    ratio_cap: float = DEFAULT_RATIO_CAP,
    absolute_window: bool = False,
) -> BoundReport:
    """
    Normalise a diagnostic series by (1 + t^-beta) over a window and
    call it bounded when sup q <= ratio_cap * median q. The window is a
    fraction of the reference time unless absolute_window is set.
    """
    lo, hi = _absolute_window(trajectory, window, absolute_window)
    times = trajectory.times
    mask = (times > 0.0) & (times >= lo) & (times <= hi)
    if mask.sum() < 3:
        raise DegenerateWindowError(
            f"{bound_id}: {int(mask.sum())} snapshots in [{lo:.3g}, {hi:.3g}]"
        )
    t = times[mask]
    v = trajectory.series(series)[mask]
    q = normalized_series(t, v, exponent)
    sup_q = float(q.max())
    median_q = float(np.median(q))
    verdict = "bounded" if sup_q <= ratio_cap * median_q else "unbounded"
    logger.debug(
        "{}: beta={:.4g} sup q={:.4g} median q={:.4g} -> {}",
        bound_id,
        exponent,
        sup_q,
        median_q,
        verdict,
    )
    return BoundReport(
        bound_id=bound_id,
        exponent=exponent,
        sup_q=sup_q,
        median_q=median_q,
        verdict=verdict,
        window=(lo, hi),
        ratio_cap=ratio_cap,
        times=t.tolist(),
        values=v.tolist(),
        q=q.tolist(),
    )


def gauss_exponent(params: FlowParams) -> float:
    return params.n / params.homogeneity


def lambda_exponent(params: FlowParams) -> float:
    return (2.0 + params.alpha) / (params.homogeneity * params.alpha)


def viscosity_lambda_exponent(params: FlowParams) -> float:
    return (1.0 + params.alpha) / (params.n * params.alpha**2)


def _check_regime(params: FlowParams) -> None:
    if params.n < 2 or params.alpha > 1.0 / (params.n - 1):
        raise RegimeViolationError(
            f"principal curvature bound needs n >= 2 and alpha <= 1/(n-1), "
            f"got n={params.n}, alpha={params.alpha:g}"
        )


def verify_gauss_bound(
    trajectory: FlowTrajectory, params: FlowParams, **kwargs
) -> BoundReport:
    """K_max(t) <= C (1 + t^(-n/(n alpha + 1)))"""
    return bound_report(
        trajectory, "K_max", gauss_exponent(params), "gauss", **kwargs
    )


def verify_lambda_bound(
    trajectory: FlowTrajectory, params: FlowParams, **kwargs
) -> BoundReport:
    """lambda_max(t) <= C (1 + t^(-(2 + alpha)/((n alpha + 1) alpha)))"""
    _check_regime(params)
    return bound_report(
        trajectory, "lambda_max", lambda_exponent(params), "lambda", **kwargs
    )


def verify_viscosity_lambda_bound(
    trajectory: FlowTrajectory, params: FlowParams, **kwargs
) -> BoundReport:
    """The weaker rate (1 + alpha)/(n alpha^2) that survives the limit to
    viscosity solutions from arbitrary convex bodies."""
    _check_regime(params)
    return bound_report(
        trajectory,
        "lambda_max",
        viscosity_lambda_exponent(params),
        "lambda_viscosity",
        **kwargs,
    )


def fit_exponent(times, values) -> ExponentFit:
    """Least-squares slope of log v against log t."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(t) < MIN_FIT_SAMPLES:
        raise DegenerateWindowError(
            f"{len(t)} samples, need at least {MIN_FIT_SAMPLES}"
        )
    if np.any(t <= 0.0) or np.any(v <= 0.0):
        raise DegenerateWindowError("log-log fit needs positive data")
    x, y = np.log(t), np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return ExponentFit(
        window=(float(t.min()), float(t.max())),
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        samples=len(t),
    )


def make_soliton_field(u0: SupportFunction, p: float) -> AnisotropyField:
    """
    The density f = det(u_ij + u delta_ij) u^(1-p) for which u0 solves
    the Lp Minkowski problem, tabulated on u0's grid.
    """
    if u0.min() <= 1e-12 * diameter(u0):
        raise OriginNotInteriorError(
            f"min u = {u0.min():.3e}: origin is not inside the body"
        )
    curv = curvature(u0)
    values = curv.radius_product * u0.values ** (1.0 - p)
    return AnisotropyField.tabulated(u0.grid, values)


def soliton_scale(params: FlowParams, t) -> np.ndarray:
    """a(t) = (1 - (n alpha + 1) t)^(1/(n alpha + 1))"""
    q = params.homogeneity
    return np.maximum(1.0 - q * np.asarray(t, dtype=float), 0.0) ** (1.0 / q)


@dataclass
class SolitonReport:
    p: float
    alpha: float
    max_deviation: float
    times: np.ndarray
    scales: np.ndarray
    deviations: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"t": self.times, "a": self.scales, "deviation": self.deviations}
        )


def soliton_selfsimilarity_check(
    u0: SupportFunction,
    p: float,
    control: StepControl,
    trajectory: Optional[FlowTrajectory] = None,
) -> SolitonReport:
    """
    Flow u0 by f^alpha K^alpha with alpha = 1/(1-p), f the density that
    makes u0 a solution, and compare each snapshot with a(t) u0.
    """
    if not p < 1.0:
        raise ValueError(f"soliton check needs p < 1, got {p}")
    alpha = 1.0 / (1.0 - p)
    field = make_soliton_field(u0, p).power(alpha)
    params = FlowParams(u0.dimension, alpha, field)
    t_cap = 0.5 / params.homogeneity
    if control.t_end > t_cap:
        control = replace(control, t_end=t_cap)
    if trajectory is None:
        trajectory = evolve(u0, params, control)

    times = trajectory.times
    scales = soliton_scale(params, times)
    width = diameter(u0)
    deviations = np.array(
        [
            float(np.max(np.abs(state.values - a * u0.values))) / width
            for state, a in zip(trajectory.states, scales)
        ]
    )
    report = SolitonReport(
        p=p,
        alpha=alpha,
        max_deviation=float(deviations.max()),
        times=times,
        scales=scales,
        deviations=deviations,
    )
    logger.info(
        "soliton p={:g}: max |u - a u0| / diam = {:.3e} over {} snapshots",
        p,
        report.max_deviation,
        len(times),
    )
    return report
