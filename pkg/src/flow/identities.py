from dataclasses import replace
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from loguru import logger

from src.common.errors import LabError
from src.flow.engine import attach_speed, evolve
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import FlowTrajectory
from src.geometry.curvature import axisym_derivatives
from src.geometry.support import SupportFunction


class InsufficientSnapshotsError(LabError):
    """Raised when fewer than three uniformly spaced snapshots are available"""

    pass


class IdentityReport(NamedTuple):
    """
    Normalised residuals of the metric identity d_t g = -2F h (meridian
    and, on S^2, parallel component) and of d_t F = LF + alpha F^2 H.
    """

    meridian: float
    parallel: Optional[float]
    speed: float
    snapshots_used: int

    @property
    def metric(self) -> float:
        if self.parallel is None:
            return self.meridian
        return max(self.meridian, self.parallel)


class RefinementStudy(NamedTuple):
    reports: List[IdentityReport]
    metric_order: float
    speed_order: float


def _angular_operators(values: np.ndarray, u: SupportFunction):
    """(F_tt) on S^1, or (F_pp, cot(p) F_p) on S^2, for a nodal field."""
    h = u.grid.spacing
    if u.grid.is_circle:
        second = (np.roll(values, -1) - 2.0 * values + np.roll(values, 1)) / h**2
        return (second,)
    d1, d2 = axisym_derivatives(values, h)
    cot_term = np.empty_like(values)
    cot_term[1:-1] = d1[1:-1] / np.tan(u.grid.angles[1:-1])
    cot_term[0] = d2[0]
    cot_term[-1] = d2[-1]
    return d2, cot_term


def verify_evolution_identities(
    trajectory: FlowTrajectory,
    params: FlowParams,
    until: Optional[float] = None,
) -> IdentityReport:
    """
    In the fixed-normal gauge the radii satisfy d_t r_a = -(L_a F) with
    L_1 = d^2 + 1 and, on S^2, L_2 = cot(phi) d + 1, and the speed
    satisfies d_t F = alpha F sum_a (L_a F - F) / r_a + alpha F^2 H.
    Time derivatives are central differences over on-cadence snapshots
    (those with t <= until, when given); pole nodes are left out on S^2.
    """
    idx = trajectory.cadence_indices()
    if until is not None:
        idx = idx[trajectory.times[idx] <= until]
    if len(idx) < 3:
        raise InsufficientSnapshotsError(
            f"need 3 uniformly spaced snapshots, have {len(idx)}"
        )
    times = trajectory.times[idx]
    gaps = np.diff(times)
    if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0):
        raise InsufficientSnapshotsError("snapshot cadence is not uniform")

    states = [trajectory.states[i] for i in idx]
    curvs = [attach_speed(u, params) for u in states]
    interior = slice(None) if states[0].grid.is_circle else slice(1, -1)

    meridian = 0.0
    parallel = None if states[0].grid.is_circle else 0.0
    speed_res = 0.0
    for i in range(1, len(states) - 1):
        width = times[i + 1] - times[i - 1]
        u, curv = states[i], curvs[i]
        F = curv.speed
        ops = _angular_operators(F, u)
        dr_dt = (curvs[i + 1].radii - curvs[i - 1].radii) / width
        dF_dt = (curvs[i + 1].speed - curvs[i - 1].speed) / width

        scale_F = float(np.max(np.abs(F)))
        metric = [dr_dt[:, a] + ops[a] + F for a in range(len(ops))]
        meridian = max(
            meridian, float(np.max(np.abs(metric[0][interior]))) / scale_F
        )
        if parallel is not None:
            parallel = max(
                parallel, float(np.max(np.abs(metric[1][interior]))) / scale_F
            )

        reaction = params.alpha * F**2 * curv.mean
        diffusion = params.alpha * F * sum(
            ops[a] / curv.radii[:, a] for a in range(len(ops))
        )
        residual = dF_dt - diffusion - reaction
        speed_res = max(
            speed_res,
            float(np.max(np.abs(residual[interior])))
            / float(np.max(np.abs(reaction))),
        )

    report = IdentityReport(meridian, parallel, speed_res, len(states) - 2)
    logger.debug("evolution identity residuals: {}", report)
    return report


def identity_convergence_order(residuals: Sequence[float]) -> float:
    """Mean observed order log2(e_k / e_{k+1}) over successive halvings."""
    r = np.asarray(residuals, dtype=float)
    if len(r) < 2:
        raise ValueError("need at least two refinement levels")
    return float(np.mean(np.log2(r[:-1] / r[1:])))


def identity_refinement_study(
    u0: SupportFunction,
    params: FlowParams,
    control: StepControl,
    levels: int = 3,
) -> RefinementStudy:
    """Halve the snapshot cadence and max_dt `levels - 1` times."""
    reports = []
    for level in range(levels):
        refined = replace(
            control,
            snapshot_count=control.snapshot_count * 2**level,
            max_dt=control.max_dt / 2**level,
        )
        trajectory = evolve(u0, params, refined)
        reports.append(verify_evolution_identities(trajectory, params))
    return RefinementStudy(
        reports=reports,
        metric_order=identity_convergence_order([r.metric for r in reports]),
        speed_order=identity_convergence_order([r.speed for r in reports]),
    )
