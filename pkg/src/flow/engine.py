import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from src.common.errors import LabError
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import FlowTrajectory, SnapshotDiagnostics
from src.geometry.curvature import (
    CurvatureData,
    NonConvexError,
    PoleSingularError,
    curvature,
)
from src.geometry.measures import enclosed_volume
from src.geometry.shape import chebyshev_center, diameter, inradius_lower_bound
from src.geometry.support import SupportFunction


class StepRejectedError(LabError):
    """Raised when a time step leaves the strictly convex set"""

    pass


class StalledError(LabError):
    """Raised when repeated rejections drive dt below the underflow floor"""

    pass


def _check_dimension(u: SupportFunction, params: FlowParams) -> None:
    if u.dimension != params.n:
        raise ValueError(
            f"support function lives on S^{u.dimension}, flow expects n={params.n}"
        )


def attach_speed(
    u: SupportFunction, params: FlowParams, curv: Optional[CurvatureData] = None
) -> CurvatureData:
    """Curvature of u with F = f(nu) K^alpha filled in."""
    curv = curv if curv is not None else curvature(u)
    f = params.field.on_grid(u.grid)
    return curv.with_speed(f * curv.gauss**params.alpha)


def flow_speed(u: SupportFunction, params: FlowParams) -> np.ndarray:
    """F = f(nu) K^alpha at every node."""
    _check_dimension(u, params)
    return attach_speed(u, params).speed


def _advance(
    u: SupportFunction, params: FlowParams, dt: float, speed: np.ndarray
) -> Tuple[SupportFunction, CurvatureData]:
    """Explicit midpoint step; both stages must stay strictly convex."""
    try:
        mid = u.with_values(u.values - 0.5 * dt * speed)
        mid_speed = attach_speed(mid, params).speed
        new = u.with_values(u.values - dt * mid_speed)
        new_curv = attach_speed(new, params)
    except (NonConvexError, PoleSingularError) as e:
        raise StepRejectedError(f"dt={dt:.3e}: {e}") from e
    return new, new_curv


def step(
    u: SupportFunction,
    params: FlowParams,
    dt: float,
    safety: float = StepControl.safety,
) -> SupportFunction:
    """
    One RK2 (midpoint) step of d_t u = -F. The step must satisfy the
    speed condition dt max F <= safety * inradius; larger steps are
    rejected before any stage is taken.
    """
    _check_dimension(u, params)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    speed = flow_speed(u, params)
    radius = chebyshev_center(u).radius
    if dt * float(speed.max()) > safety * radius:
        raise StepRejectedError(
            f"dt={dt:.3e} moves the boundary by {dt * float(speed.max()):.3e}, "
            f"more than {safety:g} x inradius {radius:.3e}"
        )
    new, _ = _advance(u, params, dt, speed)
    return new


def stable_dt(
    u: SupportFunction,
    curv: CurvatureData,
    params: FlowParams,
    control: StepControl,
    radius: float,
) -> float:
    """
    Largest admissible step: the speed condition dt max F <= safety * r
    and the explicit-diffusion limit dt max D <= nu h^2, with
    D = alpha F H the diffusion coefficient of the linearised flow.
    """
    speed = curv.speed
    dt_speed = control.safety * radius / float(speed.max())
    diffusion = params.alpha * speed * curv.mean
    dt_diffusion = (
        control.diffusion_number * u.grid.spacing**2 / float(diffusion.max())
    )
    return min(control.max_dt, dt_speed, dt_diffusion)


def barrier_time(params: FlowParams, rho0: float) -> float:
    """
    Extinction time rho0^(n alpha + 1) / ((n alpha + 1) max f) of the
    ball B_rho0 moving by rho' = -(max f) rho^(-n alpha).
    """
    if not rho0 > 0:
        raise ValueError("rho0 must be positive")
    q = params.homogeneity
    return rho0**q / (q * params.field.max_on_sphere(params.sphere_kind))


def _diagnostics(
    u: SupportFunction, curv: CurvatureData, t: float, radius: float, on_cadence: bool
) -> SnapshotDiagnostics:
    return SnapshotDiagnostics(
        t=t,
        lambda_max=curv.lambda_max,
        K_max=curv.gauss_max,
        inradius=radius,
        diameter=diameter(u),
        F_max=float(curv.speed.max()),
        volume=enclosed_volume(u),
        on_cadence=on_cadence,
    )


def evolve(
    u0: SupportFunction, params: FlowParams, control: StepControl
) -> FlowTrajectory:
    """
    Integrate d_t u = -f K^alpha from u0 until t_end or until the
    inradius drops below min_radius_stop. Snapshots land exactly on
    snapshot_count uniform times; dt is halved on rejection and grows by
    dt_growth after every accepted step.
    """
    _check_dimension(u0, params)
    t_end = control.t_end
    snap_times = np.linspace(0.0, t_end, control.snapshot_count + 1)
    floor = 1e-14 * t_end

    u = u0
    curv = attach_speed(u0, params)
    ball = chebyshev_center(u0)
    trajectory = FlowTrajectory(u0.grid)
    trajectory.append(u0, _diagnostics(u0, curv, 0.0, ball.radius, True))

    logger.info(
        "🚀 evolving n={} alpha={:g} f={} on {} nodes to t={:g}",
        params.n,
        params.alpha,
        params.field.describe(),
        u0.grid.node_count,
        t_end,
    )
    t = 0.0
    k = 1
    dt_prev = control.initial_dt
    dt_cap = math.inf
    accepted = 0
    rejected = 0
    while k < len(snap_times):
        radius = inradius_lower_bound(u, ball.center)
        if radius < control.min_radius_stop:
            ball = chebyshev_center(u)
            radius = ball.radius
            if radius < control.min_radius_stop:
                # a snapshot may already sit at t
                if t > trajectory.diagnostics[-1].t:
                    trajectory.append(
                        u, _diagnostics(u, curv, t, radius, False)
                    )
                trajectory.extinction_time = t
                trajectory.terminated_by = "min_radius"
                break

        dt = min(stable_dt(u, curv, params, control, radius), dt_cap)
        if dt_prev is not None:
            dt = min(dt, control.dt_growth * dt_prev)
        remaining = snap_times[k] - t
        landing = dt >= remaining
        planned = dt
        dt = min(dt, remaining)

        try:
            u_next, curv_next = _advance(u, params, dt, curv.speed)
        except StepRejectedError as e:
            rejected += 1
            dt_cap = 0.5 * dt
            logger.debug("step rejected at t={:.6g}: {}", t, e)
            if dt_cap < floor:
                raise StalledError(
                    f"dt fell below {floor:.3e} at t={t:.6g} after "
                    f"{rejected} rejections"
                ) from e
            continue

        accepted += 1
        dt_cap = math.inf
        # growth is measured from the step before snapshot clipping
        dt_prev = planned
        u, curv = u_next, curv_next
        if landing:
            t = float(snap_times[k])
            ball = chebyshev_center(u)
            trajectory.append(u, _diagnostics(u, curv, t, ball.radius, True))
            k += 1
        else:
            t += dt

    logger.info(
        "✅ flow stopped at t={:.6g} ({}), {} steps accepted, {} rejected",
        t,
        trajectory.terminated_by,
        accepted,
        rejected,
    )
    return trajectory
