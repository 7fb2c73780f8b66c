import numpy as np
import pytest

from src.flow.engine import (
    StepRejectedError,
    barrier_time,
    evolve,
    flow_speed,
    step,
)
from src.flow.identities import (
    InsufficientSnapshotsError,
    identity_convergence_order,
    identity_refinement_study,
    verify_evolution_identities,
)
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import (
    FlowTrajectory,
    TrajectoryInvariantError,
    round_radius,
    round_trajectory,
)
from src.geometry.anisotropy import AnisotropyField, FieldKind
from src.geometry.support import SupportFunction


def test_flow_params():
    assert FlowParams(n=2, alpha=0.5).p == pytest.approx(-1.0)
    assert FlowParams(n=2, alpha=0.5).homogeneity == pytest.approx(2.0)
    default = FlowParams(n=1, alpha=2.0)
    assert default.field.kind is FieldKind.CONSTANT
    assert default.p == pytest.approx(0.5)
    tilted = FlowParams(2, 1.0, AnisotropyField.linear_axis(0.1))
    assert tilted.field.kind is FieldKind.LINEAR_AXIS
    with pytest.raises(TypeError):
        FlowParams(n=1, alpha=1.0, p=0.0)
    with pytest.raises(ValueError):
        FlowParams(n=1, alpha=1.0, principal_regime=True)
    with pytest.raises(ValueError):
        FlowParams(n=3, alpha=1.0)
    with pytest.raises(ValueError):
        FlowParams(n=1, alpha=0.0)


def test_step_control_validation():
    with pytest.raises(ValueError):
        StepControl(t_end=1.0, safety=1.5)
    with pytest.raises(ValueError):
        StepControl(t_end=-1.0)
    scaled = StepControl(t_end=1.0, max_dt=0.1).scaled_time(4.0)
    assert scaled.t_end == pytest.approx(0.25)
    assert scaled.max_dt == pytest.approx(0.025)


def test_speed_of_ball(circle_grid, curve_shortening):
    u = SupportFunction.ball(circle_grid, 2.0)
    assert np.allclose(flow_speed(u, curve_shortening), 0.5)
    stepped = step(u, curve_shortening, 1e-3)
    assert stepped.max() < u.max()


def test_step_enforces_speed_condition(circle_grid, curve_shortening):
    # F = 1/2 on the ball of radius 2, so dt max F <= 0.05 * 2 means dt <= 0.2
    u = SupportFunction.ball(circle_grid, 2.0)
    with pytest.raises(StepRejectedError):
        step(u, curve_shortening, 0.25)
    with pytest.raises(ValueError):
        step(u, curve_shortening, 0.0)
    relaxed = step(u, curve_shortening, 0.25, safety=0.5)
    assert relaxed.max() == pytest.approx(
        round_radius(2.0, curve_shortening, 0.25), rel=1e-3
    )


def test_barrier_time(curve_shortening):
    assert barrier_time(curve_shortening, 1.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        barrier_time(curve_shortening, 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_round_circle_follows_closed_form(circle_grid, alpha):
    params = FlowParams(n=1, alpha=alpha)
    u0 = SupportFunction.ball(circle_grid, 1.0)
    # half the extinction time 1/(alpha + 1)
    t_end = 0.5 * barrier_time(params, 1.0)
    trajectory = evolve(u0, params, StepControl(t_end=t_end, snapshot_count=20))

    assert trajectory.terminated_by == "t_end"
    assert len(trajectory) == 21
    assert np.allclose(trajectory.times, np.linspace(0.0, t_end, 21))
    expected = round_radius(1.0, params, trajectory.times)
    assert np.allclose(trajectory.series("inradius"), expected, rtol=1e-3)
    assert trajectory.monotonicity_violations() == []


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_round_sphere_follows_closed_form(sphere_grid, alpha):
    params = FlowParams(n=2, alpha=alpha)
    u0 = SupportFunction.ball(sphere_grid, 1.0)
    t_end = 0.5 * barrier_time(params, 1.0)
    trajectory = evolve(u0, params, StepControl(t_end=t_end, snapshot_count=10))
    expected = round_radius(1.0, params, trajectory.times)
    assert np.allclose(trajectory.series("inradius"), expected, rtol=1e-3)
    radii = trajectory.states[-1].values
    assert np.allclose(radii, round_radius(1.0, params, t_end), rtol=1e-3)


def test_flow_stops_near_extinction(circle_grid, curve_shortening):
    u0 = SupportFunction.ball(circle_grid, 1.0)
    control = StepControl(t_end=1.0, snapshot_count=50, min_radius_stop=0.05)
    trajectory = evolve(u0, curve_shortening, control)

    assert trajectory.terminated_by == "min_radius"
    # rho^2 = 1 - 2t reaches 0.05^2 at t = 0.49875
    assert trajectory.extinction_time == pytest.approx(0.49875, abs=5e-3)
    assert trajectory.extinction_time < barrier_time(curve_shortening, 1.0)
    assert trajectory.monotonicity_violations() == []


def test_evolution_identities_on_ellipse(ellipse, curve_shortening):
    control = StepControl(t_end=0.5, snapshot_count=100)
    trajectory = evolve(ellipse, curve_shortening, control)
    report = verify_evolution_identities(
        trajectory, curve_shortening, until=0.5 * trajectory.reference_time
    )
    assert report.parallel is None
    assert report.metric < 5e-2
    assert report.speed < 5e-2
    assert report.snapshots_used > 10


def test_evolution_identities_need_three_snapshots(ellipse, curve_shortening):
    control = StepControl(t_end=0.1, snapshot_count=10)
    trajectory = evolve(ellipse, curve_shortening, control)
    with pytest.raises(InsufficientSnapshotsError):
        verify_evolution_identities(trajectory, curve_shortening, until=0.015)


def test_identity_convergence_order():
    assert identity_convergence_order([4e-2, 1e-2, 2.5e-3]) == pytest.approx(
        2.0
    )
    with pytest.raises(ValueError):
        identity_convergence_order([1e-2])


def test_identity_residuals_shrink_with_cadence(ellipse, curve_shortening):
    control = StepControl(t_end=0.2, snapshot_count=20)
    study = identity_refinement_study(ellipse, curve_shortening, control)
    assert len(study.reports) == 3
    metrics = [r.metric for r in study.reports]
    assert metrics[0] > metrics[1] > metrics[2]
    assert study.metric_order >= 1.0
    assert study.speed_order >= 1.0


def test_rescaled_round_trajectory(circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.4, 5)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    bigger = trajectory.rescaled(2.0, curve_shortening)
    # lengths scale by 2 and times by 2^(n alpha + 1) = 4
    assert np.allclose(bigger.times, 4.0 * times)
    assert np.allclose(
        bigger.series("inradius"), 2.0 * trajectory.series("inradius")
    )
    expected = round_radius(2.0, curve_shortening, bigger.times)
    assert np.allclose(bigger.series("inradius"), expected)


def test_trajectory_csv_columns(tmp_path, circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.1, 3)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    path = tmp_path / "trajectory.csv"
    trajectory.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == "t,lambda_max,K_max,inradius,diameter,F_max"
    paths = trajectory.dump_snapshots(tmp_path / "snapshots")
    assert len(paths) == 3


def test_validate_flags_growing_body(circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.2, 3)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    trajectory.validate()

    grown = FlowTrajectory(circle_grid)
    for state, diag in zip(trajectory.states, trajectory.diagnostics):
        grown.append(state, diag)
    grown.append(trajectory.states[0], trajectory.diagnostics[0])
    problems = grown.monotonicity_violations()
    assert any(p.startswith("diameter") for p in problems)
    assert any(p.startswith("time") for p in problems)
    with pytest.raises(TrajectoryInvariantError):
        grown.validate()


if __name__ == "__main__":
    pytest.main()
