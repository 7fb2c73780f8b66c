import json

import numpy as np
import pytest

from src.estimates.harness import (
    DegenerateWindowError,
    OriginNotInteriorError,
    RegimeViolationError,
    fit_exponent,
    gauss_exponent,
    lambda_exponent,
    make_soliton_field,
    normalized_series,
    soliton_scale,
    soliton_selfsimilarity_check,
    verify_gauss_bound,
    verify_lambda_bound,
    verify_viscosity_lambda_bound,
    viscosity_lambda_exponent,
)
from src.flow.engine import evolve
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import round_trajectory
from src.geometry.anisotropy import AnisotropyField
from src.geometry.support import SupportFunction


def test_exponents():
    params = FlowParams(n=2, alpha=0.5)
    assert gauss_exponent(params) == pytest.approx(1.0)
    assert lambda_exponent(params) == pytest.approx(2.5)
    assert viscosity_lambda_exponent(params) == pytest.approx(3.0)


def test_normalized_series():
    q = normalized_series([1.0, 4.0], [2.0, 3.0], 0.5)
    assert np.allclose(q, [1.0, 2.0])


def test_gauss_bound_on_round_circle(circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.4, 201)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    report = verify_gauss_bound(trajectory, curve_shortening)

    assert report.bounded
    assert report.exponent == pytest.approx(0.5)
    assert report.window == pytest.approx((4e-4, 4e-2))
    assert np.all(np.diff(report.q) > 0.0)
    assert set(json.loads(report.to_json())) == {
        "bound_id",
        "exponent",
        "median_q",
        "sup_q",
        "verdict",
        "window",
    }


def test_principal_bounds_on_round_sphere(sphere_grid):
    params = FlowParams(n=2, alpha=0.5)
    times = np.linspace(0.0, 0.4, 201)
    trajectory = round_trajectory(sphere_grid, params, 1.0, times)
    assert verify_lambda_bound(trajectory, params).bounded
    report = verify_viscosity_lambda_bound(trajectory, params)
    assert report.bound_id == "lambda_viscosity"
    assert report.bounded


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_curvature_bounds_on_tilted_spheroid(sphere_grid, alpha):
    field = AnisotropyField.linear_axis(0.1)
    params = FlowParams(2, alpha, field, principal_regime=True)
    u0 = SupportFunction.spheroid(sphere_grid, 1.0, 2.0)
    control = StepControl(t_end=0.2, snapshot_count=200)
    trajectory = evolve(u0, params, control)
    assert trajectory.terminated_by == "t_end"

    reports = [
        verify_gauss_bound(trajectory, params),
        verify_lambda_bound(trajectory, params),
        verify_viscosity_lambda_bound(trajectory, params),
    ]
    for report in reports:
        assert report.bounded
        assert report.sup_q <= 10.0 * report.median_q
        assert report.window == pytest.approx((2e-4, 2e-2))


def test_principal_bounds_outside_regime(circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.4, 201)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    with pytest.raises(RegimeViolationError):
        verify_lambda_bound(trajectory, curve_shortening)


def test_narrow_window_is_degenerate(circle_grid, curve_shortening):
    times = np.linspace(0.0, 0.4, 11)
    trajectory = round_trajectory(circle_grid, curve_shortening, 1.0, times)
    with pytest.raises(DegenerateWindowError):
        verify_gauss_bound(trajectory, curve_shortening)


def test_fit_exponent():
    t = np.geomspace(1e-3, 1e-1, 20)
    fit = fit_exponent(t, 3.0 * t**-2.0)
    assert fit.slope == pytest.approx(-2.0)
    assert np.exp(fit.intercept) == pytest.approx(3.0)
    assert fit.residual < 1e-12
    with pytest.raises(DegenerateWindowError):
        fit_exponent(t[:3], t[:3])
    with pytest.raises(DegenerateWindowError):
        fit_exponent(t, -t)


def test_soliton_field_of_unit_ball(circle_grid):
    field = make_soliton_field(SupportFunction.ball(circle_grid, 1.0), 0.0)
    assert np.allclose(field.on_grid(circle_grid), 1.0)
    moved = SupportFunction.ball(circle_grid, 1.0, center=[1.5, 0.0])
    with pytest.raises(OriginNotInteriorError):
        make_soliton_field(moved, 0.0)


def test_soliton_scale():
    params = FlowParams(n=1, alpha=1.0)
    assert soliton_scale(params, 0.0) == pytest.approx(1.0)
    assert soliton_scale(params, 0.375) == pytest.approx(0.5)
    assert soliton_scale(params, 1.0) == pytest.approx(0.0)


@pytest.mark.parametrize("p", [0.0, -1.0, 0.5])
def test_ellipse_shrinks_self_similarly(ellipse, p):
    control = StepControl(t_end=1.0, snapshot_count=40)
    report = soliton_selfsimilarity_check(ellipse, p, control)
    alpha = 1.0 / (1.0 - p)
    assert report.alpha == pytest.approx(alpha)
    # the run is capped at half the self-similar extinction time
    assert report.times[-1] == pytest.approx(0.5 / (alpha + 1.0))
    assert report.max_deviation < 1e-3
    assert list(report.to_frame().columns) == ["t", "a", "deviation"]


def test_translated_circle_shrinks_self_similarly(circle_grid):
    u0 = SupportFunction.from_function(
        circle_grid, lambda t: 1.0 + 0.2 * np.cos(t)
    )
    control = StepControl(t_end=1.0, snapshot_count=40)
    report = soliton_selfsimilarity_check(u0, 0.0, control)
    assert report.alpha == pytest.approx(1.0)
    assert report.times[-1] == pytest.approx(0.25)
    assert report.max_deviation < 1e-3


def test_spheroid_shrinks_self_similarly(sphere_grid):
    u0 = SupportFunction.spheroid(sphere_grid, 1.0, 1.5)
    control = StepControl(t_end=1.0, snapshot_count=40)
    report = soliton_selfsimilarity_check(u0, -1.0, control)
    assert report.alpha == pytest.approx(0.5)
    # 0.5 / (n alpha + 1) with n = 2
    assert report.times[-1] == pytest.approx(0.25)
    assert report.max_deviation < 1e-3
    assert np.all(np.diff(report.scales) < 0.0)


def test_soliton_needs_p_below_one(ellipse):
    with pytest.raises(ValueError):
        soliton_selfsimilarity_check(ellipse, 1.0, StepControl(t_end=0.1))


if __name__ == "__main__":
    pytest.main()
