import numpy as np
import pytest
from scipy.optimize import OptimizeResult

from src.geometry.anisotropy import AnisotropyField
from src.geometry.curvature import NonConvexError, curvature
from src.geometry.grid import GridSpec
from src.geometry.measures import (
    OriginOnBoundaryError,
    check_generalized_solution,
    enclosed_volume,
    inradius_bound_check,
    lp_measure,
    support_power,
    volume_bound_check,
)
from src.geometry.shape import (
    InscribedBallError,
    body_points,
    chebyshev_center,
    inradius,
    reconstruction_residual,
)
from src.geometry.support import SupportFunction


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec.circle(15)
    with pytest.raises(ValueError):
        GridSpec.axisymmetric(64)
    assert GridSpec.circle(64).refined().node_count == 128
    assert GridSpec.axisymmetric(65).refined().node_count == 129


def test_cell_areas_cover_the_sphere(circle_grid, sphere_grid):
    assert circle_grid.cell_areas().sum() == pytest.approx(2.0 * np.pi)
    assert sphere_grid.cell_areas().sum() == pytest.approx(4.0 * np.pi)


def test_support_values_are_read_only(ellipse):
    assert not ellipse.values.flags.writeable
    with pytest.raises(ValueError):
        ellipse.values[0] = 2.0


def test_ball_curvature(circle_grid, sphere_grid):
    data = curvature(SupportFunction.ball(circle_grid, 2.0))
    assert np.allclose(data.radii, 2.0)
    assert np.allclose(data.gauss, 0.5)

    data = curvature(SupportFunction.ball(sphere_grid, 1.0))
    assert np.allclose(data.radii, 1.0)
    assert np.allclose(data.mean, 2.0)


def test_spheroid_pole_gauss_curvature(sphere_grid):
    # polar semi-axis 1, equatorial 2: both pole radii are b^2/a = 4
    u = SupportFunction.spheroid(sphere_grid, 1.0, 2.0)
    data = curvature(u)
    assert data.gauss[0] == pytest.approx(1.0 / 16.0, rel=1e-2)
    assert data.gauss[-1] == pytest.approx(1.0 / 16.0, rel=1e-2)


def test_nonconvex_support_is_rejected(circle_grid):
    t = circle_grid.angles
    u = SupportFunction(circle_grid, 1.0 + 0.2 * np.cos(8 * t))
    with pytest.raises(NonConvexError):
        curvature(u)


def test_translation_moves_body_points(circle_grid):
    u = SupportFunction.ball(circle_grid, 1.0, center=[0.25, 0.0])
    points = body_points(u)
    assert np.allclose(points.mean(axis=0), [0.25, 0.0], atol=1e-3)
    assert inradius(u) == pytest.approx(1.0, abs=1e-9)


def test_reconstruction_residual(circle_grid):
    ball = SupportFunction.ball(circle_grid, 1.0)
    assert reconstruction_residual(ball) == pytest.approx(0.0, abs=1e-14)

    def shape(t):
        return np.sqrt((1.5 * np.cos(t)) ** 2 + np.sin(t) ** 2)

    grid = GridSpec.circle(128)
    coarse = reconstruction_residual(SupportFunction.from_function(grid, shape))
    fine = reconstruction_residual(
        SupportFunction.from_function(grid.refined(), shape)
    )
    assert coarse < 1e-2
    # second order in the grid spacing
    assert np.log2(coarse / fine) >= 1.9


def test_ellipse_inradius(ellipse):
    assert inradius(ellipse) == pytest.approx(1.0, abs=1e-2)


def test_failed_inscribed_ball_lp_raises(ellipse, monkeypatch):
    def infeasible(*args, **kwargs):
        return OptimizeResult(
            success=False, status=2, message="The problem is infeasible.", x=None
        )

    monkeypatch.setattr("src.geometry.shape.linprog", infeasible)
    with pytest.raises(InscribedBallError, match="infeasible"):
        chebyshev_center(ellipse)
    with pytest.raises(InscribedBallError):
        inradius(ellipse)


def test_ball_measures(circle_grid):
    u = SupportFunction.ball(circle_grid, 2.0)
    assert lp_measure(u, p=1.0).total == pytest.approx(4.0 * np.pi)
    assert enclosed_volume(u) == pytest.approx(4.0 * np.pi)


def test_unit_ball_solves_constant_density(circle_grid):
    u = SupportFunction.ball(circle_grid, 1.0)
    report = check_generalized_solution(u, AnisotropyField.constant(), 0.0)
    assert report.max_abs < 1e-12


def test_inequality_checks(ellipse, circle_grid):
    assert inradius_bound_check(ellipse, 0.0).holds
    ball = SupportFunction.ball(circle_grid, 1.0)
    check = volume_bound_check(ball, AnisotropyField.constant(), 0.0)
    assert check.holds
    assert check.lhs == pytest.approx(check.rhs)


def test_ellipse_vertex_gauss_curvature(circle_grid):
    # vertex (2, 0) of the ellipse with semi-axes 2 and 1 has radius b^2/a
    data = curvature(SupportFunction.ellipse(circle_grid, 2.0, 1.0))
    assert data.gauss[0] == pytest.approx(2.0, rel=1e-2)
    assert data.radii[0, 0] == pytest.approx(0.5, rel=1e-2)


@pytest.mark.parametrize("body", ["ellipse", "spheroid"])
def test_curvature_identities(circle_grid, sphere_grid, body):
    if body == "ellipse":
        u = SupportFunction.ellipse(circle_grid, 1.5, 1.0)
    else:
        u = SupportFunction.spheroid(sphere_grid, 1.0, 2.0)
    data = curvature(u)
    assert np.allclose(data.curvatures * data.radii, 1.0, rtol=1e-13)
    assert np.allclose(data.gauss, np.prod(data.curvatures, axis=1), rtol=1e-13)
    assert np.allclose(data.mean, np.sum(data.curvatures, axis=1), rtol=1e-13)
    assert np.allclose(data.radius_product * data.gauss, 1.0, rtol=1e-13)

    scaled = curvature(u.scaled(3.0))
    assert np.allclose(scaled.radii, 3.0 * data.radii, rtol=1e-12)
    assert np.allclose(scaled.curvatures, data.curvatures / 3.0, rtol=1e-12)
    assert np.allclose(scaled.gauss, data.gauss / 3.0**u.dimension, rtol=1e-12)


@pytest.mark.parametrize("p", [-1.0, 0.0, 0.5, 2.0])
def test_ball_lp_measure_totals(circle_grid, sphere_grid, p):
    radius = 2.0
    for grid in (circle_grid, sphere_grid):
        n = grid.dimension
        total = lp_measure(SupportFunction.ball(grid, radius), p=p).total
        expected = radius ** (n + 1 - p) * grid.sphere_area()
        assert total == pytest.approx(expected, rel=1e-12)


def test_cone_volume_measure_totals(ellipse, sphere_grid):
    # p = 0 gives (n + 1) times the enclosed volume
    assert lp_measure(ellipse, p=0.0).total == pytest.approx(
        2.0 * np.pi * 1.5 * 1.0, rel=1e-3
    )
    spheroid = SupportFunction.spheroid(sphere_grid, 1.0, 2.0)
    assert lp_measure(spheroid, p=0.0).total == pytest.approx(
        3.0 * 4.0 / 3.0 * np.pi * 1.0 * 2.0**2, rel=1e-2
    )


def test_surface_area_measure_ignores_translation(ellipse, sphere_grid):
    moved = ellipse.translated([0.3, -0.2])
    before = lp_measure(ellipse, p=1.0)
    after = lp_measure(moved, p=1.0)
    assert np.allclose(after.weights, before.weights, rtol=1e-3)
    assert after.total == pytest.approx(before.total, rel=1e-12)

    spheroid = SupportFunction.spheroid(sphere_grid, 1.0, 2.0)
    before = lp_measure(spheroid, p=1.0)
    after = lp_measure(spheroid.translated(0.3), p=1.0)
    assert np.allclose(after.weights, before.weights, rtol=1e-3)
    assert after.total == pytest.approx(before.total, rel=1e-8)


def test_thin_ellipse_inradius_bound():
    grid = GridSpec.circle(512)
    thin = SupportFunction.ellipse(grid, 4.0, 0.25)
    check = inradius_bound_check(thin, 0.0)
    assert check.lhs == pytest.approx(0.25, abs=1e-6)
    assert check.holds

    # both sides have degree one under scaling
    bigger = inradius_bound_check(thin.scaled(3.0), 0.0)
    assert bigger.lhs == pytest.approx(3.0 * check.lhs, rel=1e-6)
    assert bigger.rhs == pytest.approx(3.0 * check.rhs, rel=1e-9)
    assert bigger.holds


def test_generalized_solution_residual_converges():
    # f = u^(1-p) r_1 for the exact ellipse radius r_1 = (a b)^2 / u^3
    a, b, p = 1.5, 1.0, 0.0

    def support(t):
        return np.sqrt((a * np.cos(t)) ** 2 + (b * np.sin(t)) ** 2)

    table = GridSpec.circle(4096)
    exact = support(table.angles)
    density = exact ** (1.0 - p) * (a * b) ** 2 / exact**3
    f = AnisotropyField.tabulated(table, density)

    grid = GridSpec.circle(128)
    errors = [
        check_generalized_solution(
            SupportFunction.from_function(g, support), f, p
        ).max_relative
        for g in (grid, grid.refined())
    ]
    assert errors[0] < 1e-2
    assert np.log2(errors[0] / errors[1]) >= 1.9


def test_support_power_needs_interior_origin():
    with pytest.raises(OriginOnBoundaryError):
        support_power(np.array([0.0, 1.0]), 2.0, 1e-12)
    assert np.allclose(support_power(np.array([0.5, 2.0]), 1.0, 1e-12), 1.0)


def test_field_positivity_and_power():
    with pytest.raises(ValueError):
        AnisotropyField.cosine_mode(1.5)
    with pytest.raises(ValueError):
        AnisotropyField.linear_axis(2.0, clip=-0.5)
    f = AnisotropyField.constant(2.0).power(3.0)
    grid = GridSpec.circle(16)
    assert np.allclose(f.on_grid(grid), 8.0)
    assert np.allclose(f.on_grid(grid, derivative=1), 0.0)


def test_support_csv_round_trip(tmp_path, ellipse, sphere_grid):
    path = tmp_path / "u.csv"
    ellipse.translated([0.1, -0.2]).to_csv(path)
    back = SupportFunction.from_csv(path)
    assert np.array_equal(back.values, ellipse.translated([0.1, -0.2]).values)
    assert np.array_equal(back.center_offset, [0.1, -0.2])

    spheroid = SupportFunction.spheroid(sphere_grid, 1.0, 2.0).translated(0.3)
    spheroid.to_csv(path)
    back = SupportFunction.from_csv(path)
    assert back.grid == sphere_grid
    assert np.array_equal(back.values, spheroid.values)
    assert np.array_equal(back.center_offset, spheroid.center_offset)


if __name__ == "__main__":
    pytest.main()
