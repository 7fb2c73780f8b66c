import numpy as np
import pytest

from src.regularity.bodies import (
    ball_body,
    build_glued_body,
    cap_density_residuals,
    chou_wang_body,
    flat_part_measure_check,
)
from src.regularity.chou_wang import BadRangeError, chou_wang_example
from src.regularity.holder import InsufficientDecadesError, holder_exponent

CAP_ANGLES = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]


@pytest.mark.parametrize("n, p", [(2, 0.0), (2, 0.5), (2, 2.5), (1, 0.5)])
def test_local_example_closed_forms(n, p):
    example = chou_wang_example(n, p)
    r = np.geomspace(1e-6, 1e-1, 200)
    assert example.determinant_residual(r) < 1e-10
    assert example.legendre_residual(r) < 1e-10
    assert example.f(0.0) == pytest.approx(example.constant)


@pytest.mark.parametrize("n, p", [(2, 2.0), (3, 2.0), (2, 0.5)])
def test_local_example_at_random_radii(n, p):
    example = chou_wang_example(n, p)
    rng = np.random.default_rng(11)
    r = 10.0 ** rng.uniform(-6.0, 0.0, 1000)
    assert example.determinant_residual(r) < 1e-10
    assert example.legendre_residual(r) < 1e-10


def test_local_example_range():
    for p in (1.0, 3.0, -1.0):
        with pytest.raises(BadRangeError):
            chou_wang_example(2, p)


def test_local_example_exponents():
    example = chou_wang_example(2, 0.0)
    assert example.alpha == pytest.approx(2.0 / 3.0)
    assert example.exponent == pytest.approx(4.0)
    slopes = np.array([0.1, 1.0, 3.0])
    r = example.radius_at_slope(slopes)
    assert np.allclose(example.v_r(r), slopes)


def test_holder_fit_of_local_example():
    example = chou_wang_example(2, 0.5)
    r = np.geomspace(1e-6, 1e-1, 401)
    estimate = holder_exponent(r, example.v_r(r))
    assert estimate.accepted
    assert estimate.total == pytest.approx(example.exponent, abs=1e-9)
    assert estimate.k == 2
    assert estimate.gamma == pytest.approx(example.exponent - 2.0)


def test_holder_fit_snaps_to_integer():
    r = np.geomspace(1e-4, 1.0, 100)
    estimate = holder_exponent(r, 2.0 * r**1.01)
    assert estimate.total == 2.0
    assert (estimate.k, estimate.gamma) == (1, 1.0)
    assert estimate.label == "C^{1,1}"


def test_holder_fit_needs_two_decades():
    r = np.linspace(1.0, 10.0, 50)
    with pytest.raises(InsufficientDecadesError):
        holder_exponent(r, r)


def test_profile_is_c11_for_m_one(profile_m1):
    _, v_r, _ = profile_m1.v()
    estimate = holder_exponent(profile_m1.r, v_r)
    assert estimate.accepted
    assert estimate.total == pytest.approx(profile_m1.params.holder_total)
    assert (estimate.k, estimate.gamma) == (1, 1.0)


def test_local_cap_density():
    report = cap_density_residuals(chou_wang_example(2, 0.0))
    assert len(report.residuals) == 15
    assert report.max_relative < 1e-3


def test_glued_body_recovers_unit_density(profile_m1):
    body = build_glued_body(profile_m1)
    density = body.recover_density(0.0)
    assert np.max(np.abs(density - 1.0)) < 1e-6
    assert np.all(np.diff(body.psi) > 0.0)
    assert body.psi[-1] == pytest.approx(np.pi)
    assert body.junction.height == pytest.approx(
        body.height[body.graph_mask][-1]
    )
    assert list(body.to_frame().columns) == ["rho", "height", "normal_angle"]


def test_flat_part_carries_no_mass_below_p_one(profile_m1):
    body = build_glued_body(profile_m1)
    report = flat_part_measure_check(body, 0.0, CAP_ANGLES)
    assert report.decreasing
    assert report.ratio < 1e-6
    assert body.flat_mass(0.0) == 0.0
    assert body.flat_mass(1.0) == pytest.approx(np.pi)
    assert body.flat_mass(2.0) == np.inf


def test_smooth_ball_cap_masses():
    body = ball_body(2)
    report = flat_part_measure_check(body, 0.0, CAP_ANGLES)
    assert report.decreasing
    assert report.ratio < 1e-6
    assert report.total == pytest.approx(4.0 * np.pi, rel=1e-4)


def test_local_body_is_convex():
    body = chou_wang_body(chou_wang_example(2, 0.5), samples=501)
    assert np.all(np.diff(body.psi) > 0.0)
    assert np.all(np.diff(body.rho) > 0.0)
    assert np.all(np.diff(body.height) > 0.0)


if __name__ == "__main__":
    pytest.main()
