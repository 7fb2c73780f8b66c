from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.common.errors import LabError
from src.geometry.support import SupportFunction

# a principal radius at or below this fraction of the diameter is degenerate
NONCONVEX_FACTOR = 1e-10
POLE_TOLERANCE = 0.1


class NonConvexError(LabError):
    """Raised when a discrete principal radius is not positive"""

    pass


class PoleSingularError(LabError):
    """Raised when an axisymmetric support function is not regular at a pole"""

    pass


@dataclass(frozen=True, eq=False)
class CurvatureData:
    """
    Per-node principal radii r_i (shape (nodes, n)), principal
    curvatures 1/r_i, Gauss curvature K, mean curvature H and, once a
    flow has been attached, the normal speed F = f K^alpha.
    """

    radii: np.ndarray
    curvatures: np.ndarray
    gauss: np.ndarray
    mean: np.ndarray
    speed: Optional[np.ndarray] = None

    @classmethod
    def from_radii(cls, radii: np.ndarray) -> "CurvatureData":
        radii = np.asarray(radii, dtype=float)
        if radii.ndim == 1:
            radii = radii[:, None]
        curvatures = 1.0 / radii
        return cls(
            radii=radii,
            curvatures=curvatures,
            gauss=np.prod(curvatures, axis=1),
            mean=np.sum(curvatures, axis=1),
        )

    def with_speed(self, speed: np.ndarray) -> "CurvatureData":
        return replace(self, speed=np.asarray(speed, dtype=float))

    @property
    def radius_product(self) -> np.ndarray:
        """det(u_ij + u delta_ij) = 1/K."""
        return np.prod(self.radii, axis=1)

    @property
    def lambda_max(self) -> float:
        return float(self.curvatures.max())

    @property
    def gauss_max(self) -> float:
        return float(self.gauss.max())


def _check_convex(u: SupportFunction, radii: np.ndarray) -> None:
    width = float(np.max(u.values + u.values[u.grid.antipodes()]))
    floor = NONCONVEX_FACTOR * width
    lowest = float(radii.min())
    if not lowest > floor:
        node = int(np.argmin(radii.min(axis=1)))
        raise NonConvexError(
            f"principal radius {lowest:.3e} <= {floor:.3e} at node {node} "
            f"(angle {u.grid.angles[node]:.4f})"
        )


def curvature_circle(u: SupportFunction) -> CurvatureData:
    """r_1 = u_tt + u by the periodic second central difference."""
    if not u.grid.is_circle:
        raise ValueError("curvature_circle needs a circle grid")
    h = u.grid.spacing
    v = u.values
    r1 = (np.roll(v, -1) - 2.0 * v + np.roll(v, 1)) / h**2 + v
    radii = r1[:, None]
    _check_convex(u, radii)
    return CurvatureData.from_radii(radii)


def pole_slopes(u: SupportFunction) -> np.ndarray:
    """One-sided second-order slopes of u at phi = 0 and phi = pi."""
    v = u.values
    h = u.grid.spacing
    north = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    south = (-3.0 * v[-1] + 4.0 * v[-2] - v[-3]) / (2.0 * h)
    return np.array([north, south])


def axisym_derivatives(values: np.ndarray, h: float):
    """
    u_phi and u_phiphi on [0, pi]. Poles use the even reflection
    u(-h) = u(h), so u_phi = 0 and u_phiphi = 2 (u_1 - u_0) / h^2.
    """
    d1 = np.zeros_like(values)
    d2 = np.empty_like(values)
    d1[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    d2[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / h**2
    d2[0] = 2.0 * (values[1] - values[0]) / h**2
    d2[-1] = 2.0 * (values[-2] - values[-1]) / h**2
    return d1, d2


def curvature_axisym(
    u: SupportFunction, pole_tolerance: float = POLE_TOLERANCE
) -> CurvatureData:
    """
    Meridian radius r_1 = u_pp + u and parallel radius
    r_2 = u_p cot(p) + u, with r_2 = r_1 at the poles.
    """
    grid = u.grid
    if grid.is_circle:
        raise ValueError("curvature_axisym needs an axisymmetric grid")
    h = grid.spacing
    v = u.values

    slopes = pole_slopes(u)
    allowed = 10.0 * h**2 * np.max(np.abs(v))
    if np.any(np.abs(slopes) > allowed):
        raise PoleSingularError(
            f"pole slopes {slopes[0]:.3e}, {slopes[1]:.3e} exceed {allowed:.3e}"
        )

    d1, d2 = axisym_derivatives(v, h)
    phi = grid.angles
    r1 = d2 + v
    r2 = np.empty_like(v)
    r2[1:-1] = d1[1:-1] / np.tan(phi[1:-1]) + v[1:-1]
    r2[0] = r1[0]
    r2[-1] = r1[-1]

    # pole limit against the phi^2-linear extrapolation of r_2
    for pole, (a, b) in ((0, (1, 2)), (-1, (-2, -3))):
        extrapolated = (4.0 * r2[a] - r2[b]) / 3.0
        scale = max(abs(r1[pole]), abs(extrapolated))
        if abs(extrapolated - r1[pole]) > pole_tolerance * scale:
            raise PoleSingularError(
                f"pole radius {r1[pole]:.4e} disagrees with neighbour "
                f"extrapolation {extrapolated:.4e}"
            )

    radii = np.column_stack([r1, r2])
    _check_convex(u, radii)
    return CurvatureData.from_radii(radii)


def curvature(u: SupportFunction) -> CurvatureData:
    if u.grid.is_circle:
        return curvature_circle(u)
    return curvature_axisym(u)
