from typing import NamedTuple

import numpy as np
from loguru import logger
from scipy.optimize import linprog

from src.common.errors import LabError
from src.geometry.curvature import axisym_derivatives
from src.geometry.support import SupportFunction


class InscribedBallError(LabError):
    """Raised when the inscribed-ball linear program has no optimal solution"""

    pass


class InscribedBall(NamedTuple):
    radius: float
    center: np.ndarray


def _periodic_gradient(values: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(values, -1) - np.roll(values, 1)) / (2.0 * h)


def gradient(u: SupportFunction) -> np.ndarray:
    """Tangential derivative of u in the grid angle (zero at the poles)."""
    if u.grid.is_circle:
        return _periodic_gradient(u.values, u.grid.spacing)
    d1, _ = axisym_derivatives(u.values, u.grid.spacing)
    return d1


def body_points(u: SupportFunction) -> np.ndarray:
    """
    Boundary point with outer normal z at every node, x = u z + grad u.
    Circle grids give (x, y); axisymmetric grids give the meridian
    (rho, z) at azimuth 0.
    """
    a = u.grid.angles
    du = gradient(u)
    v = u.values
    if u.grid.is_circle:
        normal = np.column_stack([np.cos(a), np.sin(a)])
        tangent = np.column_stack([-np.sin(a), np.cos(a)])
    else:
        normal = np.column_stack([np.sin(a), np.cos(a)])
        tangent = np.column_stack([np.cos(a), -np.sin(a)])
    return v[:, None] * normal + du[:, None] * tangent


def _fourth_order_gradient(u: SupportFunction) -> np.ndarray:
    v = u.values
    h = u.grid.spacing
    if u.grid.is_circle:
        padded = np.concatenate([v[-2:], v, v[:2]])
    else:
        # even reflection across both poles
        padded = np.concatenate([v[2:0:-1], v, v[-2:-4:-1]])
    return (
        -padded[4:] + 8.0 * padded[3:-1] - 8.0 * padded[1:-3] + padded[:-4]
    ) / (12.0 * h)


def reconstruction_residual(u: SupportFunction) -> float:
    """
    max over nodes of | |x|^2 - u^2 - |grad u|^2 |, with x from
    body_points and grad u from a fourth-order stencil.
    """
    x = body_points(u)
    reference = _fourth_order_gradient(u)
    residual = np.sum(x**2, axis=1) - u.values**2 - reference**2
    return float(np.max(np.abs(residual)))


def diameter(u: SupportFunction) -> float:
    """Largest width u(z) + u(-z) over antipodal node pairs."""
    return float(np.max(u.values + u.values[u.grid.antipodes()]))


def _axial_projection(u: SupportFunction) -> np.ndarray:
    """<c, z> coefficients for the admissible centres of the grid."""
    if u.grid.is_circle:
        return u.grid.normals
    return u.grid.normals[:, 1:]


def chebyshev_center(u: SupportFunction) -> InscribedBall:
    """
    Largest ball c + tB inside {x : <x, z_j> <= u_j for all nodes}.
    Solved as the linear program max t s.t. <c, z_j> + t <= u_j; on
    axisymmetric grids the centre is restricted to the axis.
    """
    z = _axial_projection(u)
    k = z.shape[1]
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    a_ub = np.column_stack([z, np.ones(len(z))])
    result = linprog(
        cost,
        A_ub=a_ub,
        b_ub=u.values,
        bounds=[(None, None)] * (k + 1),
        method="highs",
    )
    if not result.success:
        logger.warning("inradius LP did not converge: {}", result.message)
        raise InscribedBallError(
            f"inscribed ball LP failed (status {result.status}): {result.message}"
        )
    center = np.zeros(u.grid.dimension + 1)
    center[-k:] = result.x[:k]
    return InscribedBall(float(result.x[-1]), center)


def inradius(u: SupportFunction) -> float:
    return chebyshev_center(u).radius


def inradius_lower_bound(u: SupportFunction, center: np.ndarray) -> float:
    """min over nodes of u - <center, z>: radius of a ball at `center` inside."""
    z = _axial_projection(u)
    c = np.asarray(center, dtype=float)[-z.shape[1]:]
    return float(np.min(u.values - z @ c))


def enclosing_radius(u: SupportFunction) -> float:
    """Radius of the smallest origin-centred ball containing the body."""
    return float(np.max(np.linalg.norm(body_points(u), axis=1)))
