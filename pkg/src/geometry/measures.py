from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from loguru import logger

from src.common.errors import LabError
from src.geometry.anisotropy import AnisotropyField
from src.geometry.curvature import CurvatureData, curvature
from src.geometry.grid import GridSpec
from src.geometry.shape import diameter, inradius
from src.geometry.support import SupportFunction

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)


class OriginOnBoundaryError(LabError):
    """Raised when u^(1-p) cannot be formed because the origin is not interior"""

    pass


@dataclass(frozen=True, eq=False)
class LpMeasure:
    """Discrete S_p(Omega, .): one non-negative mass per sphere cell."""

    p: float
    edges: np.ndarray
    weights: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


class GeneralizedSolutionReport(NamedTuple):
    residuals: np.ndarray
    relative: np.ndarray
    max_abs: float
    max_relative: float


def support_power(values: np.ndarray, p: float, tol: float) -> np.ndarray:
    """
    u^(1-p) with the origin checks: p > 1 needs u bounded away from 0,
    and a non-integer exponent needs u >= 0.
    """
    exponent = 1.0 - p
    lowest = float(np.min(values))
    if p == 1.0:
        return np.ones_like(values)
    if p > 1.0 and lowest < tol:
        raise OriginOnBoundaryError(
            f"min u = {lowest:.3e} < {tol:.3e} while p = {p:g} > 1"
        )
    if not float(exponent).is_integer() and lowest < -tol:
        raise OriginOnBoundaryError(
            f"origin lies outside the body (min u = {lowest:.3e})"
        )
    return np.power(np.maximum(values, 0.0), exponent)


def lp_measure(
    u: SupportFunction,
    f_unused: Optional[AnisotropyField] = None,
    p: float = 1.0,
    curv: Optional[CurvatureData] = None,
) -> LpMeasure:
    """
    Cell weight u^(1-p) * (r_1 ... r_n) * |cell|; p = 1 is the surface
    area measure and p = 0 the cone-volume measure times (n + 1).
    """
    curv = curv if curv is not None else curvature(u)
    tol = 1e-12 * diameter(u)
    power = support_power(u.values, p, tol)
    weights = power * curv.radius_product * u.grid.cell_areas()
    return LpMeasure(p=p, edges=u.grid.cell_edges(), weights=weights)


def enclosed_volume(u: SupportFunction) -> float:
    """V = (1/(n+1)) * integral of u dS."""
    s = lp_measure(u, p=1.0)
    return float(np.sum(u.values * s.weights)) / (u.dimension + 1)


def field_cell_masses(
    f: AnisotropyField, grid: GridSpec, edges: Optional[np.ndarray] = None
) -> np.ndarray:
    """Integral of f d(sigma) over each cell by 4-point Gauss-Legendre."""
    edges = grid.cell_edges() if edges is None else np.asarray(edges)
    lo, hi = edges[:, 0], edges[:, 1]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    points = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    values = f.evaluate(points.ravel(), grid.kind).reshape(points.shape)
    if not grid.is_circle:
        values = values * 2.0 * np.pi * np.sin(points)
    return half * (values @ _GAUSS_WEIGHTS)


def measure_residuals(
    masses: np.ndarray,
    f_masses: np.ndarray,
    partition: Optional[Sequence[Sequence[int]]] = None,
) -> GeneralizedSolutionReport:
    """
    residual_E = S_p(E) - integral_E f over each partition cell E, with
    cells given as groups of elementary cell indices.
    """
    masses = np.asarray(masses, dtype=float)
    f_masses = np.asarray(f_masses, dtype=float)
    if partition is None:
        partition = [[j] for j in range(len(masses))]
    seen = set()
    lhs: List[float] = []
    rhs: List[float] = []
    for group in partition:
        group = list(group)
        if seen.intersection(group):
            raise ValueError("partition cells must be disjoint")
        seen.update(group)
        lhs.append(float(np.sum(masses[group])))
        rhs.append(float(np.sum(f_masses[group])))
    if len(seen) < len(masses):
        logger.debug(
            "partition leaves {} of {} cells out", len(masses) - len(seen), len(masses)
        )
    lhs_arr = np.array(lhs)
    rhs_arr = np.array(rhs)
    residuals = lhs_arr - rhs_arr
    relative = residuals / np.abs(rhs_arr)
    return GeneralizedSolutionReport(
        residuals=residuals,
        relative=relative,
        max_abs=float(np.max(np.abs(residuals))),
        max_relative=float(np.max(np.abs(relative))),
    )


def check_generalized_solution(
    u: SupportFunction,
    f: AnisotropyField,
    p: float,
    partition: Optional[Sequence[Sequence[int]]] = None,
) -> GeneralizedSolutionReport:
    """Residuals of S_p(Omega, E) = integral_E f d(sigma) on grid cells."""
    measure = lp_measure(u, f, p)
    return measure_residuals(
        measure.weights, field_cell_masses(f, u.grid), partition
    )


def inradius_bound_check(u: SupportFunction, p: float) -> InequalityCheck:
    """
    inradius >= C_n V u_max^(-n) with C_n = (n+1)^(-(n+1)). Both sides
    are homogeneous of degree one under scaling; p does not enter.
    """
    n = u.dimension
    c_n = float(n + 1) ** (-(n + 1))
    lhs = inradius(u)
    rhs = c_n * enclosed_volume(u) * u.max() ** (-n)
    return InequalityCheck(lhs, rhs, lhs >= rhs)


def volume_bound_check(
    u: SupportFunction, f: AnisotropyField, p: float
) -> InequalityCheck:
    """
    For a solution of the Lp problem with p <= 0,
    integral of f d(sigma) <= (n + 1) u_max^(-p) V.
    """
    n = u.dimension
    lhs = float(np.sum(field_cell_masses(f, u.grid)))
    rhs = (n + 1) * u.max() ** (-p) * enclosed_volume(u)
    return InequalityCheck(lhs, rhs, lhs <= rhs * (1.0 + 1e-9))
