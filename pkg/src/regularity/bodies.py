from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import trapezoid
from scipy.special import gamma

from src.common.errors import LabError
from src.geometry.measures import GeneralizedSolutionReport, measure_residuals
from src.minkowski.picard import RadialProfile
from src.regularity.chou_wang import ChouWangExample

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)
CAP_SAMPLES = 801


class ConvexityLostError(LabError):
    """Raised when the glued body fails to be convex"""

    pass


def sphere_area(n: int) -> float:
    """|S^(n-1)|; 2 for n = 1."""
    return 2.0 * np.pi ** (n / 2.0) / gamma(n / 2.0)


def ball_volume(n: int) -> float:
    """|B^n|"""
    return np.pi ** (n / 2.0) / gamma(n / 2.0 + 1.0)


class Junction(NamedTuple):
    r: float
    rho: float
    height: float
    slope: float
    curvature: float
    semi_axes: tuple
    center_height: float


@dataclass(frozen=True, eq=False)
class RadialGraphBody:
    """
    A rotationally symmetric convex hypersurface in R^(n+1) given by its
    meridian from the south pole to the north pole: radius rho, height,
    normal angle psi measured from -e_(n+1), and meridian curvature. A
    flat disk of radius flat_radius closes the bottom at height 0.
    """

    n: int
    flat_radius: float
    rho: np.ndarray
    height: np.ndarray
    psi: np.ndarray
    k_meridian: np.ndarray
    graph_mask: np.ndarray
    junction: Optional[Junction] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"rho": self.rho, "height": self.height, "normal_angle": self.psi}
        )

    def support_values(self) -> np.ndarray:
        """u = <x, nu> with nu = (sin psi, -cos psi) in the meridian plane."""
        return self.rho * np.sin(self.psi) - self.height * np.cos(self.psi)

    def gauss_curvature(self) -> np.ndarray:
        k_parallel = np.where(
            self.rho > 1e-12,
            np.sin(self.psi) / np.maximum(self.rho, 1e-300),
            self.k_meridian,
        )
        return self.k_meridian * k_parallel ** (self.n - 1)

    def recover_density(self, p: float) -> np.ndarray:
        """f = u^(1-p) / K on the curved graph part."""
        u = self.support_values()[self.graph_mask]
        return u ** (1.0 - p) / self.gauss_curvature()[self.graph_mask]

    def arclength(self) -> np.ndarray:
        steps = np.hypot(np.diff(self.rho), np.diff(self.height))
        return np.concatenate([[0.0], np.cumsum(steps)])

    def _surface_density(self, p: float) -> np.ndarray:
        u = np.maximum(self.support_values(), 0.0)
        with np.errstate(divide="ignore"):
            power = np.power(u, 1.0 - p)
        return power * sphere_area(self.n) * self.rho ** (self.n - 1)

    def flat_mass(self, p: float) -> float:
        """u^(1-p) dS of the flat disk, all of it at psi = 0."""
        if self.flat_radius == 0.0 or p < 1.0:
            return 0.0
        if p > 1.0:
            return np.inf
        return ball_volume(self.n) * self.flat_radius**self.n

    def lp_cell_masses(self, p: float, edges) -> np.ndarray:
        """
        S_p mass of each normal-angle cell [a, b]: trapezoid in
        arclength over the meridian, values at cell edges interpolated
        linearly in psi. Cells touching u = 0 are infinite for p > 1.
        """
        edges = np.asarray(edges, dtype=float)
        if edges.ndim == 1:
            edges = np.column_stack([edges[:-1], edges[1:]])
        s = self.arclength()
        g = self._surface_density(p)
        masses = np.empty(len(edges))
        for i, (lo, hi) in enumerate(edges):
            inside = (self.psi > lo) & (self.psi < hi)
            s_end = np.interp([lo, hi], self.psi, s)
            with np.errstate(invalid="ignore"):
                g_end = np.interp([lo, hi], self.psi, g)
            masses[i] = trapezoid(
                np.concatenate([[g_end[0]], g[inside], [g_end[1]]]),
                np.concatenate([[s_end[0]], s[inside], [s_end[1]]]),
            )
            if lo <= 0.0 <= hi:
                masses[i] += self.flat_mass(p)
        return masses


def field_masses(
    f: Callable[[np.ndarray], np.ndarray], n: int, edges
) -> np.ndarray:
    """Integral of f(psi) |S^(n-1)| sin^(n-1) psi over each cell."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim == 1:
        edges = np.column_stack([edges[:-1], edges[1:]])
    lo, hi = edges[:, 0], edges[:, 1]
    half = 0.5 * (hi - lo)
    points = 0.5 * (hi + lo)[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    values = f(points) * sphere_area(n) * np.sin(points) ** (n - 1)
    return half * (values @ _GAUSS_WEIGHTS)


def _ellipse_cap(rho_j, z_j, slope, v_rr):
    """
    Lower-left quarter of an ellipse of revolution matching value, slope
    and meridian curvature of the graph at (rho_j, z_j).
    """
    cos_sq = slope / (rho_j * v_rr)
    if not 0.0 < cos_sq < 1.0:
        raise ConvexityLostError(
            f"no matching ellipse: cos^2(tau) = {cos_sq:.4g} at rho={rho_j:.4g}"
        )
    cos0 = np.sqrt(cos_sq)
    sin0 = np.sqrt(1.0 - cos_sq)
    a = rho_j / sin0
    b = slope * a * cos0 / sin0
    z_c = z_j + b * cos0
    return np.arcsin(sin0), a, b, z_c


def build_glued_body(
    profile: RadialProfile, cap_samples: int = CAP_SAMPLES
) -> RadialGraphBody:
    """
    Flat unit disk, the annulus graph v(|x| - 1) of the profile up to
    the last node with v <= v(r0)/2, and a C^2-matched ellipse cap.
    """
    n = profile.params.n
    r = profile.r
    v, v_r, v_rr = profile.v()
    cut = int(np.nonzero(v <= 0.5 * v[-1])[0][-1])
    rho_g = 1.0 + r[: cut + 1]
    z_g = v[: cut + 1]
    slope = v_r[: cut + 1]
    k_g = v_rr[: cut + 1] / (1.0 + slope**2) ** 1.5

    tau0, a, b, z_c = _ellipse_cap(rho_g[-1], z_g[-1], slope[-1], v_rr[cut])
    tau = np.linspace(tau0, np.pi, cap_samples)[1:]
    sin_t, cos_t = np.sin(tau), np.cos(tau)
    rho_e = a * sin_t
    rho_e[-1] = 0.0
    z_e = z_c - b * cos_t
    psi_e = np.arctan2(b * sin_t, a * cos_t)
    psi_e[-1] = np.pi
    k_e = a * b / (a**2 * cos_t**2 + b**2 * sin_t**2) ** 1.5

    rho = np.concatenate([[1.0], rho_g, rho_e])
    height = np.concatenate([[0.0], z_g, z_e])
    psi = np.concatenate([[0.0], np.arctan(slope), psi_e])
    k_mer = np.concatenate([[np.nan], k_g, k_e])
    mask = np.concatenate(
        [[False], np.ones(len(rho_g), bool), np.zeros(len(rho_e), bool)]
    )
    if np.any(np.diff(psi) <= 0.0):
        j = int(np.argmin(np.diff(psi)))
        raise ConvexityLostError(
            f"normal angle not increasing at sample {j} (psi={psi[j]:.6g})"
        )
    junction = Junction(
        r=float(r[cut]),
        rho=float(rho_g[-1]),
        height=float(z_g[-1]),
        slope=float(slope[-1]),
        curvature=float(k_g[-1]),
        semi_axes=(float(a), float(b)),
        center_height=float(z_c),
    )
    logger.debug("glued body junction: {}", junction)
    return RadialGraphBody(
        n=n,
        flat_radius=1.0,
        rho=rho,
        height=height,
        psi=psi,
        k_meridian=k_mer,
        graph_mask=mask,
        junction=junction,
    )


def chou_wang_body(
    example: ChouWangExample,
    psi_max: float = np.pi / 4.0,
    samples: int = 2001,
) -> RadialGraphBody:
    """The graph of v = c r^beta, sampled uniformly in normal angle."""
    psi = np.linspace(0.0, psi_max, samples)
    r = example.radius_at_slope(np.tan(psi))
    slope = np.tan(psi)
    with np.errstate(divide="ignore", invalid="ignore"):
        k_mer = example.v_rr(r) / (1.0 + slope**2) ** 1.5
    mask = np.ones(samples, bool)
    mask[0] = False
    return RadialGraphBody(
        n=example.n,
        flat_radius=0.0,
        rho=r,
        height=example.v(r),
        psi=psi,
        k_meridian=k_mer,
        graph_mask=mask,
    )


def ball_body(n: int, radius: float = 1.0, samples: int = 4001) -> RadialGraphBody:
    """Round sphere centred at the origin, so u = radius everywhere."""
    psi = np.linspace(0.0, np.pi, samples)
    rho = radius * np.sin(psi)
    rho[-1] = 0.0
    return RadialGraphBody(
        n=n,
        flat_radius=0.0,
        rho=rho,
        height=-radius * np.cos(psi),
        psi=psi,
        k_meridian=np.full(samples, 1.0 / radius),
        graph_mask=np.zeros(samples, bool),
    )


def cap_density_residuals(
    example: ChouWangExample,
    samples: int = 2001,
    cells: int = 16,
    psi_max: float = np.pi / 4.0,
) -> GeneralizedSolutionReport:
    """
    S_p(E) - integral_E f over equal normal-angle cells of the local
    example, leaving out the cell at the south pole.
    """
    body = chou_wang_body(example, psi_max, samples)
    edges = np.linspace(0.0, psi_max, cells + 1)
    masses = body.lp_cell_masses(example.p, edges)
    f_masses = field_masses(example.f, example.n, edges)
    return measure_residuals(
        masses, f_masses, partition=[[j] for j in range(1, cells)]
    )


class FlatPartReport(NamedTuple):
    cap_angles: np.ndarray
    masses: np.ndarray
    total: float
    decreasing: bool
    ratio: float


def flat_part_measure_check(
    body: RadialGraphBody, p: float, cap_angles: Sequence[float]
) -> FlatPartReport:
    """
    S_p mass of the polar caps {psi < eps} for shrinking eps. For p < 1
    the flat disk carries no mass, so the masses vanish with eps.
    """
    angles = np.sort(np.asarray(cap_angles, dtype=float))[::-1]
    masses = np.array(
        [body.lp_cell_masses(p, [[0.0, eps]])[0] for eps in angles]
    )
    total = float(body.lp_cell_masses(p, [[0.0, np.pi]])[0])
    return FlatPartReport(
        cap_angles=angles,
        masses=masses,
        total=total,
        decreasing=bool(np.all(np.diff(masses) < 0.0)),
        ratio=float(masses[-1] / total),
    )
