from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import cumulative_trapezoid

from src.common.errors import LabError
from src.minkowski.error import ModulusNonpositiveError, error_functional
from src.minkowski.model import (
    OdeParams,
    RadialMesh,
    RadialSamples,
    graded_mesh,
    model_h,
    running_norm,
    weighted_norm,
)
from src.schemas.reports import ConvergenceLog, IterationRecord

PROFILE_COLUMNS = ["r", "w", "w_r", "w_rr", "h", "h_r", "h_rr", "E"]
MIN_R0 = 1e-6
CONTRACTION_LIMIT = 0.6


class NoContractionError(LabError):
    """Raised when no r0 above the floor gives a certified contraction"""

    pass


def _first_cell(values: np.ndarray, sigma_1: float) -> float:
    """
    Integral over [0, sigma_1] of an integrand behaving like
    G_1 (tau/sigma_1)^e, with e read off the first two nodes.
    """
    g1, g2 = values[0], values[1]
    if g1 == 0.0 or g2 == 0.0 or np.sign(g1) != np.sign(g2):
        return 0.5 * g1 * sigma_1
    e = float(np.clip(np.log2(g2 / g1), -0.9, 10.0))
    return g1 * sigma_1 / (e + 1.0)


def _integrate_from_zero(values: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Running integral from 0 of nodal values given on sigma[1:]."""
    head = _first_cell(values, sigma[1])
    return head + cumulative_trapezoid(values, sigma[1:], initial=0.0)


def _second_derivative(
    g: np.ndarray, w_r: np.ndarray, r: np.ndarray, m: float
) -> np.ndarray:
    """w_rr from L w = (r^(1-1/m) w_r)_r = m^(1/m-1) g."""
    return m ** (1.0 / m - 1.0) * r ** (1.0 / m - 1.0) * g - (
        1.0 - 1.0 / m
    ) * w_r / r


def integrate_operator(
    g: np.ndarray, mesh: RadialMesh, params: OdeParams
) -> RadialSamples:
    """
    Solve L w = m^(1/m-1) g with w(0) = w_r(0) = 0. Both integrals are
    taken in sigma = r^(1/m), where the integrands are regular.
    """
    m = params.m
    sigma = mesh.sigma
    r = mesh.r
    inner = _integrate_from_zero(g * m * sigma[1:] ** (m - 1.0), sigma)
    w_r = m ** (1.0 / m - 1.0) * r ** (1.0 / m - 1.0) * inner
    w = _integrate_from_zero(m ** (1.0 / m) * inner, sigma)
    return RadialSamples(w, w_r, _second_derivative(g, w_r, r, m))


def picard_step(
    w_prev: Optional[RadialSamples],
    w_curr: RadialSamples,
    params: OdeParams,
    mesh: RadialMesh,
) -> Tuple[RadialSamples, np.ndarray]:
    """
    w_next = w_curr + I(E[w_curr] - E[w_prev]), so that
    L w_next = m^(1/m-1) E[w_curr]. w_prev=None starts from E = 0.
    Returns w_next and E[w_curr].
    """
    r = mesh.r
    e_curr = error_functional(w_curr, r, params).total
    e_prev = (
        np.zeros_like(r)
        if w_prev is None
        else error_functional(w_prev, r, params).total
    )
    step = integrate_operator(e_curr - e_prev, mesh, params)
    w = w_curr.w + step.w
    w_r = w_curr.w_r + step.w_r
    w_rr = _second_derivative(e_curr, w_r, r, params.m)
    return RadialSamples(w, w_r, w_rr), e_curr


@dataclass
class RadialProfile:
    """v = h + w on (0, r0] with the error E[w] it was built from."""

    params: OdeParams
    mesh: RadialMesh
    samples: RadialSamples
    E: np.ndarray
    log: ConvergenceLog

    @property
    def r0(self) -> float:
        return self.mesh.r0

    @property
    def r(self) -> np.ndarray:
        return self.mesh.r

    @property
    def w(self) -> np.ndarray:
        return self.samples.w

    @property
    def w_r(self) -> np.ndarray:
        return self.samples.w_r

    @property
    def w_rr(self) -> np.ndarray:
        return self.samples.w_rr

    def model(self):
        return model_h(self.r, self.params.m)

    def v(self) -> RadialSamples:
        h, h_r, h_rr = self.model()
        return RadialSamples(h + self.w, h_r + self.w_r, h_rr + self.w_rr)

    def to_frame(self) -> pd.DataFrame:
        h, h_r, h_rr = self.model()
        return pd.DataFrame(
            {
                "r": self.r,
                "w": self.w,
                "w_r": self.w_r,
                "w_rr": self.w_rr,
                "h": h,
                "h_r": h_r,
                "h_rr": h_rr,
                "E": self.E,
            }
        )[PROFILE_COLUMNS]


def contraction_violations(
    records: Sequence[IterationRecord], limit: float = CONTRACTION_LIMIT
) -> List[IterationRecord]:
    """Iterations from the second on whose contraction ratio exceeds limit."""
    return [
        rec
        for rec in records
        if rec.iteration >= 2 and rec.ratio is not None and rec.ratio > limit
    ]


def _iterate(
    params: OdeParams,
    mesh: RadialMesh,
    tol: float,
    max_iter: int,
    log: ConvergenceLog,
) -> Tuple[Optional[RadialSamples], np.ndarray, str]:
    """
    Picard iteration at fixed r0. Returns (w, E, "") on convergence or
    (None, E, reason) when r0 has to shrink: two consecutive ratios
    above CONTRACTION_LIMIT, or any such ratio once the iteration has
    converged.
    """
    r, m = mesh.r, params.m
    start = len(log.iterations)
    w_prev: Optional[RadialSamples] = None
    w_curr = RadialSamples.zeros(len(r))
    e_curr = np.zeros_like(r)
    last_diff = None
    slow = 0
    for i in range(1, max_iter + 1):
        w_next, e_curr = picard_step(w_prev, w_curr, params, mesh)
        diff = weighted_norm(w_next - w_curr, 2, r, m).value
        scale = max(1.0, weighted_norm(w_next, 2, r, m).value)
        ratio = None
        if last_diff is not None and last_diff > 1e-14 * scale:
            ratio = diff / last_diff
        log.iterations.append(
            IterationRecord(iteration=i, r0=mesh.r0, norm=diff, ratio=ratio)
        )
        logger.debug(
            "r0={:.3e} iteration {}: |w_i - w_(i-1)| = {:.3e} ratio {}",
            mesh.r0,
            i,
            diff,
            "-" if ratio is None else f"{ratio:.3f}",
        )
        w_prev, w_curr = w_curr, w_next
        if diff <= tol:
            spikes = contraction_violations(log.iterations[start:])
            if spikes:
                worst = max(spikes, key=lambda rec: rec.ratio)
                return None, e_curr, (
                    f"ratio {worst.ratio:.3f} > {CONTRACTION_LIMIT} "
                    f"at iteration {worst.iteration}"
                )
            # E column describes the returned iterate
            return w_curr, error_functional(w_curr, r, params).total, ""
        slow = slow + 1 if ratio is not None and ratio > CONTRACTION_LIMIT else 0
        if slow >= 2:
            return None, e_curr, f"ratio {ratio:.3f} > {CONTRACTION_LIMIT}"
        last_diff = diff
    return None, e_curr, f"no convergence in {max_iter} iterations"


def solve_profile(
    params: OdeParams,
    r0_init: float = 1.0,
    tol: float = 1e-12,
    mesh_size: int = 2048,
    max_iter: int = 100,
) -> RadialProfile:
    """
    Contract the Picard map on (0, r0], halving r0 until the iteration
    contracts and the bound C0 r0^delta <= min(m, 1/m)/10 holds, where
    C0 = sup_r |w|_(C^2_w(0, r]) / r^delta.
    """
    if not 0.0 < r0_init <= 1.0:
        raise ValueError("r0_init must lie in (0, 1]")
    log = ConvergenceLog()
    r0 = r0_init
    while r0 >= MIN_R0:
        log.r0_history.append(r0)
        mesh = graded_mesh(r0, params.m, mesh_size)
        try:
            w, e, reason = _iterate(params, mesh, tol, max_iter, log)
        except ModulusNonpositiveError as exc:
            w, reason = None, f"modulus: {exc}"
        if w is not None:
            norms = running_norm(w, 2, mesh.r, params.m)
            c0 = float(np.max(norms / mesh.r**params.delta))
            certificate = c0 * r0**params.delta
            if certificate <= params.certificate_limit:
                log.r0 = r0
                log.c0 = c0
                log.certificate = certificate
                log.certified = True
                profile = RadialProfile(params, mesh, w, e, log)
                log.final_residual = ode_residual(profile)
                logger.info(
                    "✅ profile n={} p={:g}: r0={:.4g} C0={:.4g} "
                    "certificate {:.3e} <= {:.3e}",
                    params.n,
                    params.p,
                    r0,
                    c0,
                    certificate,
                    params.certificate_limit,
                )
                return profile
            reason = (
                f"certificate {certificate:.3e} > "
                f"{params.certificate_limit:.3e}"
            )
        log.restarts.append(reason)
        logger.debug("halving r0={:.3e}: {}", r0, reason)
        r0 *= 0.5
    raise NoContractionError(
        f"no certified contraction for n={params.n} p={params.p:g} "
        f"down to r0={MIN_R0:g} ({len(log.restarts)} restarts)"
    )


def ode_residual(profile: RadialProfile) -> float:
    """
    max relative defect of v_rr v_r^(n-1) = (v_r + r v_r - v)^(1-p)
    (1+r)^(n-1) (1 + v_r^2)^((n+p+1)/2) for v = h + w.
    """
    n, p = profile.params.n, profile.params.p
    r = profile.r
    v, v_r, v_rr = profile.v()
    lhs = v_rr * v_r ** (n - 1)
    rhs = (
        (v_r + r * v_r - v) ** (1.0 - p)
        * (1.0 + r) ** (n - 1)
        * (1.0 + v_r**2) ** ((n + p + 1.0) / 2.0)
    )
    return float(np.max(np.abs(lhs - rhs) / rhs))
