from typing import NamedTuple

import numpy as np
from loguru import logger

from src.minkowski.error import ErrorTerms, error_functional
from src.minkowski.model import (
    OdeParams,
    RadialMesh,
    RadialSamples,
    model_h,
    running_norm,
)
from src.minkowski.picard import integrate_operator

POWER_FAMILY = (0.0, 0.5, 1.0, 2.0)
NORM_BALL = 0.25


class LemmaFits(NamedTuple):
    """Empirical constants of the three contraction estimates."""

    c1: float
    c2_p: float
    c2_q: float
    c2_r: float
    c3: float
    pairs: int

    @property
    def c2(self) -> float:
        return max(self.c2_p, self.c2_q, self.c2_r)


def _power_member(
    mesh: RadialMesh, m: float, k: float, amplitude: float
) -> RadialSamples:
    """phi = a h (r/r0)^k with exact derivatives."""
    r = mesh.r
    h, h_r, h_rr = model_h(r, m)
    s = (r / mesh.r0) ** k
    return RadialSamples(
        amplitude * h * s,
        amplitude * s * (h_r + k * h / r),
        amplitude * s * (h_rr + 2.0 * k * h_r / r + k * (k - 1.0) * h / r**2),
    )


def _random_member(
    rng: np.random.Generator, mesh: RadialMesh, m: float
) -> RadialSamples:
    k = float(rng.choice(POWER_FAMILY))
    sign = 1.0 if rng.random() < 0.5 else -1.0
    unit = _power_member(mesh, m, k, 1.0)
    size = running_norm(unit, 2, mesh.r, m)[-1]
    target = NORM_BALL * rng.uniform(0.05, 1.0)
    return _power_member(mesh, m, k, sign * target / size)


def _sup_ratio(numerator: np.ndarray, denominator: np.ndarray) -> float:
    mask = denominator > 1e-300
    if not np.any(mask):
        return 0.0
    return float(np.max(np.abs(numerator[mask]) / denominator[mask]))


def _pair_ratios(
    phi: RadialSamples,
    psi: RadialSamples,
    mesh: RadialMesh,
    params: OdeParams,
):
    r, m = mesh.r, params.m
    a: ErrorTerms = error_functional(phi, r, params)
    b: ErrorTerms = error_functional(psi, r, params)
    diff = phi - psi
    d1 = running_norm(diff, 1, r, m)
    d2 = running_norm(diff, 2, r, m)
    n_phi = running_norm(phi, 2, r, m)
    n_psi = running_norm(psi, 2, r, m)
    r_delta = r**params.delta

    p_ratio = max(
        _sup_ratio(a.P1 - b.P1, r_delta * d2),
        _sup_ratio(a.P2 - b.P2, r_delta * d2),
    )
    q_ratio = _sup_ratio(a.Q - b.Q, (r_delta + n_phi + n_psi) * d1)
    r_ratio = max(
        _sup_ratio(x - y, (n_phi + n_psi) * d2)
        for x, y in ((a.R1, b.R1), (a.R2, b.R2), (a.R3, b.R3))
    )
    return p_ratio, q_ratio, r_ratio


def lemma_bound_fits(
    params: OdeParams, mesh: RadialMesh, pairs: int = 24, seed: int = 0
) -> LemmaFits:
    """
    C1 = sup |E[0]| / r^delta, C3 = sup |I(r^delta)|_(C^2_w(0, r]) / r^delta
    and C2 as the largest ratio of each difference estimate over random
    power-law pairs inside the quarter ball of the weighted norm.
    """
    if mesh.r0 > 1.0:
        raise ValueError("the estimates hold for r0 <= 1")
    r, m = mesh.r, params.m
    r_delta = r**params.delta

    zero = RadialSamples.zeros(len(r))
    c1 = float(np.max(np.abs(error_functional(zero, r, params).total) / r_delta))

    response = integrate_operator(r_delta, mesh, params)
    c3 = float(np.max(running_norm(response, 2, r, m) / r_delta))

    rng = np.random.default_rng(seed)
    worst = np.zeros(3)
    for _ in range(pairs):
        phi = _random_member(rng, mesh, m)
        psi = _random_member(rng, mesh, m)
        worst = np.maximum(worst, _pair_ratios(phi, psi, mesh, params))

    fits = LemmaFits(
        c1=c1,
        c2_p=float(worst[0]),
        c2_q=float(worst[1]),
        c2_r=float(worst[2]),
        c3=c3,
        pairs=pairs,
    )
    logger.debug("lemma constants for m={:g}: {}", m, fits)
    return fits
