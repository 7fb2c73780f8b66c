from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

import numpy as np


@dataclass(frozen=True)
class OdeParams:
    """
    Radial Lp Minkowski ODE in R^n with f = 1 on an annulus. The model
    solution h solves h_rr = h_r^(1-m) with m = n + p - 1.
    """

    n: int
    p: float
    m: float = field(init=False)
    delta: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        m = self.n + self.p - 1.0
        if not m > 0.0:
            raise ValueError(f"m = n + p - 1 must be positive, got {m:g}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta", min(1.0, 2.0 / m))

    @classmethod
    def from_m(cls, n: int, m: float) -> "OdeParams":
        return cls(n, m - n + 1.0)

    @property
    def holder_total(self) -> float:
        """k + gamma = 1 + 1/m for the profile h + w."""
        return 1.0 + 1.0 / self.m

    @property
    def certificate_limit(self) -> float:
        return min(self.m, 1.0 / self.m) / 10.0


def model_h(r, m: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """h, h_r = (m r)^(1/m) and h_rr = (m r)^(1/m - 1)."""
    r = np.asarray(r, dtype=float)
    h = m / (1.0 + m) * m ** (1.0 / m) * r ** ((1.0 + m) / m)
    h_r = (m * r) ** (1.0 / m)
    h_rr = (m * r) ** (1.0 / m - 1.0)
    return h, h_r, h_rr


@dataclass(frozen=True)
class RadialMesh:
    """
    Nodes r_j = sigma_j^m with sigma uniform on [0, r0^(1/m)], j = 0..J.
    Profiles live on the nodes j >= 1.
    """

    r0: float
    m: float
    size: int

    def __post_init__(self):
        if not self.r0 > 0.0:
            raise ValueError("r0 must be positive")
        if self.size < 4:
            raise ValueError("mesh needs at least 4 cells")

    @property
    def sigma(self) -> np.ndarray:
        return self.r0 ** (1.0 / self.m) * np.arange(self.size + 1) / self.size

    @property
    def r(self) -> np.ndarray:
        """Interior nodes j = 1..J."""
        return self.sigma[1:] ** self.m


def graded_mesh(r0: float, m: float, size: int = 2048) -> RadialMesh:
    return RadialMesh(r0=r0, m=m, size=size)


class RadialSamples(NamedTuple):
    """Nodal values of a radial function and its first two derivatives."""

    w: np.ndarray
    w_r: np.ndarray
    w_rr: np.ndarray

    @classmethod
    def zeros(cls, size: int) -> "RadialSamples":
        return cls(np.zeros(size), np.zeros(size), np.zeros(size))

    def __sub__(self, other: "RadialSamples") -> "RadialSamples":
        return RadialSamples(
            self.w - other.w, self.w_r - other.w_r, self.w_rr - other.w_rr
        )


def brackets(w: RadialSamples, r: np.ndarray, m: float):
    """([w]_r, [w]_s, [w]_rr) = (w_r/h_r, [w]_r - w/(r h_r), w_rr/h_rr)."""
    _, h_r, h_rr = model_h(r, m)
    b_r = w.w_r / h_r
    b_s = b_r - w.w / (r * h_r)
    b_rr = w.w_rr / h_rr
    return b_r, b_s, b_rr


class NormReport(NamedTuple):
    k: int
    r: float
    value: float
    argmax: float


def _norm_terms(w: RadialSamples, k: int, r: np.ndarray, m: float):
    if k not in (0, 1, 2):
        raise ValueError(f"weighted norm order must be 0, 1 or 2, got {k}")
    _, h_r, _ = model_h(r, m)
    derivatives = (w.w, w.w_r, w.w_rr)[: k + 1]
    return np.max(
        [np.abs(r ** (i - 1) * d / h_r) for i, d in enumerate(derivatives)],
        axis=0,
    )


def weighted_norm(
    w: RadialSamples, k: int, r: np.ndarray, m: float
) -> NormReport:
    """max over l <= k of sup |r^(l-1) h_r^(-1) w^(l)| on the mesh."""
    terms = _norm_terms(w, k, r, m)
    j = int(np.argmax(terms))
    return NormReport(k=k, r=float(r[-1]), value=float(terms[j]), argmax=float(r[j]))


def running_norm(
    w: RadialSamples, k: int, r: np.ndarray, m: float
) -> np.ndarray:
    """The weighted norm over (0, r_j] for every node j."""
    return np.maximum.accumulate(_norm_terms(w, k, r, m))
