from dataclasses import dataclass

import numpy as np

from src.common.errors import LabError
from src.minkowski.model import OdeParams, RadialSamples, brackets, model_h


class ModulusNonpositiveError(LabError):
    """Raised when Y = 1 + r/(m+1) + [w]_r + r[w]_s or Z = 1 + [w]_r
    is not positive"""

    pass


@dataclass(frozen=True, eq=False)
class ErrorTerms:
    P1: np.ndarray
    P2: np.ndarray
    Q: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    R3: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.P1 + self.P2 + self.Q + self.R1 - self.R2 - self.R3


def error_functional(
    w: RadialSamples, r: np.ndarray, params: OdeParams
) -> ErrorTerms:
    """
    The nonlinear remainder E[w] of the radial equation written around
    the model solution h, split into its P, Q and R parts.
    """
    n, p, m = params.n, params.p, params.m
    r = np.asarray(r, dtype=float)
    _, h_r, _ = model_h(r, m)
    b_r, b_s, b_rr = brackets(w, r, m)

    X = 1.0 + h_r**2 * (1.0 + b_r) ** 2
    Y = 1.0 + r / (m + 1.0) + b_r + r * b_s
    Z = 1.0 + b_r
    if np.any(Y <= 0.0) or np.any(Z <= 0.0):
        j = int(np.argmin(np.minimum(Y, Z)))
        raise ModulusNonpositiveError(
            f"Y={Y[j]:.3e}, Z={Z[j]:.3e} at r={r[j]:.3e}"
        )

    Y_p = Y ** (1.0 - p)
    P1 = np.expm1((n - 1) * np.log1p(r)) * X ** ((m + 2.0) / 2.0) * Y_p
    P2 = np.expm1((m + 2.0) / 2.0 * np.log1p(h_r**2 * Z**2)) * Y_p
    if p == 1.0:
        Q = np.zeros_like(r)
        R1 = np.zeros_like(r)
    else:
        Z_p = Z ** (1.0 - p)
        Q = Y_p - Z_p
        R1 = Z_p - 1.0 - (1.0 - p) * b_r
    Z_n = Z ** (n - 1)
    R2 = b_rr * (Z_n - 1.0)
    R3 = Z_n - 1.0 - (n - 1) * b_r
    return ErrorTerms(P1=P1, P2=P2, Q=Q, R1=R1, R2=R2, R3=R3, X=X, Y=Y, Z=Z)


def jensen_check(a, b, q) -> np.ndarray:
    """
    Elementwise |a^q - b^q| <= |q| |a - b| (a^(q-1) + b^(q-1)) for
    a, b > 0, up to rounding. q is a scalar or one exponent per pair.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("jensen_check needs positive a and b")
    lhs = np.abs(a**q - b**q)
    rhs = np.abs(q) * np.abs(a - b) * (a ** (q - 1.0) + b ** (q - 1.0))
    slack = 1e-12 * (np.abs(a**q) + np.abs(b**q))
    return lhs <= rhs + slack
