from dataclasses import dataclass, field

import numpy as np

from src.common.errors import LabError


class BadRangeError(LabError):
    """Raised when p lies outside (-n+1, 1) U (1, n+1)"""

    pass


@dataclass(frozen=True)
class ChouWangExample:
    """
    The power-law solution near the south pole: in the tangent plane
    u~(y) = |y|^(2 alpha) with alpha = n/(n - p + 1), and the boundary is
    the graph of v(r) = c r^beta, beta = 2 alpha/(2 alpha - 1).
    """

    n: int
    p: float
    alpha: float = field(init=False)
    c: float = field(init=False)
    exponent: float = field(init=False)

    def __post_init__(self):
        n, p = self.n, self.p
        if not (-n + 1 < p < 1 or 1 < p < n + 1):
            raise BadRangeError(
                f"p={p:g} outside (-n+1, 1) U (1, n+1) for n={n}"
            )
        alpha = n / (n - p + 1.0)
        two_a = 2.0 * alpha
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(
            self, "c", (two_a - 1.0) / two_a ** (two_a / (two_a - 1.0))
        )
        object.__setattr__(self, "exponent", two_a / (two_a - 1.0))

    @property
    def constant(self) -> float:
        """(2 alpha)^n (2 alpha - 1), the right-hand side factor."""
        two_a = 2.0 * self.alpha
        return two_a**self.n * (two_a - 1.0)

    def u_tilde(self, y):
        return np.abs(np.asarray(y, dtype=float)) ** (2.0 * self.alpha)

    def v(self, r):
        return self.c * np.asarray(r, dtype=float) ** self.exponent

    def v_r(self, r):
        b = self.exponent
        return self.c * b * np.asarray(r, dtype=float) ** (b - 1.0)

    def v_rr(self, r):
        b = self.exponent
        return self.c * b * (b - 1.0) * np.asarray(r, dtype=float) ** (b - 2.0)

    def radius_at_slope(self, slope):
        """The r at which v_r = slope."""
        b = self.exponent
        return (np.asarray(slope, dtype=float) / (self.c * b)) ** (
            1.0 / (b - 1.0)
        )

    def f(self, psi):
        """Density on the sphere near the south pole, psi from -e_(n+1)."""
        cos = np.abs(np.cos(np.asarray(psi, dtype=float)))
        return self.constant * cos ** (-(self.n + 1.0 + self.p))

    def determinant_residual(self, radii) -> float:
        """
        max relative defect of det D^2 u~ = (2 alpha)^n (2 alpha - 1)
        u~^(p-1), with the radial determinant g''(g'/rho)^(n-1).
        """
        rho = np.asarray(radii, dtype=float)
        a2 = 2.0 * self.alpha
        g1 = a2 * rho ** (a2 - 1.0)
        g2 = a2 * (a2 - 1.0) * rho ** (a2 - 2.0)
        det = g2 * (g1 / rho) ** (self.n - 1)
        rhs = self.constant * self.u_tilde(rho) ** (self.p - 1.0)
        return float(np.max(np.abs(det - rhs) / rhs))

    def legendre_residual(self, radii) -> float:
        """max relative defect of r v_r - v = u~(v_r)."""
        r = np.asarray(radii, dtype=float)
        slope = self.v_r(r)
        lhs = r * slope - self.v(r)
        rhs = self.u_tilde(slope)
        return float(np.max(np.abs(lhs - rhs) / rhs))


def chou_wang_example(n: int, p: float) -> ChouWangExample:
    return ChouWangExample(n, p)
