from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from src.geometry.grid import GridKind, GridSpec

_SAMPLES = 4097


class FieldKind(Enum):
    CONSTANT = "constant"
    LINEAR_AXIS = "linear_axis"
    COSINE_MODE = "cosine_mode"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class AnisotropyField:
    """
    Positive function f on the normal sphere, parametrised by the grid
    angle (theta on S^1, polar angle phi on the axisymmetric S^2).

    Expressions:
      constant     f = scale
      linear_axis  f = scale * max(1 + eps * z_last, clip)
      cosine_mode  f = scale * (1 + eps * cos(mode * angle))
      tabulated    cubic spline through node values (periodic on S^1,
                   zero slope at the poles on S^2)
    `exponent` raises the whole expression to a power.
    """

    kind: FieldKind
    params: Dict[str, float] = field(default_factory=dict)
    table_grid: Optional[GridSpec] = None
    table_values: Optional[np.ndarray] = None
    exponent: float = 1.0

    def __post_init__(self):
        if self.kind is FieldKind.TABULATED:
            if self.table_grid is None or self.table_values is None:
                raise ValueError("tabulated field needs a grid and values")
            values = np.array(self.table_values, dtype=float)
            values.setflags(write=False)
            object.__setattr__(self, "table_values", values)
            object.__setattr__(self, "_spline", self._build_spline())
        for kind in self._kinds():
            lowest = self.min_on_sphere(kind)
            if not lowest > 0.0:
                raise ValueError(
                    f"{self.describe()} is not positive on the sphere "
                    f"(min {lowest:.3g})"
                )

    @classmethod
    def constant(cls, value: float = 1.0) -> "AnisotropyField":
        return cls(FieldKind.CONSTANT, {"scale": float(value)})

    @classmethod
    def linear_axis(
        cls, eps: float, clip: float = 0.05, scale: float = 1.0
    ) -> "AnisotropyField":
        return cls(
            FieldKind.LINEAR_AXIS,
            {"eps": float(eps), "clip": float(clip), "scale": float(scale)},
        )

    @classmethod
    def cosine_mode(
        cls, eps: float, mode: int = 2, scale: float = 1.0
    ) -> "AnisotropyField":
        return cls(
            FieldKind.COSINE_MODE,
            {"eps": float(eps), "mode": float(mode), "scale": float(scale)},
        )

    @classmethod
    def tabulated(cls, grid: GridSpec, values: np.ndarray) -> "AnisotropyField":
        return cls(FieldKind.TABULATED, {}, grid, values)

    def power(self, a: float) -> "AnisotropyField":
        return AnisotropyField(
            self.kind,
            dict(self.params),
            self.table_grid,
            self.table_values,
            self.exponent * a,
        )

    def describe(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        text = f"{self.kind.value}({args})"
        if self.exponent != 1.0:
            text += f"^{self.exponent:g}"
        return text

    def _kinds(self):
        if self.kind is FieldKind.TABULATED:
            return (self.table_grid.kind,)
        return (GridKind.CIRCLE, GridKind.AXISYMMETRIC)

    def _build_spline(self) -> CubicSpline:
        grid = self.table_grid
        if grid.is_circle:
            x = np.append(grid.angles, 2.0 * np.pi)
            y = np.append(self.table_values, self.table_values[0])
            return CubicSpline(x, y, bc_type="periodic")
        return CubicSpline(grid.angles, self.table_values, bc_type="clamped")

    def _base(self, angles: np.ndarray, kind: GridKind, nu: int) -> np.ndarray:
        """Expression before `exponent`, or its nu-th angular derivative."""
        a = np.asarray(angles, dtype=float)
        p = self.params
        if self.kind is FieldKind.TABULATED:
            if kind is not self.table_grid.kind:
                raise ValueError("tabulated field evaluated on the wrong sphere")
            if self.table_grid.is_circle:
                a = np.mod(a, 2.0 * np.pi)
            return self._spline(a, nu)
        if self.kind is FieldKind.CONSTANT:
            return np.full_like(a, p["scale"] if nu == 0 else 0.0)
        if self.kind is FieldKind.COSINE_MODE:
            k = p["mode"]
            if nu == 0:
                return p["scale"] * (1.0 + p["eps"] * np.cos(k * a))
            if nu == 1:
                return -p["scale"] * p["eps"] * k * np.sin(k * a)
            return -p["scale"] * p["eps"] * k**2 * np.cos(k * a)
        # linear_axis: z_last is sin(theta) on S^1 and cos(phi) on S^2
        if kind is GridKind.CIRCLE:
            z = (np.sin(a), np.cos(a), -np.sin(a))
        else:
            z = (np.cos(a), -np.sin(a), -np.cos(a))
        raw = 1.0 + p["eps"] * z[0]
        clipped = raw <= p["clip"]
        if nu == 0:
            return p["scale"] * np.where(clipped, p["clip"], raw)
        return np.where(clipped, 0.0, p["scale"] * p["eps"] * z[nu])

    def evaluate(
        self, angles: np.ndarray, kind: GridKind, derivative: int = 0
    ) -> np.ndarray:
        """f or its first/second derivative in the grid angle."""
        if derivative not in (0, 1, 2):
            raise ValueError("only derivatives of order 0, 1, 2 are available")
        g = self._base(angles, kind, 0)
        a = self.exponent
        if derivative == 0:
            return g**a
        g1 = self._base(angles, kind, 1)
        if derivative == 1:
            return a * g ** (a - 1.0) * g1
        g2 = self._base(angles, kind, 2)
        return a * (a - 1.0) * g ** (a - 2.0) * g1**2 + a * g ** (a - 1.0) * g2

    def on_grid(self, grid: GridSpec, derivative: int = 0) -> np.ndarray:
        return self.evaluate(grid.angles, grid.kind, derivative)

    def _sample(self, kind: GridKind) -> np.ndarray:
        stop = 2.0 * np.pi if kind is GridKind.CIRCLE else np.pi
        return self.evaluate(np.linspace(0.0, stop, _SAMPLES), kind)

    def max_on_sphere(self, kind: GridKind) -> float:
        return float(self._sample(kind).max())

    def min_on_sphere(self, kind: GridKind) -> float:
        return float(self._sample(kind).min())
