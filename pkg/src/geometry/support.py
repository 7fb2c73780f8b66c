from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np
import pandas as pd

from src.geometry.grid import GridKind, GridSpec

_AXES = ("x", "y", "z")


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SupportFunction:
    """
    Support function u(z) = max <x, z> of a convex body, sampled at the
    grid nodes. Values and offset are read-only arrays so instances can
    be shared between threads.
    """

    grid: GridSpec
    values: np.ndarray
    center_offset: np.ndarray = field(default=None)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (self.grid.node_count,):
            raise ValueError(
                f"expected {self.grid.node_count} values, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("support function values must be finite")
        offset = self.center_offset
        if offset is None:
            offset = np.zeros(self.grid.dimension + 1)
        offset = _frozen(offset)
        if offset.shape != (self.grid.dimension + 1,):
            raise ValueError(
                f"center_offset must have {self.grid.dimension + 1} components"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "center_offset", offset)

    @classmethod
    def from_function(
        cls, grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray]
    ) -> "SupportFunction":
        """Sample fn(angles) at the grid nodes."""
        return cls(grid, fn(grid.angles))

    @classmethod
    def ball(
        cls, grid: GridSpec, radius: float = 1.0, center: Sequence[float] = None
    ) -> "SupportFunction":
        u = cls(grid, np.full(grid.node_count, float(radius)))
        if center is not None:
            u = u.translated(center)
        return u

    @classmethod
    def ellipse(cls, grid: GridSpec, a: float, b: float) -> "SupportFunction":
        """Ellipse with semi-axis a along x and b along y."""
        if not grid.is_circle:
            raise ValueError("ellipse needs a circle grid")
        t = grid.angles
        return cls(grid, np.sqrt((a * np.cos(t)) ** 2 + (b * np.sin(t)) ** 2))

    @classmethod
    def spheroid(cls, grid: GridSpec, a: float, b: float) -> "SupportFunction":
        """Spheroid with polar semi-axis a and equatorial semi-axis b."""
        if grid.is_circle:
            raise ValueError("spheroid needs an axisymmetric grid")
        phi = grid.angles
        return cls(
            grid, np.sqrt((a * np.cos(phi)) ** 2 + (b * np.sin(phi)) ** 2)
        )

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    def with_values(self, values: np.ndarray) -> "SupportFunction":
        return SupportFunction(self.grid, values, self.center_offset)

    def scaled(self, s: float) -> "SupportFunction":
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return SupportFunction(
            self.grid, s * self.values, s * self.center_offset
        )

    def translated(self, c: Union[float, Sequence[float]]) -> "SupportFunction":
        """
        Support function of the body moved by c: u + <c, z>. On an
        axisymmetric grid only translations along the axis are allowed
        (a float is read as the axial component).
        """
        ambient = self.grid.dimension + 1
        if np.isscalar(c):
            shift = np.zeros(ambient)
            shift[-1] = float(c)
        else:
            shift = np.asarray(c, dtype=float)
        if shift.shape != (ambient,):
            raise ValueError(f"translation must have {ambient} components")
        if not self.grid.is_circle and np.any(shift[:-1] != 0.0):
            raise ValueError(
                "axisymmetric bodies can only be translated along the axis"
            )
        if self.grid.is_circle:
            dot = self.grid.normals @ shift
        else:
            dot = shift[-1] * self.grid.normals[:, 1]
        return SupportFunction(
            self.grid, self.values + dot, self.center_offset + shift
        )

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def to_csv(self, path: Union[str, Path]) -> None:
        """
        Write `kind,node_count,offset_x,...` header and values, then one
        `angle,value` row per node at 17 significant digits.
        """
        ambient = self.grid.dimension + 1
        header = ["kind", "node_count"] + [
            f"offset_{axis}" for axis in _AXES[:ambient]
        ]
        meta = [self.grid.kind.value, str(self.grid.node_count)] + [
            "%.17g" % c for c in self.center_offset
        ]
        df = pd.DataFrame({"angle": self.grid.angles, "value": self.values})
        with open(path, "w", newline="") as handle:
            handle.write(",".join(header) + "\n")
            handle.write(",".join(meta) + "\n")
            df.to_csv(handle, index=False, float_format="%.17g")

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SupportFunction":
        with open(path, newline="") as handle:
            header = handle.readline().strip().split(",")
            meta = handle.readline().strip().split(",")
            df = pd.read_csv(handle, dtype=float, float_precision="round_trip")
        record = dict(zip(header, meta))
        grid = GridSpec(GridKind(record["kind"]), int(record["node_count"]))
        offset = [
            float(record[key]) for key in header if key.startswith("offset_")
        ]
        if not np.allclose(df["angle"].to_numpy(), grid.angles, atol=1e-14):
            raise ValueError(f"{path}: angles do not match a {grid.kind.value} grid")
        return cls(grid, df["value"].to_numpy(), np.array(offset))
