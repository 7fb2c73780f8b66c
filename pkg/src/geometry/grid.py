from dataclasses import dataclass
from enum import Enum

import numpy as np


class GridKind(Enum):
    CIRCLE = "circle"
    AXISYMMETRIC = "axisymmetric"


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform angular grid on S^1 (periodic, theta in [0, 2pi)) or on the
    meridian of an axisymmetric S^2 (polar angle phi in [0, pi], poles
    included).
    """

    kind: GridKind
    node_count: int

    def __post_init__(self):
        if self.kind is GridKind.CIRCLE:
            if self.node_count < 16 or self.node_count % 2:
                raise ValueError(
                    "circle grid needs an even node_count >= 16, got "
                    f"{self.node_count}"
                )
        elif self.node_count < 17 or self.node_count % 2 == 0:
            raise ValueError(
                "axisymmetric grid needs an odd node_count >= 17, got "
                f"{self.node_count}"
            )

    @classmethod
    def circle(cls, node_count: int) -> "GridSpec":
        return cls(GridKind.CIRCLE, node_count)

    @classmethod
    def axisymmetric(cls, node_count: int) -> "GridSpec":
        return cls(GridKind.AXISYMMETRIC, node_count)

    @property
    def is_circle(self) -> bool:
        return self.kind is GridKind.CIRCLE

    @property
    def dimension(self) -> int:
        """n, the dimension of the hypersurface (S^n is the normal sphere)."""
        return 1 if self.is_circle else 2

    @property
    def spacing(self) -> float:
        if self.is_circle:
            return 2.0 * np.pi / self.node_count
        return np.pi / (self.node_count - 1)

    @property
    def angles(self) -> np.ndarray:
        return np.arange(self.node_count) * self.spacing

    @property
    def normals(self) -> np.ndarray:
        """
        Node normals. Circle: (cos t, sin t). Axisymmetric: the meridian
        representative (sin phi, cos phi) in the (rho, z) half-plane, so
        the last component is always z_{n+1}.
        """
        a = self.angles
        if self.is_circle:
            return np.column_stack([np.cos(a), np.sin(a)])
        return np.column_stack([np.sin(a), np.cos(a)])

    def antipodes(self) -> np.ndarray:
        """Index of the node carrying -z for every node."""
        j = np.arange(self.node_count)
        if self.is_circle:
            return (j + self.node_count // 2) % self.node_count
        return self.node_count - 1 - j

    def cell_edges(self) -> np.ndarray:
        """Cell boundaries around every node, clipped to [0, pi] on S^2."""
        h = self.spacing
        lo = self.angles - h / 2
        hi = self.angles + h / 2
        if not self.is_circle:
            lo = np.clip(lo, 0.0, np.pi)
            hi = np.clip(hi, 0.0, np.pi)
        return np.column_stack([lo, hi])

    def cell_areas(self) -> np.ndarray:
        """Spherical measure of each cell: arc length on S^1, band area on S^2."""
        edges = self.cell_edges()
        if self.is_circle:
            return edges[:, 1] - edges[:, 0]
        return 2.0 * np.pi * (np.cos(edges[:, 0]) - np.cos(edges[:, 1]))

    def sphere_area(self) -> float:
        return 2.0 * np.pi if self.is_circle else 4.0 * np.pi

    def refined(self) -> "GridSpec":
        """Same kind with the spacing halved."""
        if self.is_circle:
            return GridSpec(self.kind, 2 * self.node_count)
        return GridSpec(self.kind, 2 * self.node_count - 1)
