import dataclasses
from dataclasses import dataclass
from typing import Optional

from src.geometry.anisotropy import AnisotropyField
from src.geometry.grid import GridKind


@dataclass(frozen=True, eq=False)
class FlowParams:
    """
    Anisotropic alpha-Gauss curvature flow d_t x = -f(nu) K^alpha nu on
    an n-dimensional hypersurface. p = 1 - 1/alpha is the Lp exponent
    whose solitons this flow carries.
    """

    n: int
    alpha: float
    field: AnisotropyField = dataclasses.field(
        default_factory=AnisotropyField.constant
    )
    principal_regime: bool = False
    p: float = dataclasses.field(init=False)

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"n must be 1 or 2, got {self.n}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.principal_regime and (
            self.n < 2 or self.alpha > 1.0 / (self.n - 1)
        ):
            raise ValueError(
                "the principal curvature regime needs n >= 2 and "
                f"alpha <= 1/(n-1) (n={self.n}, alpha={self.alpha})"
            )
        object.__setattr__(self, "p", 1.0 - 1.0 / self.alpha)

    @property
    def homogeneity(self) -> float:
        """n alpha + 1, the exponent of the round solution."""
        return self.n * self.alpha + 1.0

    @property
    def sphere_kind(self) -> GridKind:
        return GridKind.CIRCLE if self.n == 1 else GridKind.AXISYMMETRIC


@dataclass(frozen=True)
class StepControl:
    """Time-step policy and stopping rules for evolve."""

    t_end: float
    safety: float = 0.05
    max_dt: float = 1e-2
    min_radius_stop: float = 0.05
    snapshot_count: int = 200
    diffusion_number: float = 0.2
    dt_growth: float = 1.5
    initial_dt: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.safety < 1.0:
            raise ValueError("safety must lie in (0, 1)")
        if not self.min_radius_stop > 0.0:
            raise ValueError("min_radius_stop must be positive")
        if not self.t_end > 0.0 or not self.max_dt > 0.0:
            raise ValueError("t_end and max_dt must be positive")
        if self.snapshot_count < 1:
            raise ValueError("snapshot_count must be at least 1")
        if not 0.0 < self.diffusion_number <= 0.5:
            raise ValueError("diffusion_number must lie in (0, 0.5]")
        if self.dt_growth < 1.0:
            raise ValueError("dt_growth must be >= 1")

    def scaled_time(self, c: float) -> "StepControl":
        """Same policy for a problem whose time runs c times faster."""
        return StepControl(
            t_end=self.t_end / c,
            safety=self.safety,
            max_dt=self.max_dt / c,
            min_radius_stop=self.min_radius_stop,
            snapshot_count=self.snapshot_count,
            diffusion_number=self.diffusion_number,
            dt_growth=self.dt_growth,
            initial_dt=None if self.initial_dt is None else self.initial_dt / c,
        )
