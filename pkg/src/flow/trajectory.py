from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.common.errors import LabError
from src.flow.params import FlowParams
from src.geometry.anisotropy import FieldKind
from src.geometry.grid import GridSpec
from src.geometry.support import SupportFunction

DIAGNOSTIC_COLUMNS = ["t", "lambda_max", "K_max", "inradius", "diameter", "F_max"]


class TrajectoryInvariantError(LabError):
    """Raised when snapshot times or body size fail to be monotone"""

    pass


@dataclass(frozen=True)
class SnapshotDiagnostics:
    t: float
    lambda_max: float
    K_max: float
    inradius: float
    diameter: float
    F_max: float
    volume: float
    on_cadence: bool = True


@dataclass
class FlowTrajectory:
    """Snapshots (t, u) of a flow with their diagnostics."""

    grid: GridSpec
    states: List[SupportFunction] = field(default_factory=list)
    diagnostics: List[SnapshotDiagnostics] = field(default_factory=list)
    extinction_time: Optional[float] = None
    terminated_by: str = "t_end"

    def append(self, state: SupportFunction, diag: SnapshotDiagnostics) -> None:
        self.states.append(state)
        self.diagnostics.append(diag)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def times(self) -> np.ndarray:
        return np.array([d.t for d in self.diagnostics])

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(d, name) for d in self.diagnostics])

    @property
    def reference_time(self) -> float:
        """Extinction time when the run reached it, else the last time."""
        if self.extinction_time is not None:
            return self.extinction_time
        return float(self.times[-1])

    def cadence_indices(self) -> np.ndarray:
        return np.array(
            [i for i, d in enumerate(self.diagnostics) if d.on_cadence]
        )

    def monotonicity_violations(self) -> List[str]:
        problems = []
        times = self.times
        for name in ("diameter", "volume"):
            values = self.series(name)
            bad = np.nonzero(np.diff(values) >= 0.0)[0]
            problems.extend(
                f"{name} did not decrease between t={times[i]:.6g} and "
                f"t={times[i + 1]:.6g}"
                for i in bad
            )
        bad_t = np.nonzero(np.diff(times) <= 0.0)[0]
        problems.extend(f"time not increasing after index {i}" for i in bad_t)
        return problems

    def validate(self) -> None:
        problems = self.monotonicity_violations()
        if problems:
            raise TrajectoryInvariantError("; ".join(problems[:5]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(d) for d in self.diagnostics])

    def to_csv(self, path: Union[str, Path]) -> None:
        self.to_frame()[DIAGNOSTIC_COLUMNS].to_csv(
            path, index=False, float_format="%.17g"
        )

    def dump_snapshots(
        self, directory: Union[str, Path], stem: str = "snapshot"
    ) -> List[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for i, state in enumerate(self.states):
            path = directory / f"{stem}_{i:04d}.csv"
            state.to_csv(path)
            paths.append(path)
        return paths

    def rescaled(self, s: float, params: FlowParams) -> "FlowTrajectory":
        """
        The trajectory of s * u0: lengths times s and times by
        s^(n alpha + 1).
        """
        tau = s ** params.homogeneity
        out = FlowTrajectory(
            self.grid,
            extinction_time=None
            if self.extinction_time is None
            else tau * self.extinction_time,
            terminated_by=self.terminated_by,
        )
        for state, d in zip(self.states, self.diagnostics):
            out.append(
                state.scaled(s),
                SnapshotDiagnostics(
                    t=tau * d.t,
                    lambda_max=d.lambda_max / s,
                    K_max=d.K_max * s ** (-params.n),
                    inradius=d.inradius * s,
                    diameter=d.diameter * s,
                    F_max=d.F_max * s ** (1.0 - params.homogeneity),
                    volume=d.volume * s ** (params.n + 1),
                    on_cadence=d.on_cadence,
                ),
            )
        return out


def round_radius(rho0: float, params: FlowParams, t, f_value: float = 1.0):
    """(rho0^q - q c t)^(1/q), q = n alpha + 1, for f = c; zero past extinction."""
    q = params.homogeneity
    base = np.maximum(rho0**q - q * f_value * np.asarray(t, dtype=float), 0.0)
    return base ** (1.0 / q)


def round_trajectory(
    grid: GridSpec, params: FlowParams, rho0: float, times: Sequence[float]
) -> FlowTrajectory:
    """Closed-form shrinking ball for a constant field, sampled at `times`."""
    if params.field.kind is not FieldKind.CONSTANT:
        raise ValueError("the closed-form ball needs a constant field")
    c = params.field.max_on_sphere(params.sphere_kind)
    n = params.n
    sphere_volume = np.pi if n == 1 else 4.0 * np.pi / 3.0
    out = FlowTrajectory(grid)
    for t, rho in zip(times, round_radius(rho0, params, times, c)):
        out.append(
            SupportFunction.ball(grid, rho),
            SnapshotDiagnostics(
                t=float(t),
                lambda_max=1.0 / rho,
                K_max=rho ** (-n),
                inradius=rho,
                diameter=2.0 * rho,
                F_max=c * rho ** (-n * params.alpha),
                volume=sphere_volume * rho ** (n + 1),
            ),
        )
    return out
