from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from pydantic import (
    BaseModel,
    Field,
    ValidationError,
    root_validator,
    validator,
)

from src.common.errors import ConfigError
from src.settings import default_workers

COMMANDS = ("flow", "soliton", "bounds", "ode", "holder", "measure")
LIST_KEYS = {"cap_angles"}
SWEEP_PREFIX = "sweep."


class RunConfig(BaseModel):
    """One lab run. Flat `key = value` files map onto these fields."""

    # problem
    n: int = 1
    alpha: Optional[float] = None
    p: Optional[float] = None
    # anisotropy f
    field: str = "constant"
    field_scale: float = 1.0
    field_eps: float = 0.0
    field_mode: int = 2
    field_clip: float = 0.05
    # initial body
    shape: str = "ellipse"
    shape_a: float = 1.5
    shape_b: float = 1.0
    shape_offset: float = 0.0
    rho0: float = 1.0
    nodes: Optional[int] = None
    # time stepping
    t_end: Optional[float] = None
    snapshots: int = 200
    safety: float = 0.05
    max_dt: float = 1e-2
    min_radius: float = 0.05
    diffusion_number: float = 0.2
    identity_tol: float = 5e-2
    soliton_tol: float = 1e-3
    # bounds
    ratio_cap: float = 10.0
    window_lo: float = 1e-3
    window_hi: float = 1e-1
    # radial ODE
    r0: float = 1.0
    tol: float = 1e-12
    mesh: int = 2048
    residual_tol: float = 1e-8
    # regularity
    holder_source: str = "profile"
    snap_tol: float = 0.03
    slope_tol: float = 0.05
    cap_angles: List[float] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
    flat_tol: float = 1e-6
    # output and execution
    out: str = "out"
    workers: int = Field(default_factory=default_workers)
    plots: bool = True
    dump_snapshots: bool = False
    sweep_target: str = "bounds"
    sweep: Dict[str, List[float]] = {}

    class Config:
        extra = "forbid"
        orm_mode = True

    @validator("n")
    def _positive_dimension(cls, v):
        if v < 1:
            raise ValueError("n must be at least 1")
        return v

    @validator("workers")
    def _positive_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v

    @validator("field")
    def _known_field(cls, v):
        if v not in ("constant", "linear_axis", "cosine_mode"):
            raise ValueError(f"unknown field {v!r}")
        return v

    @validator("shape")
    def _known_shape(cls, v):
        if v not in ("ball", "ellipse", "spheroid"):
            raise ValueError(f"unknown shape {v!r}")
        return v

    @validator("holder_source")
    def _known_source(cls, v):
        if v not in ("profile", "chou_wang"):
            raise ValueError(f"unknown holder_source {v!r}")
        return v

    @validator("sweep_target")
    def _known_target(cls, v):
        if v not in COMMANDS:
            raise ValueError(f"sweep_target must be one of {COMMANDS}")
        return v

    @validator("sweep")
    def _known_sweep_keys(cls, v):
        allowed = set(cls.__fields__) | {"m"}
        bad = sorted(set(v) - allowed)
        if bad:
            raise ValueError(f"unknown sweep keys {bad}")
        return v

    @root_validator(skip_on_failure=True)
    def _alpha_p_consistent(cls, values):
        alpha, p = values.get("alpha"), values.get("p")
        if alpha is not None and alpha <= 0.0:
            raise ValueError("alpha must be positive")
        if alpha is not None and p is not None:
            if abs(p - (1.0 - 1.0 / alpha)) > 1e-12:
                raise ValueError(
                    f"alpha={alpha:g} and p={p:g} disagree: the flow "
                    "carries p = 1 - 1/alpha"
                )
        elif alpha is not None:
            values["p"] = 1.0 - 1.0 / alpha
        elif p is not None:
            values["alpha"] = 1.0 / (1.0 - p) if p < 1.0 else None
        else:
            values["alpha"], values["p"] = 1.0, 0.0
        return values

    @property
    def m(self) -> float:
        return self.n + self.p - 1.0

    @property
    def node_count(self) -> int:
        if self.nodes is not None:
            return self.nodes
        return 64 if self.n == 1 else 65

    def echo(self) -> dict:
        return self.dict()


def _split_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_assignments(
    lines: Sequence[str], source: str = "<config>"
) -> Dict[str, Union[str, List[str], Dict[str, List[str]]]]:
    """`key = value` lines to a raw dict; later keys win."""
    raw: Dict = {}
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{source}:{number}: expected key = value")
        key, value = (part.strip() for part in text.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{number}: empty key")
        if key.startswith(SWEEP_PREFIX):
            raw.setdefault("sweep", {})[key[len(SWEEP_PREFIX):]] = _split_list(
                value
            )
        elif key in LIST_KEYS:
            raw[key] = _split_list(value)
        else:
            raw[key] = value
    return raw


def build_config(raw: dict) -> RunConfig:
    if not raw:
        raise ConfigError(
            "empty configuration: give a config file or --set key=value"
        )
    try:
        return RunConfig(**raw)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {e}") from e


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Sequence[str] = (),
    out: Optional[str] = None,
) -> RunConfig:
    """
    Read a config file (optional) and apply `key=value` overrides.
    `out` replaces the output directory once the user keys are known.
    """
    lines: List[str] = []
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file {path} not found")
        lines = path.read_text().splitlines()
    raw = parse_assignments(lines, str(path) if path else "<config>")
    extra = parse_assignments(overrides, "--set")
    sweep = {**raw.pop("sweep", {}), **extra.pop("sweep", {})}
    # an override of one of alpha / p replaces the pair
    for key, partner in (("alpha", "p"), ("p", "alpha")):
        if key in extra and partner not in extra:
            raw.pop(partner, None)
    raw.update(extra)
    if sweep:
        raw["sweep"] = sweep
    if raw and out is not None:
        raw["out"] = out
    return build_config(raw)


def cell_updates(config: RunConfig, cell: Dict[str, float]) -> dict:
    """
    Field updates for one sweep cell. `m` sets p = m - n + 1; sweeping
    p or m lets alpha follow p, sweeping alpha lets p follow alpha.
    """
    updates: dict = {}
    for key, value in cell.items():
        if key == "m":
            updates["p"] = value - cell.get("n", config.n) + 1.0
        else:
            updates[key] = value
    if "p" in updates and "alpha" not in updates:
        updates["alpha"] = None
    if "alpha" in updates and "p" not in updates:
        updates["p"] = None
    return updates
