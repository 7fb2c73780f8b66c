from src.cli.config import RunConfig
from src.flow.params import FlowParams, StepControl
from src.geometry.anisotropy import AnisotropyField
from src.geometry.grid import GridSpec
from src.geometry.shape import enclosing_radius
from src.geometry.support import SupportFunction
from src.minkowski.model import OdeParams


def build_grid(config: RunConfig) -> GridSpec:
    if config.n == 1:
        return GridSpec.circle(config.node_count)
    if config.n == 2:
        return GridSpec.axisymmetric(config.node_count)
    raise ValueError(f"flows run on S^1 or S^2, got n={config.n}")


def build_body(config: RunConfig, grid: GridSpec) -> SupportFunction:
    if config.shape == "ball":
        u = SupportFunction.ball(grid, config.rho0)
    elif config.shape == "ellipse":
        u = SupportFunction.ellipse(grid, config.shape_a, config.shape_b)
    else:
        u = SupportFunction.spheroid(grid, config.shape_a, config.shape_b)
    if config.shape_offset:
        u = u.translated(config.shape_offset)
    return u


def build_field(config: RunConfig) -> AnisotropyField:
    if config.field == "linear_axis":
        return AnisotropyField.linear_axis(
            config.field_eps, config.field_clip, config.field_scale
        )
    if config.field == "cosine_mode":
        return AnisotropyField.cosine_mode(
            config.field_eps, config.field_mode, config.field_scale
        )
    return AnisotropyField.constant(config.field_scale)


def build_flow_params(config: RunConfig) -> FlowParams:
    if config.alpha is None:
        raise ValueError(f"p={config.p:g} >= 1 has no flow exponent alpha")
    return FlowParams(config.n, config.alpha, build_field(config))


def default_t_end(params: FlowParams, u0: SupportFunction) -> float:
    """
    A little past the extinction time of the smallest origin-centred
    ball around u0 moving with the slowest speed min f K^alpha.
    """
    q = params.homogeneity
    slowest = params.field.min_on_sphere(params.sphere_kind)
    return 1.05 * enclosing_radius(u0) ** q / (q * slowest)


def build_control(
    config: RunConfig, params: FlowParams, u0: SupportFunction
) -> StepControl:
    t_end = config.t_end if config.t_end else default_t_end(params, u0)
    return StepControl(
        t_end=t_end,
        safety=config.safety,
        max_dt=config.max_dt,
        min_radius_stop=config.min_radius,
        snapshot_count=config.snapshots,
        diffusion_number=config.diffusion_number,
    )


def build_ode_params(config: RunConfig) -> OdeParams:
    return OdeParams(config.n, config.p)
