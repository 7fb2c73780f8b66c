from src.geometry.anisotropy import AnisotropyField, FieldKind
from src.geometry.curvature import (
    CurvatureData,
    NonConvexError,
    PoleSingularError,
    curvature,
    curvature_axisym,
    curvature_circle,
)
from src.geometry.grid import GridKind, GridSpec
from src.geometry.measures import (
    LpMeasure,
    OriginOnBoundaryError,
    check_generalized_solution,
    enclosed_volume,
    inradius_bound_check,
    lp_measure,
    volume_bound_check,
)
from src.geometry.shape import (
    body_points,
    diameter,
    inradius,
    reconstruction_residual,
)
from src.geometry.support import SupportFunction

__all__ = [
    "AnisotropyField",
    "CurvatureData",
    "FieldKind",
    "GridKind",
    "GridSpec",
    "LpMeasure",
    "NonConvexError",
    "OriginOnBoundaryError",
    "PoleSingularError",
    "SupportFunction",
    "body_points",
    "check_generalized_solution",
    "curvature",
    "curvature_axisym",
    "curvature_circle",
    "diameter",
    "enclosed_volume",
    "inradius",
    "inradius_bound_check",
    "lp_measure",
    "reconstruction_residual",
    "volume_bound_check",
]
