from src.regularity.bodies import (
    ConvexityLostError,
    FlatPartReport,
    RadialGraphBody,
    ball_body,
    build_glued_body,
    cap_density_residuals,
    chou_wang_body,
    field_masses,
    flat_part_measure_check,
)
from src.regularity.chou_wang import (
    BadRangeError,
    ChouWangExample,
    chou_wang_example,
)
from src.regularity.holder import InsufficientDecadesError, holder_exponent

__all__ = [
    "BadRangeError",
    "ChouWangExample",
    "ConvexityLostError",
    "FlatPartReport",
    "InsufficientDecadesError",
    "RadialGraphBody",
    "ball_body",
    "build_glued_body",
    "cap_density_residuals",
    "chou_wang_body",
    "chou_wang_example",
    "field_masses",
    "flat_part_measure_check",
    "holder_exponent",
]
