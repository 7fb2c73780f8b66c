from src.minkowski.error import (
    ErrorTerms,
    ModulusNonpositiveError,
    error_functional,
    jensen_check,
)
from src.minkowski.lemmas import LemmaFits, lemma_bound_fits
from src.minkowski.model import (
    NormReport,
    OdeParams,
    RadialMesh,
    RadialSamples,
    brackets,
    graded_mesh,
    model_h,
    running_norm,
    weighted_norm,
)
from src.minkowski.picard import (
    NoContractionError,
    RadialProfile,
    integrate_operator,
    ode_residual,
    picard_step,
    solve_profile,
)

__all__ = [
    "ErrorTerms",
    "LemmaFits",
    "ModulusNonpositiveError",
    "NoContractionError",
    "NormReport",
    "OdeParams",
    "RadialMesh",
    "RadialProfile",
    "RadialSamples",
    "brackets",
    "error_functional",
    "graded_mesh",
    "integrate_operator",
    "jensen_check",
    "lemma_bound_fits",
    "model_h",
    "ode_residual",
    "picard_step",
    "running_norm",
    "solve_profile",
    "weighted_norm",
]
