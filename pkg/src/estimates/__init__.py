from src.estimates.harness import (
    DegenerateWindowError,
    ExponentFit,
    OriginNotInteriorError,
    RegimeViolationError,
    SolitonReport,
    bound_report,
    fit_exponent,
    make_soliton_field,
    normalized_series,
    soliton_selfsimilarity_check,
    verify_gauss_bound,
    verify_lambda_bound,
    verify_viscosity_lambda_bound,
)

__all__ = [
    "DegenerateWindowError",
    "ExponentFit",
    "OriginNotInteriorError",
    "RegimeViolationError",
    "SolitonReport",
    "bound_report",
    "fit_exponent",
    "make_soliton_field",
    "normalized_series",
    "soliton_selfsimilarity_check",
    "verify_gauss_bound",
    "verify_lambda_bound",
    "verify_viscosity_lambda_bound",
]
