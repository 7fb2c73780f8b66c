import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from src.common.errors import LabError
from src.schemas.reports import HolderEstimate

MIN_DECADES = 2.0


class InsufficientDecadesError(LabError):
    """Raised when the fit window spans fewer than two decades in r"""

    pass


def holder_exponent(
    r,
    v_r,
    window: Optional[Tuple[float, float]] = None,
    snap_tol: float = 0.03,
    residual_tol: float = 0.05,
) -> HolderEstimate:
    """
    Fit v_r ~ r^s on a log-log window and read off C^(k, gamma) with
    k + gamma = 1 + s, snapping the total to an integer within
    snap_tol. The fit is accepted when its rms residual is at most
    residual_tol.
    """
    r = np.asarray(r, dtype=float)
    v_r = np.asarray(v_r, dtype=float)
    mask = (r > 0.0) & (v_r > 0.0)
    if window is not None:
        mask &= (r >= window[0]) & (r <= window[1])
    if mask.sum() < 2:
        raise InsufficientDecadesError("fewer than two usable samples")
    x, y = np.log(r[mask]), np.log(v_r[mask])
    lo, hi = float(r[mask].min()), float(r[mask].max())
    decades = math.log10(hi / lo)
    if decades < MIN_DECADES:
        raise InsufficientDecadesError(
            f"window [{lo:.3g}, {hi:.3g}] spans {decades:.2f} decades"
        )
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))

    total = 1.0 + float(slope)
    nearest = round(total)
    if abs(total - nearest) <= snap_tol:
        total = float(nearest)
    k = math.ceil(total) - 1
    estimate = HolderEstimate(
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        window=(lo, hi),
        total=total,
        k=k,
        gamma=total - k,
        accepted=residual <= residual_tol,
    )
    logger.debug("holder fit over {:.2f} decades: {}", decades, estimate)
    return estimate
