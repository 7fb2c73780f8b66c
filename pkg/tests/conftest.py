import pytest
from loguru import logger

from src.flow.params import FlowParams
from src.geometry.grid import GridSpec
from src.geometry.support import SupportFunction
from src.minkowski.model import OdeParams
from src.minkowski.picard import solve_profile


@pytest.fixture(autouse=True)
def quiet_logs():
    logger.remove()
    yield


@pytest.fixture
def circle_grid():
    return GridSpec.circle(64)


@pytest.fixture
def sphere_grid():
    return GridSpec.axisymmetric(65)


@pytest.fixture
def ellipse(circle_grid):
    return SupportFunction.ellipse(circle_grid, 1.5, 1.0)


@pytest.fixture
def curve_shortening():
    return FlowParams(n=1, alpha=1.0)


@pytest.fixture(scope="session")
def profile_m1():
    """Certified radial profile for n = 2, p = 0 (m = 1)."""
    return solve_profile(OdeParams(2, 0.0), mesh_size=512, tol=1e-12)
