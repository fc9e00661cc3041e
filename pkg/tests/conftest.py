import pytest

from pwave.charpoly import PolyParams
from pwave.funcspace import Grid
from pwave.greenkernel import build_kernel
from pwave.pipeline import solve_wave

REF = (10.0, 1.0, 1.0)


@pytest.fixture(scope="session")
def ref_params():
    return PolyParams(*REF)


@pytest.fixture(scope="session")
def kernel(ref_params):
    return build_kernel(ref_params)


@pytest.fixture(scope="session")
def grid():
    return Grid(100.0, 0.01)


@pytest.fixture(scope="session")
def small_grid():
    return Grid(20.0, 0.05)


@pytest.fixture(scope="session")
def wave(grid):
    """Converged reference wave at r = 0."""
    return solve_wave(*REF, 0.0, grid)
