import numpy as np
import pytest


@pytest.fixture(scope="session")
def check_grid():
    """200 log-spaced points on [0.05, 20], the standard residual grid."""
    return np.geomspace(0.05, 20.0, 200)
