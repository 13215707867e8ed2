import numpy as np
import pytest

from fluoro.data import xyz_basis, xyzu_basis
from fluoro.spectral import DEFAULT_GRID


@pytest.fixture(scope="session")
def grid():
    return DEFAULT_GRID


@pytest.fixture(scope="session")
def basis_xyz():
    return xyz_basis()


@pytest.fixture(scope="session")
def basis_xyzu():
    return xyzu_basis()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
