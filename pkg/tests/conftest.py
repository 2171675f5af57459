import numpy as np
import pytest

from shiftsplit import SaddleSystem, SparseMatrix, build_stokes


def single(value):
    """1x1 sparse matrix holding one value."""
    return SparseMatrix.from_coo(1, 1, [0], [0], [float(value)])


@pytest.fixture(scope="session")
def toy():
    """Smallest saddle system with worked-out expected values: A=[2], B=C=[1]."""
    return SaddleSystem(single(2.0), single(1.0), single(1.0), 1, 1, c_equals_kb=1.0)


@pytest.fixture(scope="session")
def stokes4():
    return build_stokes(4)


@pytest.fixture(scope="session")
def stokes8():
    return build_stokes(8)


@pytest.fixture(scope="session")
def stokes16():
    return build_stokes(16)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
