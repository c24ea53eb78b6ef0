import numpy as np
import pytest
from hypothesis import settings

from geohull.spaces import make_space

# numba compilation on first use can blow any per-example deadline
settings.register_profile("geohull", deadline=None)
settings.load_profile("geohull")


@pytest.fixture(scope="session")
def e1():
    return make_space("e1")


@pytest.fixture(scope="session")
def e2():
    return make_space("e2")


@pytest.fixture(scope="session")
def h2():
    return make_space("h2")


@pytest.fixture(scope="session")
def h2xr():
    return make_space("h2xr")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
