import math

import numpy as np
import pytest

from nrfilter import BandpassSpec, ModulationSpec, load_matrix

# published third-order matrix (13 dB equiripple return loss)
M3_ENTRIES = [
    [0, 0.8894, 0, 0, 0],
    [0.8894, 0, 0.8294, 0, 0],
    [0, 0.8294, 0, 0.8294, 0],
    [0, 0, 0.8294, 0, 0.8894],
    [0, 0, 0, 0.8894, 0],
]

# published fourth-order matrix (18.5 dB equiripple return loss)
M4_ENTRIES = [
    [0, 0.997, 0, 0, 0, 0],
    [0.997, 0, 0.873, 0, 0, 0],
    [0, 0.873, 0, 0.68, 0, 0],
    [0, 0, 0.68, 0, 0.873, 0],
    [0, 0, 0, 0.873, 0, 0.997],
    [0, 0, 0, 0, 0.997, 0],
]


@pytest.fixture(scope="session")
def m3():
    return load_matrix(M3_ENTRIES)


@pytest.fixture(scope="session")
def m4():
    return load_matrix(M4_ENTRIES)


@pytest.fixture(scope="session")
def spec3():
    return BandpassSpec(f0=975e6, fb=0.048)


@pytest.fixture(scope="session")
def spec4():
    return BandpassSpec(f0=890e6, fb=0.065)


@pytest.fixture(scope="session")
def mod3():
    return ModulationSpec.progressive(
        fm=22.8e6, delta_m=0.050, dphi=math.radians(35.0), n=3, nhar=7
    )


@pytest.fixture(scope="session")
def mod4():
    return ModulationSpec.progressive(
        fm=19e6, delta_m=0.076, dphi=math.radians(48.0), n=4, nhar=9
    )


def assert_all_close(a, b, tol):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol
