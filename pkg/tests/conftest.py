import numpy as np
import pytest

from anyonbn.grids import build_angular_grid, build_spatial_grid, build_velocity_grid
from anyonbn.kernel import KernelSpec
from anyonbn.physics import AlphaParam


@pytest.fixture(scope="session")
def vg8():
    return build_velocity_grid(4.0, 8)


@pytest.fixture(scope="session")
def vg16():
    return build_velocity_grid(4.0, 16)


@pytest.fixture(scope="session")
def ang8():
    return build_angular_grid(8)


@pytest.fixture(scope="session")
def sg8():
    return build_spatial_grid(8)


@pytest.fixture(scope="session")
def spec():
    return KernelSpec(B0=1.0, gamma=0.1, gamma_prime=0.1)


@pytest.fixture(scope="session")
def bosons():
    return AlphaParam(0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def gaussian_slice(vg, amplitude=1.0, center=(0.3, 0.0), sigma=1.0):
    return amplitude * np.exp(
        -((vg.vx - center[0]) ** 2 + (vg.vy - center[1]) ** 2)
        / (2.0 * sigma ** 2))


def bose_slice(vg, T=0.5, mu=-0.5):
    return 1.0 / np.expm1((vg.vx ** 2 + vg.vy ** 2 - mu) / T)
