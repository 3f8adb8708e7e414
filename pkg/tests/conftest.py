import os

import pytest

from quasiquantal.grid import Grid, NumericsConfig
from quasiquantal.hamiltonian import Hamiltonian, Free, Harmonic, Quartic


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full acceptance criteria, deselect with -m "not slow"')


@pytest.fixture
def grid_1d():
    return Grid.uniform(1, 16.0, 256)


@pytest.fixture
def wide_grid_1d():
    return Grid.uniform(1, 20.0, 256)


@pytest.fixture
def grid_2d():
    return Grid.uniform(2, 16.0, 64)


@pytest.fixture
def config():
    return NumericsConfig(dt=1e-3)


@pytest.fixture
def free():
    return Hamiltonian(mass=1.0, potential=Free())


@pytest.fixture
def harmonic():
    return Hamiltonian(mass=1.0, potential=Harmonic(omega=1.0, mass=1.0))


@pytest.fixture
def quartic():
    return Hamiltonian(mass=1.0, potential=Quartic(lam=1.0))


@pytest.fixture(autouse=True)
def restore_environment():
    '''Runs load .env files into os.environ; put it back after every test.'''
    saved = dict(os.environ)
    yield
    os.environ.clear()
    os.environ.update(saved)
