import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from quasiquantal.errors import ScenarioError
from quasiquantal.grid import Grid
from quasiquantal.hamiltonian import (Hamiltonian, Free, Harmonic, Quartic, DoubleWell, GaussianWell,
                                      Tabulated, potential_from_spec, hamiltonian_from_spec)


POINTS = np.array([[-1.3, 0.0, 0.4, 2.1]])


@pytest.mark.parametrize('potential', [Harmonic(omega=1.7, mass=0.8), Quartic(lam=0.6),
                                       DoubleWell(a=0.5, b=1.2), GaussianWell(depth=2.0, width=0.7)])
def test_gradient_matches_finite_difference(potential):
    h = 1e-6
    numeric = (potential.value(POINTS + h) - potential.value(POINTS - h)) / (2 * h)
    assert_allclose(potential.gradient(POINTS)[0], numeric, rtol=1e-6, atol=1e-8)


def test_harmonic_energy_and_force(harmonic):
    q = np.array([[1.0, -2.0]])
    p = np.array([[0.5, 1.0]])
    assert_allclose(harmonic.energy(q, p), [0.625, 2.5])
    assert_allclose(harmonic.force(q), -q)
    assert_allclose(harmonic.lagrangian(q, p), [-0.375, -1.5])
    assert_allclose(harmonic.velocity_map(p), p)


def test_energy_in_two_dimensions():
    H = Hamiltonian(mass=2.0, potential=Harmonic(omega=1.0, mass=2.0))
    q = np.array([[1.0], [1.0]])
    p = np.array([[2.0], [0.0]])
    # |p|^2 / 2m + m w^2 |q|^2 / 2
    assert_allclose(H.energy(q, p), [1.0 + 2.0])


def test_free_potential_is_flat(free, grid_2d):
    assert np.all(free.potential.on_grid(grid_2d) == 0.0)
    assert free.force(grid_2d.mesh).shape == (2, 64, 64)


def test_nonpositive_mass_rejected():
    with pytest.raises(ScenarioError, match='mass'):
        Hamiltonian(mass=0.0)


def test_tabulated_potential_interpolates(grid_1d):
    q = grid_1d.mesh
    samples = np.exp(-0.5 * q[0] ** 2)
    potential = Tabulated(values=samples, grid=grid_1d)
    assert potential.on_grid(grid_1d) is potential.values
    off_grid = np.array([[0.03, -1.11]])
    assert_allclose(potential.value(off_grid), np.exp(-0.5 * off_grid[0] ** 2), atol=1e-10)
    assert_allclose(potential.gradient(off_grid)[0], -off_grid[0] * np.exp(-0.5 * off_grid[0] ** 2),
                    atol=1e-9)


def test_tabulated_rejects_non_finite(grid_1d):
    values = np.zeros(grid_1d.shape)
    values[3] = np.nan
    with pytest.raises(ScenarioError):
        Tabulated(values=values, grid=grid_1d)


def test_from_spec_catalog():
    assert potential_from_spec({'type': 'quartic', 'lambda': 2.0}) == Quartic(lam=2.0)
    assert potential_from_spec({}) == Free()
    H = hamiltonian_from_spec({'type': 'harmonic', 'omega': 2.0, 'mass': 3.0})
    assert H.mass == 3.0
    assert H.potential == Harmonic(omega=2.0, mass=3.0)


def test_from_spec_reports_key_path():
    with pytest.raises(ScenarioError) as excinfo:
        hamiltonian_from_spec({'type': 'harmonic', 'omega': -1.0})
    assert excinfo.value.key == 'hamiltonian.omega'
    assert str(excinfo.value).startswith('hamiltonian.omega: must be positive')


def test_from_spec_unknown_entries():
    with pytest.raises(ScenarioError) as excinfo:
        potential_from_spec({'type': 'morse'})
    assert 'harmonic' in excinfo.value.valid
    with pytest.raises(ScenarioError, match='unknown parameter'):
        potential_from_spec({'type': 'quartic', 'omega': 1.0})
    with pytest.raises(ScenarioError, match='must be a number'):
        potential_from_spec({'type': 'quartic', 'lam': 'big'})


def test_tabulated_from_csv(tmp_path):
    grid = Grid.uniform(1, 8.0, 16)
    path = tmp_path / 'V.csv'
    pd.DataFrame({'V': grid.axes[0] ** 2}).to_csv(path, index=False)
    potential = potential_from_spec({'type': 'tabulated', 'path': str(path)}, grid=grid)
    assert_allclose(potential.values, grid.axes[0] ** 2)


def test_tabulated_needs_grid_and_size():
    with pytest.raises(ScenarioError, match='grid is required'):
        potential_from_spec({'type': 'tabulated', 'values': [0.0] * 16})
    with pytest.raises(ScenarioError, match='expected 16 samples'):
        potential_from_spec({'type': 'tabulated', 'values': [0.0] * 8}, grid=Grid.uniform(1, 8.0, 16))
