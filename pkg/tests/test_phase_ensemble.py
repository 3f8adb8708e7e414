import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from quasiquantal.errors import ConfigurationError, ScenarioError
from quasiquantal.grid import NumericsConfig, PhaseGrid
from quasiquantal.phase_ensemble import (integrate, step_count, PhaseState, PhaseDensity, PhaseAction,
                                         GaussianPhaseDensity, PolynomialPhaseAction,
                                         phase_field_from_csv, integrate_characteristic, energy_drift,
                                         evolve_liouville, phase_action_at, evolve_phase_action,
                                         evolve_phase_wavefunction, grid_expectations,
                                         monte_carlo_expectations)


COARSE = NumericsConfig(dt=1e-2)


def test_step_count():
    assert step_count(1.0, 0.3) == 4
    assert step_count(1.0, 0.25) == 4
    assert step_count(-1.0, 0.25) == 4
    assert step_count(1e-6, 0.25) == 1


def test_unknown_integrator():
    with pytest.raises(ConfigurationError, match='unknown integrator'):
        integrate(None, [[0.0]], [[0.0]], 1.0, 0.1, method='euler')


@pytest.mark.parametrize('method', ['rk4', 'verlet', 'yoshida4'])
def test_free_motion_is_exact(free, method):
    q, p, _ = integrate(free, [[0.5]], [[2.0]], 1.5, 0.1, method=method)
    assert_allclose(q, [[3.5]])
    assert_allclose(p, [[2.0]])


def test_harmonic_period_returns_to_start(harmonic, config):
    state = integrate_characteristic(harmonic, PhaseState(q=[1.0], p=[0.0]), 2 * np.pi, config=config)
    assert_allclose(state.q, [1.0], atol=1e-9)
    assert_allclose(state.p, [0.0], atol=1e-9)
    assert_allclose(state.t, 2 * np.pi)


def test_backward_integration_inverts_forward(quartic):
    q, p, _ = integrate(quartic, [[0.3, -1.0]], [[1.0, 0.2]], 0.8, 1e-3)
    q0, p0, _ = integrate(quartic, q, p, -0.8, 1e-3)
    assert_allclose(q0, [[0.3, -1.0]], atol=1e-10)
    assert_allclose(p0, [[1.0, 0.2]], atol=1e-10)


@pytest.mark.parametrize('method', ['rk4', 'verlet', 'yoshida4'])
def test_action_along_harmonic_orbit(harmonic, method):
    # q = cos t, p = -sin t: L = -cos(2t) / 2, int_0^{pi/4} L = -1/4
    _, _, s = integrate(harmonic, [[1.0]], [[0.0]], np.pi / 4, 1e-3, method=method, s=[0.0])
    assert_allclose(s, [-0.25], atol=1e-6)


def test_energy_drift_is_small(quartic):
    state0 = PhaseState(q=[1.0], p=[0.5])
    assert energy_drift(quartic, state0, 10.0, dt=1e-2, method='yoshida4') < 1e-5
    assert energy_drift(quartic, state0, 10.0, dt=1e-3) < 1e-8


def test_phase_state_validation():
    with pytest.raises(ConfigurationError):
        PhaseState(q=[0.0, 1.0], p=[0.0])
    with pytest.raises(ConfigurationError):
        PhaseState(q=[np.inf], p=[0.0])


def test_gaussian_phase_density_normalized():
    grid = PhaseGrid.from_extents(16.0, 128, 16.0, 128)
    density = PhaseDensity.from_profile(GaussianPhaseDensity(mean=(1.0, -0.5), cov=((1.0, 0.3), (0.3, 0.5))),
                                        grid)
    assert_allclose(density.norm(), 1.0, atol=1e-10)


def test_gaussian_phase_density_rejects_bad_covariance():
    with pytest.raises(ConfigurationError):
        GaussianPhaseDensity(cov=((1.0, 2.0), (2.0, 1.0)))


def test_liouville_free_shear(free):
    grid = PhaseGrid.from_extents(16.0, 128, 8.0, 64)
    profile = GaussianPhaseDensity(mean=(0.0, 0.5), cov=((0.5, 0.0), (0.0, 0.25)))
    rho0 = PhaseDensity.from_profile(profile, grid)
    rho = evolve_liouville(free, rho0, 1.0, config=COARSE)
    q, p = grid.mesh
    assert rho.t == 1.0
    assert_allclose(rho.values, profile(q - p, p), atol=2e-3)
    assert_allclose(rho.norm(), 1.0, atol=1e-3)


def test_liouville_zero_time_is_a_copy(free):
    grid = PhaseGrid.from_extents(8.0, 32, 8.0, 32)
    rho0 = PhaseDensity.from_profile(GaussianPhaseDensity(), grid)
    rho = evolve_liouville(free, rho0, 0.0)
    assert rho.values is not rho0.values
    assert_allclose(rho.values, rho0.values)


def test_harmonic_expectations_rotate(harmonic):
    grid = PhaseGrid.from_extents(12.0, 128, 12.0, 128)
    rho0 = PhaseDensity.from_profile(GaussianPhaseDensity(mean=(1.0, 0.0), cov=((0.1, 0.0), (0.0, 0.1))),
                                     grid)
    before = grid_expectations(harmonic, rho0)
    after = grid_expectations(harmonic, evolve_liouville(harmonic, rho0, np.pi / 2, config=COARSE))
    assert_allclose(before['q'], 1.0, atol=1e-8)
    assert_allclose(after['q'], 0.0, atol=2e-3)
    assert_allclose(after['p'], -1.0, atol=2e-3)
    assert_allclose(after['H'], before['H'], atol=2e-3)
    assert_allclose(after['norm'], 1.0, atol=1e-3)


def test_free_action_gains_kinetic_term(free):
    q = np.array([0.0, 1.0, -2.0])
    p = np.array([1.0, 2.0, 0.5])
    S = phase_action_at(free, PolynomialPhaseAction(q_coefficients=(0.0, 1.0)), q, p, 2.0, config=COARSE)
    # S0 = q at the foot q - p t, plus p^2 t / 2
    assert_allclose(S, (q - 2.0 * p) + p ** 2, atol=1e-10)


def test_evolve_phase_action_on_grid(free):
    grid = PhaseGrid.from_extents(8.0, 32, 8.0, 32)
    S0 = PhaseAction.from_profile(PolynomialPhaseAction(), grid)
    S = evolve_phase_action(free, S0, 1.0, config=COARSE)
    _, p = grid.mesh
    assert S.t == 1.0
    assert_allclose(S.values, 0.5 * p ** 2, atol=1e-10)


def test_phase_wavefunction_modulus(free):
    grid = PhaseGrid.from_extents(16.0, 64, 8.0, 64)
    rho0 = PhaseDensity.from_profile(GaussianPhaseDensity(cov=((0.5, 0.0), (0.0, 0.5))), grid)
    S0 = PhaseAction.from_profile(PolynomialPhaseAction(), grid)
    psi = evolve_phase_wavefunction(free, rho0, S0, 0.5, config=COARSE)
    rho = evolve_liouville(free, rho0, 0.5, config=COARSE)
    assert np.iscomplexobj(psi)
    assert_allclose(np.abs(psi) ** 2, np.clip(rho.values, 0.0, None), atol=1e-12)


def test_phase_action_off_grid_interpolation():
    grid = PhaseGrid.from_extents(8.0, 64, 8.0, 64)
    q, p = grid.mesh
    S = PhaseAction(values=q + 2 * p, grid=grid)
    assert_allclose(S.at(np.array([0.1]), np.array([-0.3])), [-0.5], atol=1e-8)


def test_monte_carlo_agrees_with_orbit(harmonic):
    density = GaussianPhaseDensity(mean=(1.0, 0.5), cov=((0.04, 0.0), (0.0, 0.04)))
    estimates = monte_carlo_expectations(harmonic, density, 1.0, samples=20000, seed=3, config=COARSE,
                                         antithetic=False)
    exact = {'q': np.cos(1.0) + 0.5 * np.sin(1.0),
             'p': -np.sin(1.0) + 0.5 * np.cos(1.0),
             'H': 0.5 * (1.0 + 0.25) + 0.04}
    for name, value in exact.items():
        estimate = estimates[name]
        assert estimate.standard_error > 0
        assert abs(estimate.mean - value) < 5 * estimate.standard_error


def test_antithetic_means_are_exact_for_linear_flow(harmonic):
    density = GaussianPhaseDensity(mean=(1.0, 0.0), cov=((0.1, 0.0), (0.0, 0.1)))
    estimates = monte_carlo_expectations(harmonic, density, 0.5, samples=1000, config=COARSE)
    # reflected pairs cancel exactly under a linear map
    assert_allclose(estimates['q'].mean, np.cos(0.5), atol=1e-8)
    assert_allclose(estimates['p'].mean, -np.sin(0.5), atol=1e-8)


def test_phase_field_from_csv_any_order(tmp_path):
    grid = PhaseGrid.from_extents(4.0, 4, 4.0, 8)
    q, p = grid.mesh
    df = pd.DataFrame({'q': q.ravel(), 'p': p.ravel(), 'value': (q + 10 * p).ravel()})
    path = tmp_path / 'rho.csv'
    df.sample(frac=1.0, random_state=1).to_csv(path, index=False)
    assert_allclose(phase_field_from_csv(path, grid), q + 10 * p)


def test_phase_field_from_csv_validation(tmp_path):
    grid = PhaseGrid.from_extents(4.0, 4, 4.0, 8)
    path = tmp_path / 'rho.csv'
    pd.DataFrame({'q': [0.0], 'value': [1.0]}).to_csv(path, index=False)
    with pytest.raises(ScenarioError, match='missing columns'):
        phase_field_from_csv(path, grid)
    pd.DataFrame({'q': [0.0], 'p': [0.0], 'value': [1.0]}).to_csv(path, index=False)
    with pytest.raises(ScenarioError, match='expected 32 rows'):
        phase_field_from_csv(path, grid)


def test_phase_field_from_csv_rejects_misplaced_nodes(tmp_path):
    grid = PhaseGrid.from_extents(4.0, 4, 4.0, 8)
    q, p = grid.mesh
    nodes = pd.DataFrame({'q': q.ravel(), 'p': p.ravel(), 'value': np.arange(32.0)})
    wider = PhaseGrid.from_extents(8.0, 4, 4.0, 8)
    wq, wp = wider.mesh
    duplicated = nodes.copy()
    duplicated.iloc[-1] = duplicated.iloc[0]
    tables = {'shifted': nodes.assign(q=nodes['q'] + 0.25),
              'duplicated': duplicated,
              'wider_box': pd.DataFrame({'q': wq.ravel(), 'p': wp.ravel(), 'value': np.arange(32.0)})}
    for label, df in tables.items():
        path = tmp_path / f'{label}.csv'
        df.to_csv(path, index=False)
        with pytest.raises(ScenarioError, match='phase grid nodes') as excinfo:
            phase_field_from_csv(path, grid, key='initial_state.phase_density')
        assert excinfo.value.key == 'initial_state.phase_density.path'
