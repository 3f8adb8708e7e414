import numpy as np
import pytest
from numpy.testing import assert_allclose

from quasiquantal.errors import (AmplitudeBlowupError, ConfigurationError, PreconditionError,
                                 ScenarioError, SingularAmplitudeError)
from quasiquantal.grid import NumericsConfig
from quasiquantal.hamiltonian import Hamiltonian, Harmonic
from quasiquantal.quantum import (gaussian_packet, coherent_state, eigenstate, eigenvalue,
                                  plane_wave, wavefunction_from_spec, madelung_decompose,
                                  madelung_compose, quantum_potential_values, phase_gradient,
                                  modified_hj_residual, integrodifferential_residual,
                                  gradient_phase_residual, SplitStepPropagator, SchrodingerFlow,
                                  evolve_schrodinger, evolve_classical_wave, qt_expectations, width,
                                  expectation_series, ehrenfest_residuals, qt_energy_drift,
                                  qt_norm_drift)


COARSE = NumericsConfig(dt=1e-2)


## STATES =====================================================================
def test_gaussian_packet_is_normalized(grid_1d):
    psi = gaussian_packet(grid_1d, center=0.5, sigma=0.8, momentum=1.0)
    assert_allclose(psi.norm(), 1.0, atol=1e-12)
    assert_allclose(width(psi), 0.8, atol=1e-10)


def test_eigenvalues():
    H = Hamiltonian(mass=1.0, potential=Harmonic(omega=2.0))
    assert eigenvalue(H, 0) == 1.0
    assert eigenvalue(H, (1, 2), dim=2) == 8.0


def test_eigenstate_energy(grid_1d, harmonic):
    for n in range(3):
        psi = eigenstate(grid_1d, harmonic, n=n)
        assert_allclose(qt_expectations(psi, harmonic).energy, eigenvalue(harmonic, n), atol=1e-8)


def test_plane_wave_modes(grid_1d):
    psi = plane_wave(grid_1d, mode=2)
    assert_allclose(psi.density(), 1.0 / 16.0, atol=1e-12)
    with pytest.raises(ConfigurationError):
        plane_wave(grid_1d, mode=0.5)


def test_states_from_spec(grid_1d, grid_2d, free, harmonic):
    psi = wavefunction_from_spec({'type': 'coherent_state', 'center': 1.0}, grid_1d, harmonic)
    assert_allclose(width(psi), np.sqrt(0.5), atol=1e-10)
    psi = wavefunction_from_spec({'type': 'vortex_2d', 'charge': -1}, grid_2d, free)
    assert psi.values.shape == (64, 64)
    with pytest.raises(ScenarioError) as excinfo:
        wavefunction_from_spec({'type': 'coherent_state'}, grid_1d, free)
    assert excinfo.value.key == 'hamiltonian.type'
    with pytest.raises(ScenarioError, match='2D grid'):
        wavefunction_from_spec({'type': 'vortex_2d'}, grid_1d, free)
    with pytest.raises(ScenarioError, match='valid entries'):
        wavefunction_from_spec({'type': 'cat_state'}, grid_1d, free)


def test_wave_function_dataset(grid_1d):
    ds = gaussian_packet(grid_1d).to_dataset()
    assert set(ds.data_vars) == {'re_psi', 'im_psi', 'rho'}
    assert ds.attrs['hbar'] == 1.0
## [END] STATES ===============================================================


## MADELUNG ===================================================================
def test_decompose_moving_packet(grid_1d):
    psi = gaussian_packet(grid_1d, sigma=1.0, momentum=1.5)
    pair = madelung_decompose(psi)
    bulk = psi.density() > 1e-6
    assert_allclose(phase_gradient(psi)[0][bulk], 1.5, atol=1e-8)
    restored = madelung_compose(pair)
    keep = ~pair.mask
    assert_allclose(restored.values[keep], psi.values[keep], atol=1e-10)


def test_decompose_detects_seam_winding(grid_1d):
    psi = plane_wave(grid_1d, mode=2)
    pair = madelung_decompose(psi)
    assert pair.winding == (2,)
    assert_allclose(pair.action.linear, [2 * np.pi * 2 / 16.0])
    assert_allclose(pair.action.gradient().values[0], 2 * np.pi * 2 / 16.0, atol=1e-9)


def test_quantum_potential_of_gaussian(grid_1d):
    q = grid_1d.mesh[0]
    rho = np.exp(-0.5 * q ** 2) / np.sqrt(2 * np.pi)
    T_Q = quantum_potential_values(rho, grid_1d)
    bulk = np.abs(q) < 4.0
    # sqrt(rho) ~ exp(-q^2/4): lap / amplitude = q^2/4 - 1/2
    assert_allclose(T_Q[bulk], 0.5 * (0.25 * q[bulk] ** 2 - 0.5), atol=1e-6)


def test_modified_hj_needs_quantum_potential(grid_1d, harmonic):
    config = NumericsConfig(dt=1e-3)
    flow = SchrodingerFlow(harmonic, coherent_state(grid_1d, harmonic, center=1.0), config=config)
    psi_a = flow.advance_to(0.5)
    psi_b = flow.advance_to(0.502)
    assert modified_hj_residual(psi_a, psi_b, harmonic, config) < 1e-3
    assert modified_hj_residual(psi_a, psi_b, harmonic, config, include_quantum_potential=False) > 0.1
    assert np.all(integrodifferential_residual(psi_a, psi_b, harmonic, config) < 1e-3)
    with pytest.raises(PreconditionError):
        modified_hj_residual(psi_b, psi_a, harmonic, config)


def test_gradient_phase_identity(grid_2d):
    psi = gaussian_packet(grid_2d, center=(0.5, -0.3), sigma=0.8, momentum=(0.7, -0.4))
    assert gradient_phase_residual(psi) < 1e-6
## [END] MADELUNG =============================================================


## EVOLUTION ==================================================================
def test_free_spreading(wide_grid_1d, free):
    psi = evolve_schrodinger(free, gaussian_packet(wide_grid_1d, sigma=1.0), 2.0, config=COARSE)
    # sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)
    assert_allclose(width(psi), np.sqrt(2.0), atol=1e-6)
    assert_allclose(psi.norm(), 1.0, atol=1e-12)
    assert_allclose(psi.t, 2.0)


def test_coherent_state_follows_orbit(grid_1d, harmonic):
    psi0 = coherent_state(grid_1d, harmonic, center=1.0)
    psi = evolve_schrodinger(harmonic, psi0, 1.0, config=NumericsConfig(dt=1e-3))
    values = qt_expectations(psi, harmonic)
    assert_allclose(values.q[0], np.cos(1.0), atol=1e-5)
    assert_allclose(values.p[0], -np.sin(1.0), atol=1e-5)
    assert_allclose(values.p_from_phase[0], values.p[0], atol=1e-8)
    assert_allclose(width(psi), np.sqrt(0.5), atol=1e-5)


def test_unnormalized_start_rejected(grid_1d, free):
    psi = gaussian_packet(grid_1d)
    with pytest.raises(PreconditionError, match='normalized'):
        evolve_schrodinger(free, psi.with_values(2.0 * psi.values), 0.1)


def test_classical_wave_freezes_resting_packet(grid_1d, free):
    psi0 = gaussian_packet(grid_1d, sigma=1.0)
    config = NumericsConfig(dt=1e-3)
    classical = evolve_classical_wave(free, psi0, 0.5, config=config)
    quantum = evolve_schrodinger(free, psi0, 0.5, config=config)
    assert_allclose(width(classical), 1.0, atol=1e-4)
    assert_allclose(width(quantum), np.sqrt(1.0 + 1.0 / 16.0), atol=1e-6)


def test_classical_wave_rejects_nodes(grid_1d, harmonic):
    with pytest.raises(SingularAmplitudeError):
        evolve_classical_wave(harmonic, eigenstate(grid_1d, harmonic, n=1), 0.1, config=COARSE)


def test_classical_wave_blowup_bound(grid_1d, free):
    config = NumericsConfig(dt=1e-3, blowup_factor=1e-3)
    with pytest.raises(AmplitudeBlowupError) as excinfo:
        evolve_classical_wave(free, gaussian_packet(grid_1d), 0.1, config=config)
    assert excinfo.value.time == 0.0


def test_propagator_rejects_bad_step(grid_1d, free):
    with pytest.raises(PreconditionError):
        SplitStepPropagator(free, grid_1d, 0.0)


def test_schrodinger_flow_velocity(grid_1d, free):
    flow = SchrodingerFlow(free, gaussian_packet(grid_1d, momentum=1.5), config=COARSE)
    assert_allclose(flow.velocity_at(np.array([[0.0, 0.3]])), [[1.5, 1.5]], atol=1e-8)
    flow.advance_to(0.5)
    assert_allclose(flow.t, 0.5)
    # the packet centre has moved to 0.75
    assert_allclose(flow.momentum_at(np.array([[0.75]])), [[1.5]], atol=1e-8)
    with pytest.raises(PreconditionError):
        flow.advance_to(0.2)
## [END] EVOLUTION ============================================================


## DIAGNOSTICS ================================================================
def test_ehrenfest_quartic(grid_1d, quartic):
    psi0 = gaussian_packet(grid_1d, center=1.0, sigma=0.7)
    residuals = ehrenfest_residuals(quartic, psi0, 1.0, config=NumericsConfig(dt=1e-3))
    assert residuals.position < 1e-4
    assert residuals.momentum < 1e-4
    assert len(residuals.series) == 1001
    assert set(residuals.to_dict()) == {'position', 'momentum'}


@pytest.mark.parametrize('t', [0.0, 1e-3, 5e-4])
def test_ehrenfest_needs_two_steps(grid_1d, harmonic, t):
    psi0 = coherent_state(grid_1d, harmonic, center=1.0)
    with pytest.raises(PreconditionError, match='at least two steps'):
        ehrenfest_residuals(harmonic, psi0, t, config=NumericsConfig(dt=1e-3))


def test_ehrenfest_two_steps(grid_1d, harmonic):
    psi0 = coherent_state(grid_1d, harmonic, center=1.0)
    residuals = ehrenfest_residuals(harmonic, psi0, 2e-3, config=NumericsConfig(dt=1e-3))
    assert len(residuals.series) == 3
    assert residuals.position < 1e-4
    assert residuals.momentum < 1e-4


def test_series_drifts(grid_1d, harmonic):
    psi0 = coherent_state(grid_1d, harmonic, center=1.0)
    series, psi = expectation_series(harmonic, psi0, 2.0, config=NumericsConfig(dt=1e-3), every=100)
    assert len(series) == 21
    assert_allclose(series['t'].iloc[-1], 2.0)
    assert_allclose(psi.t, 2.0)
    assert qt_energy_drift(series) < 1e-5
    assert qt_norm_drift(series) < 1e-12
    assert {'q1', 'p1', 'p_from_phase1', 'force1', 'energy', 'norm'} <= set(series.columns)
## [END] DIAGNOSTICS ==========================================================
