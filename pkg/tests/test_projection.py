import numpy as np
import pytest
from numpy.testing import assert_allclose

from quasiquantal.errors import CausticError, PreconditionError, ScenarioError, TrajectoryUndefinedError
from quasiquantal.grid import Grid, NumericsConfig
from quasiquantal.projection import (QuadraticAction, GaussianBumpAction, GaussianDensity, RigidRotation,
                                     zero_action, quadratic_action, action_from_spec, density_from_spec,
                                     momentum_from_spec, MomentumField, ConfigAction, ConfigDensity,
                                     CharacteristicFlow, evolve_canonical_condition, evolve_hj_continuity,
                                     flow_from_action, extract_trajectory, lift_action,
                                     consistency_s_minus_S, trajectory_agreement, vorticity,
                                     continuity_residual, half_density_residual, hj_residual)


COARSE = NumericsConfig(dt=1e-2)


@pytest.fixture
def small_grid():
    return Grid.uniform(1, 8.0, 128)


@pytest.fixture
def focusing(small_grid):
    '''S0 = -q^2/2 with a unit Gaussian: characteristics q0 (1 - t) meet at t = 1.'''
    S0 = ConfigAction.from_profile(quadratic_action(-1.0), small_grid)
    rho0 = ConfigDensity.from_profile(GaussianDensity(center=[0.0]), small_grid)
    return S0, rho0


def burgers_fields(grid, t):
    s = 1.0 - t
    rho = ConfigDensity(values=GaussianDensity(center=[0.0]).value(grid.mesh / s) / s, grid=grid, t=t)
    M = MomentumField.from_profile(QuadraticAction(hessian=[[-1.0 / s]], linear=[0.0]), grid, t=t)
    S = ConfigAction.from_profile(quadratic_action(-1.0 / s), grid, t=t)
    return rho, M, S


## CAUSTICS ===================================================================
def test_focusing_caustic_time(free, focusing, config):
    S0, rho0 = focusing
    flow = flow_from_action(free, S0, rho0, config=config)
    assert flow.advance_to(1.5, strict=False) is False
    report = flow.report(requested_time=1.5)
    assert report.detected
    assert report.multivalued
    # det dq/dq0 = 1 - t reaches the threshold 1e-3 at t = 0.999
    assert_allclose(report.time, 1.0 - config.caustic_threshold, atol=1e-6)
    assert abs(report.location[0]) < 4.0
    assert report.to_dict()['multivalued'] is True


def test_strict_advance_raises(free, focusing, config):
    S0, rho0 = focusing
    flow = flow_from_action(free, S0, rho0, config=config)
    with pytest.raises(CausticError) as excinfo:
        flow.advance_to(1.2)
    assert excinfo.value.report.detected


def test_no_caustic_before_focus(free, focusing, config):
    S0, rho0 = focusing
    S, rho, report = evolve_hj_continuity(free, S0, rho0, 0.5, config=config)
    assert not report.detected
    assert not report.multivalued
    assert_allclose(report.min_jacobian, 0.5, atol=1e-9)
    covered = rho.covered
    assert covered.mean() > 0.5
    q = S.grid.mesh[0]
    assert_allclose(S.values[covered], -q[covered] ** 2, atol=1e-6)
    assert_allclose(rho.values[covered], 2.0 * np.exp(-2.0 * q[covered] ** 2) / np.sqrt(2 * np.pi),
                    atol=1e-6)
    assert np.all(rho.values[~covered] == 0.0)


def test_flow_only_moves_forward(free, focusing, config):
    S0, _ = focusing
    flow = flow_from_action(free, S0, config=config)
    flow.advance_to(0.1)
    with pytest.raises(PreconditionError):
        flow.advance_to(0.05)
    with pytest.raises(PreconditionError, match='initial density'):
        flow.density_at(np.zeros((1, 3)))


def test_uncovered_points_are_nan(free, focusing, config):
    S0, _ = focusing
    flow = flow_from_action(free, S0, config=config)
    M = flow.momentum_at(np.array([[0.5, 3.9]]), t=0.5)
    assert_allclose(M[0, 0], -1.0, atol=1e-8)
    assert np.isnan(M[0, 1])


def test_harmonic_canonical_condition(harmonic, small_grid, config):
    M0 = MomentumField.from_profile(zero_action(1), small_grid)
    M, report = evolve_canonical_condition(harmonic, M0, 0.5, config=config)
    covered = M.covered
    q = small_grid.mesh[0]
    # p = -q0 sin t at q = q0 cos t
    assert_allclose(M.values[0][covered], -np.tan(0.5) * q[covered], atol=1e-6)
    assert M.t == 0.5
    assert not report.detected


def test_harmonic_focus_is_reported(harmonic, small_grid):
    M0 = MomentumField.from_profile(zero_action(1), small_grid)
    _, report = evolve_canonical_condition(harmonic, M0, 2.0, config=COARSE)
    assert report.multivalued
    assert report.time < np.pi / 2
    assert report.time > np.pi / 2 - 0.01
## [END] CAUSTICS =============================================================


## TRAJECTORIES ===============================================================
def test_harmonic_trajectory_matches_orbit(harmonic, small_grid):
    S0 = ConfigAction.from_profile(zero_action(1), small_grid)
    flow = flow_from_action(harmonic, S0, config=COARSE)
    trajectory = extract_trajectory(harmonic, flow, [1.0], 1.0)
    assert_allclose(trajectory.final_position, [np.cos(1.0)], atol=1e-6)
    assert_allclose(trajectory.final_momentum, [-np.sin(1.0)], atol=1e-6)
    assert trajectory_agreement(harmonic, trajectory, config=COARSE) < 1e-6
    assert consistency_s_minus_S(harmonic, lift_action(S0), trajectory, config=COARSE) < 1e-6
    frame = trajectory.to_frame()
    assert list(frame.columns) == ['t', 'q1', 'p1', 's', 'S']
    assert_allclose(frame['t'].iloc[-1], 1.0)


def test_trajectory_through_caustic_is_undefined(free, focusing):
    S0, rho0 = focusing
    flow = flow_from_action(free, S0, rho0, config=COARSE)
    with pytest.raises(TrajectoryUndefinedError):
        extract_trajectory(free, flow, [0.5], 1.2)


def test_trajectory_after_detected_caustic(free, focusing):
    S0, rho0 = focusing
    flow = flow_from_action(free, S0, rho0, config=COARSE)
    flow.advance_to(1.2, strict=False)
    with pytest.raises(TrajectoryUndefinedError) as excinfo:
        extract_trajectory(free, flow, [0.5], 1.1)
    assert excinfo.value.report.detected
## [END] TRAJECTORIES =========================================================


## DIAGNOSTICS ================================================================
def test_gradient_field_has_no_vorticity(grid_2d):
    S = ConfigAction.from_profile(GaussianBumpAction(amplitude=1.0, width=1.0, center=[0.5, 0.0]), grid_2d)
    assert np.max(np.abs(vorticity(S.gradient()))) < 1e-10


def test_rigid_rotation_vorticity(grid_2d):
    M = MomentumField.from_profile(RigidRotation(omega=0.7), grid_2d)
    omega = vorticity(M)
    assert omega.shape == (2, 2, 64, 64)
    assert_allclose(omega[0, 1], 1.4, atol=1e-12)
    assert_allclose(omega[1, 0], -1.4, atol=1e-12)
    assert_allclose(omega[0, 0], 0.0, atol=1e-12)


def test_vorticity_is_empty_in_1d(grid_1d):
    M = MomentumField.from_profile(zero_action(1), grid_1d)
    assert vorticity(M).shape == (0, 0, 256)


def test_residuals_vanish_on_exact_solution(free):
    grid = Grid.uniform(1, 8.0, 256)
    rho_a, _, S_a = burgers_fields(grid, 0.499)
    rho_b, _, S_b = burgers_fields(grid, 0.501)
    _, M, _ = burgers_fields(grid, 0.5)
    assert continuity_residual(rho_a, rho_b, M, free) < 1e-3
    assert half_density_residual(rho_a, rho_b, M, free) < 1e-3
    assert hj_residual(S_a, S_b, free, density=rho_a) < 1e-3


def test_residuals_detect_wrong_fields(free):
    grid = Grid.uniform(1, 8.0, 256)
    rho_a, _, S_a = burgers_fields(grid, 0.499)
    rho_b, _, _ = burgers_fields(grid, 0.501)
    still = MomentumField.from_profile(zero_action(1), grid, t=0.5)
    # same action relabelled at a later time: dS/dt = 0
    stale = ConfigAction.from_profile(quadratic_action(-1.0 / 0.501), grid, t=0.501)
    assert continuity_residual(rho_a, rho_b, still, free) > 0.1
    assert hj_residual(S_a, stale, free, density=rho_a) > 0.1


def test_residuals_need_time_order(free):
    grid = Grid.uniform(1, 8.0, 64)
    rho_a, M, _ = burgers_fields(grid, 0.5)
    with pytest.raises(PreconditionError):
        continuity_residual(rho_a, rho_a, M, free)
## [END] DIAGNOSTICS ==========================================================


## FIELDS AND PROFILES ========================================================
def test_action_background_fit(grid_1d):
    q = grid_1d.mesh[0]
    S = ConfigAction.from_values(-q ** 2 + 0.3 * q + 2.0, grid_1d)
    assert_allclose(S.hessian, [[-2.0]], atol=1e-10)
    assert_allclose(S.linear, [0.3], atol=1e-10)
    assert_allclose(S.values, -q ** 2 + 0.3 * q + 2.0, atol=1e-9)
    assert_allclose(S.gradient().values[0], -2.0 * q + 0.3, atol=1e-8)


def test_momentum_background_fit_with_coverage(grid_1d):
    q = grid_1d.mesh[0]
    covered = np.abs(q) < 4.0
    values = np.where(covered, 1.5 * q - 0.2, np.nan)[None]
    M = MomentumField.from_values(values, grid_1d, covered=covered)
    assert_allclose(M.gradient_matrix, [[1.5]], atol=1e-10)
    assert np.all(np.isfinite(M.values))
    assert_allclose(M.divergence(), 1.5, atol=1e-8)


def test_density_helpers(grid_1d):
    rho = ConfigDensity.from_profile(GaussianDensity(center=[1.0], sigma=0.5), grid_1d)
    assert_allclose(rho.norm(), 1.0, atol=1e-10)
    assert_allclose(rho.amplitude() ** 2, rho.values)
    assert rho.mask(1e-4).sum() > 0
    assert rho.to_dataset()['rho'].dims == ('q1',)


def test_profiles_from_spec(grid_1d, grid_2d):
    S = action_from_spec({'type': 'plane_wave', 'momentum': [0.5]}, grid_1d)
    assert_allclose(S.gradient(np.array([[0.0, 1.0]])), [[0.5, 0.5]])
    S = action_from_spec({'type': 'quadratic', 'curvature': -1.0}, grid_2d)
    assert_allclose(S.hessian, -np.eye(2))
    rho = density_from_spec({'sigma': 2.0, 'center': [1.0]}, grid_1d)
    assert rho.sigma == 2.0
    assert isinstance(momentum_from_spec({'type': 'rigid_rotation', 'omega': 2.0}, grid_2d), RigidRotation)


@pytest.mark.parametrize('call, key', [
    (lambda g1, g2: action_from_spec({'type': 'cubic'}, g1), 'initial_state.action.type'),
    (lambda g1, g2: action_from_spec({'type': 'polynomial'}, g2), 'initial_state.action.type'),
    (lambda g1, g2: action_from_spec({'type': 'plane_wave', 'momentum': [1.0, 2.0]}, g1),
     'initial_state.action.momentum'),
    (lambda g1, g2: density_from_spec({'sigma': -1.0}, g1), 'initial_state.density.sigma'),
    (lambda g1, g2: momentum_from_spec({'type': 'rigid_rotation'}, g1), 'initial_state.momentum.type'),
])
def test_profile_spec_errors(grid_1d, grid_2d, call, key):
    with pytest.raises(ScenarioError) as excinfo:
        call(grid_1d, grid_2d)
    assert excinfo.value.key == key


def test_asymmetric_hessian_rejected():
    with pytest.raises(ScenarioError):
        QuadraticAction(hessian=[[1.0, 2.0], [0.0, 1.0]], linear=[0.0, 0.0])


def test_flow_accepts_plain_callables(free, small_grid, config):
    flow = CharacteristicFlow(free, small_grid, lambda q: 0.5 * np.ones_like(q), config=config)
    flow.advance_to(1.0)
    assert_allclose(flow.momentum_at(np.array([[0.0, 1.0]])), [[0.5, 0.5]], atol=1e-9)
    assert_allclose(flow.action_at(np.array([[0.0]])), [0.125], atol=1e-9)
## [END] FIELDS AND PROFILES ==================================================
