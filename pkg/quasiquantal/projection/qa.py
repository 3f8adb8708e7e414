from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..errors import CausticError, PreconditionError, TrajectoryUndefinedError
from ..grid import NumericsConfig, spectral_derivative, gradient
from ..phase_ensemble import integrate, step_count
from .flow import CharacteristicFlow


## RESTRICTION AND EVOLUTION ==================================================
def restrict_h(H, M):
    '''h(q, t) = H(q, M(q, t)) on the grid nodes.'''
    return H.kinetic(M.values) + H.potential.on_grid(M.grid)


def evolve_canonical_condition(H, M0, t, config=None, grid=None):
    '''
    Evolve a momentum field with the canonical condition up to time t.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - M0 (MomentumField or momentum profile): initial field
    - t (float): end time
    - config (NumericsConfig): numerics
    - grid (Grid): output grid, defaults to M0.grid

    Returns:
    - (MomentumField, CausticReport); beyond t* the field is the one at the
      last valid step and the report is flagged multivalued
    '''
    grid = grid or M0.grid
    flow = CharacteristicFlow(H, grid, M0, config=config)
    flow.advance_to(t, strict=False)
    return flow.snapshot().momentum, flow.report(requested_time=t)


def flow_from_action(H, S0, rho0=None, config=None):
    '''Characteristic flow started on p = grad S0(q), carrying S0 and rho0.'''
    return CharacteristicFlow(H, S0.grid, S0.momentum_at, action0=S0, density0=rho0,
                              config=config, t0=S0.t)


def evolve_hj_continuity(H, S0, rho0, t, config=None):
    '''
    Hamilton-Jacobi plus continuity as an initial value problem.

    Returns:
    - (ConfigAction, ConfigDensity, CausticReport) at time t, or at the last
      valid step when a caustic intervenes
    '''
    flow = flow_from_action(H, S0, rho0, config=config)
    flow.advance_to(t, strict=False)
    snapshot = flow.snapshot()
    return snapshot.action, snapshot.density, flow.report(requested_time=t)
## [END] RESTRICTION AND EVOLUTION ============================================


## TRAJECTORIES ===============================================================
@dataclass(frozen=True, eq=False)
class Trajectory:
    '''
    A projected trajectory q(t) with p(t) = M(q(t), t).

    Arguments:
    - times (ndarray): sample times, shape (n,)
    - positions, momenta (ndarray): shape (n, dim)
    - action (ndarray): int (M.v - h) dt from the first sample, shape (n,)
    - config_action (ndarray): S(q(t), t) of the flow along the path
    '''
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)
    momenta: np.ndarray = field(repr=False)
    action: np.ndarray = field(repr=False)
    config_action: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.positions.shape[1]

    @property
    def final_position(self):
        return self.positions[-1]

    @property
    def final_momentum(self):
        return self.momenta[-1]

    def to_frame(self):
        columns = {'t': self.times}
        for k in range(self.dim):
            columns[f'q{k + 1}'] = self.positions[:, k]
            columns[f'p{k + 1}'] = self.momenta[:, k]
        columns['s'] = self.action
        columns['S'] = self.config_action
        return pd.DataFrame(columns)


def extract_trajectory(H, flow, q0, t, config=None):
    '''
    Integrate qdot = M(q, t)/m with RK4 through an evolving momentum field.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - flow (CharacteristicFlow): the evolving field; advanced in lockstep
    - q0 (array-like): start position at the current flow time
    - t (float): end time
    - config (NumericsConfig): step size, defaults to the flow's numerics

    Returns:
    - Trajectory
    '''
    config = config or flow.config
    if flow.caustic_time is not None and t >= flow.caustic_time:
        raise TrajectoryUndefinedError(
            f'trajectory requested to t = {t} beyond the caustic at t* = {flow.caustic_time:.6g}',
            report=flow.report(requested_time=t))

    def momentum(q, time):
        try:
            M = flow.momentum_at(q, time)
        except CausticError as exc:
            raise TrajectoryUndefinedError(str(exc), report=exc.report) from exc
        if not np.all(np.isfinite(M)):
            raise TrajectoryUndefinedError(
                f'trajectory left the region reached by characteristics at t = {time:.6g}',
                report=flow.report(requested_time=t))
        return M

    start = flow.t
    q = np.asarray(q0, dtype=float).reshape(flow.dim, 1)
    s = np.zeros(1)
    n = step_count(t - start, config.dt) if t > start else 0
    h = (t - start) / n if n else 0.0

    M = momentum(q, start)
    times, positions, momenta = [start], [q[:, 0].copy()], [M[:, 0].copy()]
    actions, config_actions = [0.0], [float(flow.action_at(q)[0])]
    for i in range(n):
        t_i = start + i * h
        M1 = M
        q2 = q + 0.5 * h * H.velocity_map(M1)
        M2 = momentum(q2, t_i + 0.5 * h)
        q3 = q + 0.5 * h * H.velocity_map(M2)
        M3 = momentum(q3, t_i + 0.5 * h)
        q4 = q + h * H.velocity_map(M3)
        M4 = momentum(q4, t_i + h)

        dq = (M1 + 2 * M2 + 2 * M3 + M4) / 6.0
        ds = (H.lagrangian(q, M1) + 2 * H.lagrangian(q2, M2)
              + 2 * H.lagrangian(q3, M3) + H.lagrangian(q4, M4)) / 6.0
        q = q + h * H.velocity_map(dq)
        s = s + h * ds

        M = momentum(q, t_i + h)
        times.append(start + (i + 1) * h)
        positions.append(q[:, 0].copy())
        momenta.append(M[:, 0].copy())
        actions.append(float(s[0]))
        config_actions.append(float(flow.action_at(q)[0]))

    return Trajectory(times=np.asarray(times), positions=np.asarray(positions),
                      momenta=np.asarray(momenta), action=np.asarray(actions),
                      config_action=np.asarray(config_actions))


def projected_action(trajectory, s0=0.0):
    '''s along the trajectory, starting from s0.'''
    return s0 + trajectory.action


def _sample_indices(n, samples):
    return np.unique(np.linspace(0, n - 1, min(samples, n)).round().astype(int))


def lift_action(S0):
    '''Phase-space action S(q, p, 0) = S0(q) of a configuration-space action.'''
    def initial(q, p):
        return S0.at(q)
    return initial


def consistency_s_minus_S(H, phase_action0, trajectory, config=None, samples=16):
    '''
    max |(s - S)(t) - (s - S)(t0)| along a trajectory, where s is the
    phase-space action evaluated at (q(t), M(q(t), t)) and S the
    configuration-space action of the projected run.

    Arguments:
    - phase_action0 (callable): S(q, p, t0) on component-first arrays
    - trajectory (Trajectory): output of extract_trajectory
    - samples (int): number of trajectory samples checked
    '''
    config = config or NumericsConfig()
    differences = []
    for i in _sample_indices(trajectory.times.size, samples):
        q = trajectory.positions[i][:, None]
        p = trajectory.momenta[i][:, None]
        elapsed = trajectory.times[i] - trajectory.times[0]
        q0, p0, backward = integrate(H, q, p, -elapsed, config.dt,
                                     method=config.integrator, s=np.zeros(1))
        s = np.ravel(phase_action0(q0, p0))[0] - backward[0]
        differences.append(s - trajectory.config_action[i])
    differences = np.asarray(differences)
    return float(np.max(np.abs(differences - differences[0])))


def trajectory_agreement(H, trajectory, config=None, samples=16):
    '''
    Largest distance between a projected trajectory and the canonical
    characteristic through its first sample.
    '''
    config = config or NumericsConfig()
    q_start = trajectory.positions[0][:, None]
    p_start = trajectory.momenta[0][:, None]
    worst = 0.0
    for i in _sample_indices(trajectory.times.size, samples):
        elapsed = trajectory.times[i] - trajectory.times[0]
        q, p, _ = integrate(H, q_start, p_start, elapsed, config.dt, method=config.integrator)
        worst = max(worst, float(np.max(np.abs(q[:, 0] - trajectory.positions[i]))),
                    float(np.max(np.abs(p[:, 0] - trajectory.momenta[i]))))
    return worst
## [END] TRAJECTORIES =========================================================


## DIFFERENTIAL DIAGNOSTICS ===================================================
def vorticity(M):
    '''
    Omega_ik = dM_k/dq_i - dM_i/dq_k, shape (dim, dim, *grid.shape). One
    dimensional fields return an empty (0, 0, N) tensor.
    '''
    d = M.dim
    if d == 1:
        return np.zeros((0, 0) + M.grid.shape)
    D = np.stack([np.stack([M.derivative(k, i) for k in range(d)]) for i in range(d)])
    return D - D.swapaxes(0, 1)


def _comparison_mask(floor, *densities):
    mask = np.ones(densities[0].grid.shape, dtype=bool)
    for rho in densities:
        if rho.covered is not None:
            mask &= rho.covered
        mask &= rho.values >= floor * np.max(rho.values)
    return mask


def _time_step(a, b):
    dt = b.t - a.t
    if not dt > 0:
        raise PreconditionError(f'snapshots must be ordered in time, got t = {a.t} and {b.t}')
    return dt


def continuity_residual(rho_a, rho_b, M, H, floor=1e-4):
    '''
    max |d rho/dt + div(rho M/m)| at the midpoint of two density snapshots,
    over nodes where rho >= floor * max(rho).

    Arguments:
    - rho_a, rho_b (ConfigDensity): densities at t - delta and t + delta
    - M (MomentumField): momentum field at t
    '''
    dt = _time_step(rho_a, rho_b)
    rho = 0.5 * (rho_a.values + rho_b.values)
    flux = rho * H.velocity_map(M.values)
    divergence = sum(spectral_derivative(flux[k], M.grid, axis=k) for k in range(M.dim))
    residual = (rho_b.values - rho_a.values) / dt + divergence
    return float(np.max(np.abs(residual[_comparison_mask(floor, rho_a, rho_b)])))


def half_density_residual(rho_a, rho_b, M, H, floor=1e-4):
    '''
    max |(d/dt + v.grad + div(v)/2) sqrt(rho)| at the midpoint, v = M/m.
    '''
    dt = _time_step(rho_a, rho_b)
    a_a, a_b = rho_a.amplitude(), rho_b.amplitude()
    a = 0.5 * (a_a + a_b)
    velocity = H.velocity_map(M.values)
    transport = np.sum(velocity * gradient(a, M.grid), axis=0)
    residual = (a_b - a_a) / dt + transport + 0.5 * H.velocity_map(M.divergence()) * a
    return float(np.max(np.abs(residual[_comparison_mask(floor, rho_a, rho_b)])))


def hj_residual(S_a, S_b, H, density=None, floor=1e-4):
    '''
    max |dS/dt + H(q, grad S)| at the midpoint of two action snapshots,
    over covered nodes (and, with a density, where rho >= floor * max(rho)).
    '''
    dt = _time_step(S_a, S_b)
    momentum = 0.5 * (S_a.gradient().values + S_b.gradient().values)
    residual = (S_b.values - S_a.values) / dt + H.energy(S_a.grid.mesh, momentum)
    mask = np.ones(S_a.grid.shape, dtype=bool)
    for S in (S_a, S_b):
        if S.covered is not None:
            mask &= S.covered
    if density is not None:
        mask &= _comparison_mask(floor, density)
    mask &= np.isfinite(residual)
    return float(np.max(np.abs(residual[mask])))
## [END] DIFFERENTIAL DIAGNOSTICS =============================================
