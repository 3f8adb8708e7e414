from dataclasses import dataclass

import numpy as np

from ..grid import NumericsConfig, quadrature, spline_sample
from ._integrators import integrate
from .states import PhaseState, PhaseDensity, PhaseAction


## CHARACTERISTICS ============================================================
def integrate_characteristic(H, state0, t, dt=None, config=None, method=None):
    '''
    Canonical trajectory through `state0` advanced by time t.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - state0 (PhaseState): initial point
    - t (float): integration time
    - dt (float): step size, defaults to config.dt
    - config (NumericsConfig): numerics, defaults to NumericsConfig()
    - method (str): integrator, defaults to config.integrator

    Returns:
    - PhaseState at time state0.t + t
    '''
    config = config or NumericsConfig()
    q, p, _ = integrate(H, state0.q, state0.p, t, dt or config.dt,
                        method=method or config.integrator)
    return PhaseState(q=q, p=p, t=state0.t + t)


def energy_drift(H, state0, t, dt=None, config=None, method=None):
    '''Relative change of H along one characteristic after time t.'''
    state = integrate_characteristic(H, state0, t, dt=dt, config=config, method=method)
    e0 = float(H.energy(state0.q, state0.p))
    e1 = float(H.energy(state.q, state.p))
    return abs(e1 - e0) / max(abs(e0), np.finfo(float).tiny)


def _backward_feet(H, grid, t, config):
    q, p = grid.mesh
    q0, p0, action = integrate(H, q[None], p[None], -t, config.dt,
                               method=config.integrator, s=np.zeros_like(q))
    return q0[0], p0[0], action
## [END] CHARACTERISTICS ======================================================


## LIOUVILLE AND ACTION EQUATIONS =============================================
def evolve_liouville(H, rho0, t, config=None):
    '''
    rho(x, t) = rho0(flow_{-t}(x)): backward characteristics from every node
    followed by bicubic interpolation of the initial samples. Feet that leave
    the phase grid see zero density.
    '''
    config = config or NumericsConfig()
    if t == 0:
        return PhaseDensity(values=rho0.values.copy(), grid=rho0.grid, t=rho0.t)
    q0, p0, _ = _backward_feet(H, rho0.grid, t, config)
    values = spline_sample(rho0.values, rho0.grid.plane, np.stack([q0, p0]), periodic=False)
    return PhaseDensity(values=values, grid=rho0.grid, t=rho0.t + t)


def phase_action_at(H, S0, q, p, t, config=None):
    '''
    S(q, p, t) at arbitrary phase points: S0 at the backward foot plus the
    Lagrangian accumulated along the characteristic.

    Arguments:
    - S0 (PhaseAction or callable): initial action; callables take (q, p)
    - q, p (ndarray): scalar-component arrays of equal shape
    '''
    config = config or NumericsConfig()
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    initial = S0.at if isinstance(S0, PhaseAction) else S0
    if t == 0:
        return initial(q, p)
    q0, p0, backward = integrate(H, q[None], p[None], -t, config.dt,
                                 method=config.integrator, s=np.zeros_like(q))
    # the backward run accumulates -int_0^t L
    return initial(q0[0], p0[0]) - backward


def evolve_phase_action(H, S0, t, config=None):
    '''Solve the action equation DS/Dt = L on every node of the phase grid.'''
    q, p = S0.grid.mesh
    values = phase_action_at(H, S0, q, p, t, config=config)
    return PhaseAction(values=values, grid=S0.grid, t=S0.t + t)


def evolve_phase_wavefunction(H, rho0, S0, t, config=None):
    '''
    Characteristics solution of the phase-space wave equation,
    sqrt(rho(t)) exp(i S(t) / hbar). Returns complex samples on the phase grid.
    '''
    config = config or NumericsConfig()
    rho = evolve_liouville(H, rho0, t, config=config)
    action = evolve_phase_action(H, S0, t, config=config)
    amplitude = np.sqrt(np.clip(rho.values, 0.0, None))
    return amplitude * np.exp(1j * action.values / config.hbar)
## [END] LIOUVILLE AND ACTION EQUATIONS =======================================


## EXPECTATION VALUES =========================================================
def expectation(rho, observable):
    '''Phase-space average: quadrature of rho * A.'''
    observable = np.broadcast_to(np.asarray(observable, dtype=float), rho.values.shape)
    return float(quadrature(rho.values * observable, rho.grid.plane))


def grid_expectations(H, rho):
    '''<q>, <p> and <H> of a sampled phase density.'''
    q, p = rho.grid.mesh
    return {'q': expectation(rho, q),
            'p': expectation(rho, p),
            'H': expectation(rho, H.energy(q[None], p[None])),
            'norm': rho.norm()}


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    standard_error: float


def monte_carlo_expectations(H, density, t, samples=10 ** 6, seed=0, config=None,
                             antithetic=True):
    '''
    <q>, <p>, <H> at time t from sampled characteristics.

    Arguments:
    - density (GaussianPhaseDensity): initial ensemble
    - samples (int): number of characteristics
    - seed (int): seed of numpy's default generator
    - antithetic (bool): pair every draw with its reflection through the mean

    Returns:
    - dict of MonteCarloEstimate keyed by 'q', 'p', 'H'
    '''
    config = config or NumericsConfig()
    rng = np.random.default_rng(seed)
    n = samples // 2 if antithetic else samples
    q0, p0 = density.sample(rng, n)
    if antithetic:
        q0 = np.concatenate([q0, 2.0 * density.mean[0] - q0], axis=1)
        p0 = np.concatenate([p0, 2.0 * density.mean[1] - p0], axis=1)

    q, p, _ = integrate(H, q0, p0, t, config.dt, method=config.integrator)
    observables = {'q': q[0], 'p': p[0], 'H': H.energy(q, p)}

    estimates = {}
    for name, values in observables.items():
        if antithetic:
            # pair means are independent draws
            pairs = 0.5 * (values[:n] + values[n:])
            error = pairs.std(ddof=1) / np.sqrt(n)
        else:
            error = values.std(ddof=1) / np.sqrt(values.size)
        estimates[name] = MonteCarloEstimate(mean=float(values.mean()),
                                             standard_error=float(error))
    return estimates
## [END] EXPECTATION VALUES ===================================================
