import numpy as np
from scipy import ndimage

from ..errors import AmplitudeBlowupError, NumericalBlowupError, PreconditionError, SingularAmplitudeError
from ..grid import NumericsConfig, fourier_interpolate
from ..phase_ensemble import step_count
from .madelung import quantum_potential_values


## SPLIT STEP =================================================================
class SplitStepPropagator:
    '''
    Strang splitting: half kick in the potential, full kinetic drift in
    Fourier space, half kick.

    With a non-zero `quantum_coefficient` c every kick uses V + c T_Q, where
    T_Q is recomputed from rho = |psi|^2 at that kick. c = 1 gives the
    classical wave equation; c = 0 is the Schrodinger path.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - grid (Grid): sampling grid
    - dt (float): step size
    - hbar (float): action unit
    - quantum_coefficient (float): weight of the T_Q kick
    - config (NumericsConfig): floors and blowup factor of nonlinear runs
    '''

    def __init__(self, H, grid, dt, hbar=1.0, quantum_coefficient=0.0, config=None):
        if not dt > 0:
            raise PreconditionError(f'time step must be positive, got {dt}')
        self.H = H
        self.grid = grid
        self.dt = float(dt)
        self.hbar = float(hbar)
        self.quantum_coefficient = float(quantum_coefficient)
        self.config = config or NumericsConfig(hbar=hbar)
        self.potential = H.potential.on_grid(grid)
        self.reference_scale = None
        self._phases = {}

        k2 = sum(grid.broadcast_wavenumber(a) ** 2 for a in range(grid.dim))
        self._kinetic_rate = 0.5 * self.hbar * k2 / H.mass

    @property
    def nonlinear(self):
        return self.quantum_coefficient != 0.0

    def _phases_for(self, h):
        if h not in self._phases:
            self._phases[h] = (np.exp(-0.5j * h / self.hbar * self.potential),
                               np.exp(-1j * h * self._kinetic_rate))
        return self._phases[h]

    ## NONLINEAR KICK =========================================================
    def quantum_potential(self, values):
        rho = np.abs(values) ** 2
        return quantum_potential_values(rho, self.grid, hbar=self.hbar, mass=self.H.mass,
                                        floor=self.config.density_floor)

    def _check_support(self, values, time):
        rho = np.abs(values) ** 2
        peak = np.max(rho)
        support = ndimage.binary_fill_holes(rho >= self.config.support_floor * peak)
        hollow = support & (rho < self.config.density_floor * peak)
        if np.any(hollow):
            raise SingularAmplitudeError(
                f'density vanished at {np.count_nonzero(hollow)} nodes inside the support at t = {time:.6g}')

    def start(self, values):
        '''Fix the T_Q scale that bounds a nonlinear run.'''
        floor = 0.5 * self.hbar ** 2 / (self.H.mass * max(self.grid.extent) ** 2)
        self.reference_scale = max(float(np.max(np.abs(self.quantum_potential(values)))), floor)

    def _kick(self, values, h, time):
        expV, _ = self._phases_for(h)
        if not self.nonlinear:
            return values * expV

        self._check_support(values, time)
        T_Q = self.quantum_potential(values)
        if self.reference_scale is None:
            self.start(values)
        bound = self.config.blowup_factor * self.reference_scale
        if np.max(np.abs(T_Q)) > bound:
            raise AmplitudeBlowupError(
                f'max |T_Q| = {np.max(np.abs(T_Q)):.3e} exceeds {bound:.3e} at t = {time:.6g}',
                time=time)
        return values * expV * np.exp(-0.5j * h / self.hbar * self.quantum_coefficient * T_Q)
    ## [END] NONLINEAR KICK ===================================================

    def step(self, values, h=None, time=0.0):
        '''One Strang step of size h (default dt) on raw samples.'''
        h = self.dt if h is None else h
        _, expK = self._phases_for(h)
        axes = tuple(range(self.grid.dim))
        values = self._kick(values, h, time)
        values = np.fft.ifftn(np.fft.fftn(values, axes=axes) * expK, axes=axes)
        values = self._kick(values, h, time + h)
        if not np.all(np.isfinite(values)):
            raise NumericalBlowupError(f'non-finite wave function at t = {time + h:.6g}')
        return values

    def iterate(self, psi, t):
        '''Yield the wave function after each of the equal steps covering t.'''
        n = step_count(t, self.dt)
        h = t / n
        if self.nonlinear and self.reference_scale is None:
            self.start(psi.values)
        values = psi.values
        for i in range(n):
            values = self.step(values, h, time=psi.t + i * h)
            yield psi.with_values(values, t=psi.t + (i + 1) * h)

    def evolve(self, psi, t):
        '''The wave function advanced by time t.'''
        if t == 0:
            return psi
        for psi in self.iterate(psi, t):
            pass
        return psi
## [END] SPLIT STEP ===========================================================


## EVOLUTION ==================================================================
def _check_norm(psi):
    norm = psi.norm()
    if abs(norm - 1.0) > 1e-8:
        raise PreconditionError(f'initial wave function must be normalized, got norm {norm:.12g}')


def evolve_schrodinger(H, psi0, t, config=None):
    '''
    Schrodinger evolution of psi0 over time t by Strang splitting.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - psi0 (WaveFunction): normalized initial state
    - t (float): evolution time (>= 0)
    - config (NumericsConfig): dt

    Returns:
    - WaveFunction at psi0.t + t
    '''
    config = config or NumericsConfig(hbar=psi0.hbar)
    _check_norm(psi0)
    propagator = SplitStepPropagator(H, psi0.grid, config.dt, hbar=psi0.hbar, config=config)
    return propagator.evolve(psi0, t)


def evolve_classical_wave(H, psi0, t, config=None, coefficient=1.0):
    '''
    Schrodinger equation plus the T_Q psi counter-term. Raises
    SingularAmplitudeError when rho vanishes inside the support and
    AmplitudeBlowupError once max |T_Q| leaves the blowup bound.
    '''
    config = config or NumericsConfig(hbar=psi0.hbar)
    _check_norm(psi0)
    propagator = SplitStepPropagator(H, psi0.grid, config.dt, hbar=psi0.hbar,
                                     quantum_coefficient=coefficient, config=config)
    return propagator.evolve(psi0, t)
## [END] EVOLUTION ============================================================


## FLOW =======================================================================
class SchrodingerFlow:
    '''
    Forward-only Schrodinger evolution that exposes the Madelung velocity
    v = hbar Im(psi* grad psi) / (m |psi|^2) at arbitrary points and times.
    Requested times are reached in whole steps of dt from the start.
    '''

    def __init__(self, H, psi0, config=None, dt=None, quantum_coefficient=0.0):
        self.H = H
        self.config = config or NumericsConfig(hbar=psi0.hbar)
        self.dt = dt or self.config.dt
        self.psi = psi0
        self.t0 = psi0.t
        self._propagator = SplitStepPropagator(H, psi0.grid, self.dt, hbar=psi0.hbar,
                                               quantum_coefficient=quantum_coefficient,
                                               config=self.config)
        self._steps = 0

    @property
    def t(self):
        return self.psi.t

    @property
    def grid(self):
        return self.psi.grid

    def advance_to(self, t):
        target = int(round((t - self.t0) / self.dt))
        if target < self._steps:
            raise PreconditionError(f'flow is at t = {self.t:.6g} and cannot go back to {t:.6g}')
        values = self.psi.values
        while self._steps < target:
            values = self._propagator.step(values, self.dt, time=self.t0 + self._steps * self.dt)
            self._steps += 1
        self.psi = self.psi.with_values(values, t=self.t0 + self._steps * self.dt)
        return self.psi

    def wave_at(self, t):
        return self.advance_to(t)

    def masked(self, points, t=None):
        '''Points where the interpolated density is below the density floor.'''
        psi = self.psi if t is None else self.advance_to(t)
        rho = np.abs(psi.at(points)) ** 2
        return rho < self.config.density_floor * np.max(psi.density())

    def velocity_at(self, points, t=None):
        '''Madelung velocity, NaN at masked points.'''
        psi = self.psi if t is None else self.advance_to(t)
        values = psi.at(points)
        grads = fourier_interpolate(psi.gradient(), psi.grid, points)
        rho = np.abs(values) ** 2
        mask = rho < self.config.density_floor * np.max(psi.density())
        with np.errstate(divide='ignore', invalid='ignore'):
            velocity = psi.hbar * np.imag(np.conj(values) * grads) / (self.H.mass * rho)
        return np.where(mask, np.nan, velocity)

    def momentum_at(self, points, t=None):
        return self.H.mass * self.velocity_at(points, t)
## [END] FLOW =================================================================
