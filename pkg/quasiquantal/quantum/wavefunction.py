from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from ..errors import ConfigurationError, ScenarioError
from ..grid import Grid, quadrature, gradient, fourier_interpolate
from ..hamiltonian import Harmonic


## WAVE FUNCTION ==============================================================
@dataclass(frozen=True, eq=False)
class WaveFunction:
    '''
    Complex samples psi(q) on a Grid.

    Arguments:
    - values (ndarray): complex samples, shape grid.shape
    - grid (Grid): sampling grid
    - t (float): time stamp
    - hbar (float): action unit of the evolution context
    '''
    values: np.ndarray = field(repr=False)
    grid: Grid = None
    t: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        values = self.grid.check_field(np.asarray(self.values, dtype=complex))
        if values.shape != self.grid.shape:
            raise ConfigurationError(f'wave function needs shape {self.grid.shape}, got {values.shape}')
        object.__setattr__(self, 'values', values)

    @property
    def dim(self):
        return self.grid.dim

    def density(self):
        return np.abs(self.values) ** 2

    def norm(self):
        return float(quadrature(self.density(), self.grid))

    def normalized(self):
        return self.with_values(self.values / np.sqrt(self.norm()))

    def with_values(self, values, t=None):
        return replace(self, values=values, t=self.t if t is None else t)

    def gradient(self):
        return gradient(self.values, self.grid)

    def at(self, points):
        return fourier_interpolate(self.values, self.grid, points)

    def gradient_at(self, points):
        return fourier_interpolate(self.gradient(), self.grid, points)

    def to_dataset(self, attrs=None):
        return self.grid.to_dataset(attrs={'t': self.t, 'hbar': self.hbar, **(attrs or {})},
                                    re_psi=self.values.real, im_psi=self.values.imag,
                                    rho=self.density())
## [END] WAVE FUNCTION ========================================================


## CATALOG ====================================================================
def _normalized(values, grid, hbar, t=0.0):
    return WaveFunction(values=values, grid=grid, t=t, hbar=hbar).normalized()


def _offsets(grid, center):
    center = np.broadcast_to(np.asarray(center, dtype=float), (grid.dim,))
    return grid.mesh - center.reshape((-1,) + (1,) * grid.dim)


def gaussian_packet(grid, center=0.0, sigma=1.0, momentum=0.0, hbar=1.0):
    '''
    Gaussian packet whose density has standard deviation sigma per axis,
    modulated by exp(i p0.q / hbar).
    '''
    if not sigma > 0:
        raise ConfigurationError(f'sigma must be positive, got {sigma}')
    d = _offsets(grid, center)
    p0 = np.broadcast_to(np.asarray(momentum, dtype=float), (grid.dim,))
    phase = np.einsum('i,i...->...', p0, grid.mesh) / hbar
    values = np.exp(-0.25 * np.sum(d ** 2, axis=0) / sigma ** 2 + 1j * phase)
    return _normalized(values, grid, hbar)


def coherent_state(grid, H, center=1.0, momentum=0.0, hbar=1.0):
    '''Displaced harmonic ground state, density variance hbar / (2 m omega).'''
    if not isinstance(H.potential, Harmonic):
        raise ScenarioError('coherent states need a harmonic potential', key='hamiltonian.type')
    sigma = np.sqrt(hbar / (2.0 * H.mass * H.potential.omega))
    return gaussian_packet(grid, center=center, sigma=sigma, momentum=momentum, hbar=hbar)


def eigenstate(grid, H, n=0, hbar=1.0):
    '''
    Harmonic eigenfunction H_n(xi) exp(-xi^2 / 2), xi = q sqrt(m omega / hbar);
    in 2D the product of one eigenfunction per axis with quantum numbers n.
    '''
    if not isinstance(H.potential, Harmonic):
        raise ScenarioError('eigenstates are available for the harmonic potential only',
                            key='hamiltonian.type')
    numbers = np.broadcast_to(np.asarray(n, dtype=int), (grid.dim,))
    if np.any(numbers < 0):
        raise ConfigurationError(f'quantum numbers must be non-negative, got {n}')
    xi = grid.mesh * np.sqrt(H.mass * H.potential.omega / hbar)
    values = np.ones(grid.shape)
    for k, nk in enumerate(numbers):
        values = values * special.eval_hermite(int(nk), xi[k]) * np.exp(-0.5 * xi[k] ** 2)
    return _normalized(values, grid, hbar)


def eigenvalue(H, n=0, hbar=1.0, dim=1):
    numbers = np.broadcast_to(np.asarray(n, dtype=int), (dim,))
    return float(hbar * H.potential.omega * np.sum(numbers + 0.5))


def plane_wave(grid, mode=1, hbar=1.0):
    '''exp(i 2 pi mode.q / L), periodic on the grid for integer modes.'''
    modes = np.broadcast_to(np.asarray(mode), (grid.dim,))
    if not np.all(np.equal(np.mod(modes, 1), 0)):
        raise ConfigurationError(f'plane wave modes must be integers, got {mode}')
    k = 2.0 * np.pi * modes / np.asarray(grid.extent)
    values = np.exp(1j * np.einsum('i,i...->...', k, grid.mesh))
    return _normalized(values, grid, hbar)


def vortex_2d(grid, charge=1, sigma=1.0, center=(0.0, 0.0), hbar=1.0):
    '''(q1 + i q2)^charge exp(-|q|^2 / 2 sigma^2); negative charges use q1 - i q2.'''
    if grid.dim != 2:
        raise ConfigurationError('vortex states need a 2D grid')
    d = _offsets(grid, center)
    z = d[0] + 1j * np.sign(charge or 1) * d[1]
    values = z ** abs(int(charge)) * np.exp(-0.5 * np.sum(d ** 2, axis=0) / sigma ** 2)
    return _normalized(values, grid, hbar)


def from_madelung(density, action, hbar=1.0, t=0.0):
    '''sqrt(rho) exp(i S / hbar); nodes without an action carry zero phase.'''
    phase = np.nan_to_num(action.values, nan=0.0) / hbar
    values = density.amplitude() * np.exp(1j * phase)
    return WaveFunction(values=values, grid=density.grid, t=t, hbar=hbar)


STATES = ('gaussian_packet', 'coherent_state', 'eigenstate_n', 'plane_wave', 'vortex_2d')


def wavefunction_from_spec(spec, grid, H, hbar=1.0, key='initial_state.psi0'):
    '''Scenario entry -> normalized WaveFunction, e.g. {"type": "coherent_state", "center": 1.0}.'''
    tag = spec.get('type', 'gaussian_packet')
    if tag == 'gaussian_packet':
        sigma = spec.get('sigma', 1.0)
        if not isinstance(sigma, (int, float)) or not sigma > 0:
            raise ScenarioError(f'must be positive, got {sigma!r}', key=f'{key}.sigma')
        return gaussian_packet(grid, center=spec.get('center', 0.0), sigma=float(sigma),
                               momentum=spec.get('momentum', 0.0), hbar=hbar)
    if tag == 'coherent_state':
        return coherent_state(grid, H, center=spec.get('center', 1.0),
                              momentum=spec.get('momentum', 0.0), hbar=hbar)
    if tag in ('eigenstate', 'eigenstate_n'):
        return eigenstate(grid, H, n=spec.get('n', 0), hbar=hbar)
    if tag == 'plane_wave':
        return plane_wave(grid, mode=spec.get('mode', 1), hbar=hbar)
    if tag == 'vortex_2d':
        if grid.dim != 2:
            raise ScenarioError('vortex_2d needs a 2D grid', key=f'{key}.type')
        return vortex_2d(grid, charge=int(spec.get('charge', 1)), sigma=float(spec.get('sigma', 1.0)),
                         center=spec.get('center', (0.0, 0.0)), hbar=hbar)
    raise ScenarioError(f"unknown initial state '{tag}'", key=f'{key}.type', valid=STATES)
## [END] CATALOG ==============================================================
