from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..errors import ScenarioError
from ..grid import Grid, gradient, fourier_interpolate


'''
Analytic initial data for configuration-space fields. Every profile is
evaluated on component-first positions q of shape (dim, ...). Action
profiles expose value and gradient (the momentum surface M0 = grad S0);
profiles whose momentum is affine also expose `background()` returning the
matrix and offset of M0(q) = A q + b.
'''


def _as_points(q):
    return np.asarray(q, dtype=float)


## ACTIONS ====================================================================
@dataclass(frozen=True, eq=False)
class QuadraticAction:
    '''S0(q) = q.A.q / 2 + b.q + c'''
    hessian: np.ndarray
    linear: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        linear = np.atleast_1d(np.asarray(self.linear, dtype=float))
        hessian = np.asarray(self.hessian, dtype=float).reshape(linear.size, linear.size)
        if not np.allclose(hessian, hessian.T):
            raise ScenarioError('quadratic action hessian must be symmetric',
                                key='initial_state.action.hessian')
        object.__setattr__(self, 'linear', linear)
        object.__setattr__(self, 'hessian', hessian)

    @property
    def dim(self):
        return self.linear.size

    def value(self, q):
        q = _as_points(q)
        quadratic = 0.5 * np.einsum('i...,ij,j...->...', q, self.hessian, q)
        return quadratic + np.einsum('i,i...->...', self.linear, q) + self.constant

    def gradient(self, q):
        q = _as_points(q)
        offset = self.linear.reshape((-1,) + (1,) * (q.ndim - 1))
        return np.einsum('ij,j...->i...', self.hessian, q) + offset

    momentum = gradient

    def background(self):
        return self.hessian, self.linear


def zero_action(dim=1):
    return QuadraticAction(hessian=np.zeros((dim, dim)), linear=np.zeros(dim))


def plane_wave_action(momentum):
    '''S0 = p0 . q'''
    momentum = np.atleast_1d(np.asarray(momentum, dtype=float))
    return QuadraticAction(hessian=np.zeros((momentum.size, momentum.size)), linear=momentum)


def quadratic_action(curvature, dim=1):
    '''Isotropic S0 = curvature |q|^2 / 2; curvature -1 focuses at t = m.'''
    return QuadraticAction(hessian=curvature * np.eye(dim), linear=np.zeros(dim))


@dataclass(frozen=True)
class PolynomialAction:
    '''One dimensional S0(q) = sum_i c_i q^i.'''
    coefficients: tuple = (0.0,)
    dim = 1

    def value(self, q):
        return np.polynomial.polynomial.polyval(_as_points(q)[0], self.coefficients)

    def gradient(self, q):
        derivative = np.polynomial.polynomial.polyder(self.coefficients)
        return np.polynomial.polynomial.polyval(_as_points(q)[0], derivative)[None]

    momentum = gradient

    def background(self):
        if len(self.coefficients) <= 3:
            c = tuple(self.coefficients) + (0.0,) * (3 - len(self.coefficients))
            return np.array([[2.0 * c[2]]]), np.array([c[1]])
        return None


@dataclass(frozen=True, eq=False)
class GaussianBumpAction:
    '''S0(q) = amplitude exp(-|q - center|^2 / 2 width^2), a localized smooth action.'''
    amplitude: float
    width: float
    center: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'center', np.atleast_1d(np.asarray(self.center, dtype=float)))
        if not self.width > 0:
            raise ScenarioError('must be positive', key='initial_state.action.width')

    @property
    def dim(self):
        return self.center.size

    def _offset(self, q):
        return _as_points(q) - self.center.reshape((-1,) + (1,) * (np.ndim(q) - 1))

    def value(self, q):
        d = self._offset(q)
        return self.amplitude * np.exp(-0.5 * np.sum(d ** 2, axis=0) / self.width ** 2)

    def gradient(self, q):
        return -self._offset(q) * self.value(q) / self.width ** 2

    momentum = gradient

    def background(self):
        return None
## [END] ACTIONS ==============================================================


## DENSITIES AND MOMENTA ======================================================
@dataclass(frozen=True, eq=False)
class GaussianDensity:
    '''Normalized isotropic Gaussian; sigma is the standard deviation per axis.'''
    center: np.ndarray
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'center', np.atleast_1d(np.asarray(self.center, dtype=float)))
        if not self.sigma > 0:
            raise ScenarioError('must be positive', key='initial_state.density.sigma')

    @property
    def dim(self):
        return self.center.size

    def value(self, q):
        q = _as_points(q)
        d = q - self.center.reshape((-1,) + (1,) * (q.ndim - 1))
        norm = (2.0 * np.pi * self.sigma ** 2) ** (-0.5 * self.dim)
        return norm * np.exp(-0.5 * np.sum(d ** 2, axis=0) / self.sigma ** 2)

    def gradient(self, q):
        q = _as_points(q)
        d = q - self.center.reshape((-1,) + (1,) * (q.ndim - 1))
        return -d * self.value(q) / self.sigma ** 2


@dataclass(frozen=True)
class RigidRotation:
    '''Rotational momentum field M = omega (-q2, q1); a diagnostic, not a gradient.'''
    omega: float = 1.0
    dim = 2

    def momentum(self, q):
        q = _as_points(q)
        return self.omega * np.stack([-q[1], q[0]])

    def background(self):
        return self.omega * np.array([[0.0, -1.0], [1.0, 0.0]]), np.zeros(2)


@dataclass(frozen=True, eq=False)
class TabulatedProfile:
    '''Periodic samples on a grid, evaluated through the Fourier interpolant.'''
    values: np.ndarray = field(repr=False)
    grid: Grid = None

    def __post_init__(self):
        values = self.grid.check_field(np.asarray(self.values, dtype=float))
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_gradient', gradient(values, self.grid))

    @property
    def dim(self):
        return self.grid.dim

    def value(self, q):
        return fourier_interpolate(self.values, self.grid, q)

    def gradient(self, q):
        return fourier_interpolate(self._gradient, self.grid, q)

    momentum = gradient

    def background(self):
        return None
## [END] DENSITIES AND MOMENTA ================================================


## SCENARIO ENTRIES ===========================================================
def _tabulated_from_spec(spec, grid, key):
    if 'values' in spec:
        values = np.asarray(spec['values'], dtype=float)
    elif 'path' in spec:
        df = pd.read_csv(spec['path'])
        if 'value' not in df.columns:
            raise ScenarioError("tabulated CSV needs a 'value' column", key=f'{key}.path')
        values = df['value'].to_numpy(dtype=float)
    else:
        raise ScenarioError("tabulated entries need 'values' or 'path'", key=key)
    if values.size != np.prod(grid.shape):
        raise ScenarioError(f'expected {np.prod(grid.shape)} samples, got {values.size}', key=key)
    return TabulatedProfile(values=values.reshape(grid.shape), grid=grid)


def _vector(spec, name, dim, key, default=0.0):
    value = np.atleast_1d(np.asarray(spec.get(name, [default] * dim), dtype=float))
    if value.size != dim:
        raise ScenarioError(f'expected {dim} components, got {value.size}', key=f'{key}.{name}')
    return value


def action_from_spec(spec, grid, key='initial_state.action'):
    tag = spec.get('type', 'zero')
    dim = grid.dim
    if tag == 'zero':
        return zero_action(dim)
    if tag == 'plane_wave':
        return plane_wave_action(_vector(spec, 'momentum', dim, key))
    if tag == 'quadratic':
        if 'hessian' in spec:
            hessian = np.asarray(spec['hessian'], dtype=float).reshape(dim, dim)
        else:
            hessian = float(spec.get('curvature', 0.0)) * np.eye(dim)
        return QuadraticAction(hessian=hessian, linear=_vector(spec, 'linear', dim, key))
    if tag == 'polynomial':
        if dim != 1:
            raise ScenarioError('polynomial actions are one dimensional', key=f'{key}.type')
        return PolynomialAction(coefficients=tuple(spec.get('coefficients', (0.0,))))
    if tag == 'gaussian_bump':
        return GaussianBumpAction(amplitude=float(spec.get('amplitude', 1.0)),
                                  width=float(spec.get('width', 1.0)),
                                  center=_vector(spec, 'center', dim, key))
    if tag == 'tabulated':
        return _tabulated_from_spec(spec, grid, key)
    raise ScenarioError(f"unknown action '{tag}'", key=f'{key}.type', valid=ACTIONS)


def density_from_spec(spec, grid, key='initial_state.density'):
    tag = spec.get('type', 'gaussian')
    if tag == 'gaussian':
        sigma = spec.get('sigma', 1.0)
        if not isinstance(sigma, (int, float)) or not sigma > 0:
            raise ScenarioError(f'must be positive, got {sigma!r}', key=f'{key}.sigma')
        return GaussianDensity(center=_vector(spec, 'center', grid.dim, key), sigma=float(sigma))
    if tag == 'tabulated':
        return _tabulated_from_spec(spec, grid, key)
    raise ScenarioError(f"unknown density '{tag}'", key=f'{key}.type', valid=DENSITIES)


def momentum_from_spec(spec, grid, action=None, key='initial_state.momentum'):
    tag = spec.get('type', 'from_action')
    if tag == 'from_action':
        if action is None:
            raise ScenarioError('no action to take the gradient of', key=key)
        return action
    if tag == 'rigid_rotation':
        if grid.dim != 2:
            raise ScenarioError('rigid rotation needs a 2D grid', key=f'{key}.type')
        return RigidRotation(omega=float(spec.get('omega', 1.0)))
    raise ScenarioError(f"unknown momentum field '{tag}'", key=f'{key}.type', valid=MOMENTA)


ACTIONS = ('zero', 'plane_wave', 'quadratic', 'polynomial', 'gaussian_bump', 'tabulated')
DENSITIES = ('gaussian', 'tabulated')
MOMENTA = ('from_action', 'rigid_rotation')
## [END] SCENARIO ENTRIES =====================================================
