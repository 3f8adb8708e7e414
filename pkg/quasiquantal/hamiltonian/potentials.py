from abc import ABC, abstractmethod
from dataclasses import dataclass, asdict, field

import numpy as np
import pandas as pd

from ..errors import ScenarioError
from ..grid import Grid, gradient, fourier_interpolate


'''
Potential catalog. Positions are component-first arrays q of shape
(dim, ...); values come back with shape q.shape[1:] and gradients with the
shape of q.
'''


def _squared_norm(q):
    return np.sum(np.asarray(q, dtype=float) ** 2, axis=0)


class Potential(ABC):
    tag = None

    @abstractmethod
    def value(self, q):
        ...

    @abstractmethod
    def gradient(self, q):
        ...

    def on_grid(self, grid):
        return self.value(grid.mesh)

    def to_dict(self):
        return {'type': self.tag, **asdict(self)}


@dataclass(frozen=True)
class Free(Potential):
    tag = 'free'

    def value(self, q):
        return np.zeros(np.shape(q)[1:])

    def gradient(self, q):
        return np.zeros(np.shape(q))


@dataclass(frozen=True)
class Harmonic(Potential):
    '''V = m w^2 |q|^2 / 2'''
    tag = 'harmonic'
    omega: float = 1.0
    mass: float = 1.0

    def value(self, q):
        return 0.5 * self.mass * self.omega ** 2 * _squared_norm(q)

    def gradient(self, q):
        return self.mass * self.omega ** 2 * np.asarray(q, dtype=float)


@dataclass(frozen=True)
class Quartic(Potential):
    '''V = lambda |q|^4 / 4'''
    tag = 'quartic'
    lam: float = 1.0

    def value(self, q):
        return 0.25 * self.lam * _squared_norm(q) ** 2

    def gradient(self, q):
        return self.lam * _squared_norm(q) * np.asarray(q, dtype=float)


@dataclass(frozen=True)
class DoubleWell(Potential):
    '''V = a |q|^4 - b |q|^2'''
    tag = 'double_well'
    a: float = 1.0
    b: float = 1.0

    def value(self, q):
        r2 = _squared_norm(q)
        return self.a * r2 ** 2 - self.b * r2

    def gradient(self, q):
        r2 = _squared_norm(q)
        return (4.0 * self.a * r2 - 2.0 * self.b) * np.asarray(q, dtype=float)


@dataclass(frozen=True)
class GaussianWell(Potential):
    '''V = -depth exp(-|q|^2 / 2 width^2)'''
    tag = 'gaussian_well'
    depth: float = 1.0
    width: float = 1.0

    def value(self, q):
        return -self.depth * np.exp(-0.5 * _squared_norm(q) / self.width ** 2)

    def gradient(self, q):
        return -self.value(q) * np.asarray(q, dtype=float) / self.width ** 2


@dataclass(frozen=True, eq=False)
class Tabulated(Potential):
    '''
    Potential given by periodic samples on a grid. Off-grid values and all
    forces come from the trigonometric interpolant of the samples.
    '''
    tag = 'tabulated'
    values: np.ndarray = field(repr=False)
    grid: Grid = None

    def __post_init__(self):
        values = self.grid.check_field(np.asarray(self.values, dtype=float))
        if not np.all(np.isfinite(values)):
            raise ScenarioError('tabulated potential contains non-finite values',
                                key='hamiltonian.values')
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, '_gradient', gradient(values, self.grid))

    def value(self, q):
        return fourier_interpolate(self.values, self.grid, q)

    def gradient(self, q):
        return fourier_interpolate(self._gradient, self.grid, q)

    def on_grid(self, grid):
        if grid == self.grid:
            return self.values
        return self.value(grid.mesh)

    def to_dict(self):
        return {'type': self.tag, 'points': list(self.grid.points)}


CATALOG = {cls.tag: cls for cls in (Free, Harmonic, Quartic, DoubleWell, GaussianWell, Tabulated)}

# parameters that must be strictly positive, per catalog entry
_POSITIVE = {'harmonic': ('omega',), 'quartic': ('lam',), 'double_well': ('a', 'b'),
             'gaussian_well': ('depth', 'width')}
_ALIASES = {'lambda': 'lam'}


def _read_tabulated(spec, grid, key):
    if grid is None:
        raise ScenarioError('a grid is required for tabulated potentials', key=key)
    if 'values' in spec:
        values = np.asarray(spec['values'], dtype=float)
    elif 'path' in spec:
        df = pd.read_csv(spec['path'])
        if 'V' not in df.columns:
            raise ScenarioError("tabulated CSV needs a 'V' column", key=f'{key}.path')
        values = df['V'].to_numpy(dtype=float)
    else:
        raise ScenarioError("tabulated potential needs 'values' or 'path'", key=key)
    if values.size != np.prod(grid.shape):
        raise ScenarioError(f'expected {np.prod(grid.shape)} samples, got {values.size}', key=key)
    return Tabulated(values=values.reshape(grid.shape), grid=grid)


def potential_from_spec(spec, grid=None, mass=1.0, key='hamiltonian'):
    '''
    Build a Potential from its scenario description, e.g.
    {"type": "harmonic", "omega": 1.0}.

    Arguments:
    - spec (dict): catalog entry with its parameters
    - grid (Grid): grid for tabulated potentials
    - mass (float): particle mass, needed by the harmonic entry
    - key (str): key path used in error messages

    Returns:
    - Potential
    '''
    tag = spec.get('type', 'free')
    if tag not in CATALOG:
        raise ScenarioError(f"unknown potential '{tag}'", key=f'{key}.type', valid=CATALOG)
    if tag == 'tabulated':
        return _read_tabulated(spec, grid, key)

    params = {_ALIASES.get(k, k): v for k, v in spec.items() if k not in ('type', 'mass')}
    cls = CATALOG[tag]
    allowed = set(cls.__dataclass_fields__) - {'mass'}
    for name, value in params.items():
        if name not in allowed:
            raise ScenarioError(f"unknown parameter '{name}'", key=f'{key}.{name}',
                                valid=sorted(allowed))
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScenarioError(f'must be a number, got {value!r}', key=f'{key}.{name}')
    for name in _POSITIVE.get(tag, ()):
        if name in params and not params[name] > 0:
            raise ScenarioError(f'must be positive, got {params[name]}', key=f'{key}.{name}')
    if tag == 'harmonic':
        params['mass'] = mass
    return cls(**params)
