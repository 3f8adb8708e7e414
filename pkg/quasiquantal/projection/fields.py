from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError
from ..grid import Grid, gradient, spectral_derivative, quadrature, fourier_interpolate


'''
Configuration-space fields of the QA tier: M(q, t), S(q, t) and rho(q, t).

Momentum and action fields split into an exactly differentiated background
(affine for M, quadratic for S) and a periodic remainder that goes through
the spectral pathway. Nodes not reached by characteristics are marked
uncovered; their remainder is copied from the nearest covered node.
'''


def _column(vector, ndim):
    return np.asarray(vector).reshape((-1,) + (1,) * ndim)


def _affine(matrix, offset, q):
    q = np.asarray(q, dtype=float)
    return np.einsum('ij,j...->i...', matrix, q) + _column(offset, q.ndim - 1)


def _quadratic(hessian, linear, q):
    q = np.asarray(q, dtype=float)
    return (0.5 * np.einsum('i...,ij,j...->...', q, hessian, q)
            + np.einsum('i,i...->...', linear, q))


## LEAST SQUARES BACKGROUNDS ==================================================
def fit_affine(points, values):
    '''
    Least-squares M ~ A q + b.

    Arguments:
    - points (ndarray): positions, shape (dim, n)
    - values (ndarray): momenta, shape (dim, n)

    Returns:
    - (A, b) with A[k, j] = dM_k/dq_j
    '''
    dim, n = points.shape
    design = np.vstack([points, np.ones(n)]).T
    coefficients = np.linalg.lstsq(design, values.T, rcond=None)[0]
    return coefficients[:dim].T, coefficients[dim]


def fit_quadratic(points, values):
    '''Least-squares S ~ q.A.q/2 + b.q + c; returns (A, b, c).'''
    dim, n = points.shape
    columns, slots = [], []
    for i in range(dim):
        for j in range(i, dim):
            columns.append(points[i] * points[j])
            slots.append((i, j))
    design = np.vstack(columns + list(points) + [np.ones(n)]).T
    c = np.linalg.lstsq(design, values, rcond=None)[0]

    hessian = np.zeros((dim, dim))
    for coefficient, (i, j) in zip(c, slots):
        if i == j:
            hessian[i, i] = 2.0 * coefficient
        else:
            hessian[i, j] = hessian[j, i] = coefficient
    return hessian, c[len(slots):len(slots) + dim], c[-1]


def fill_uncovered(values, covered):
    '''Copy every uncovered node from its nearest covered node (last axes = grid).'''
    if covered is None or np.all(covered):
        return values
    if not np.any(covered):
        return np.zeros_like(values)
    indices = ndimage.distance_transform_edt(~covered, return_distances=False,
                                             return_indices=True)
    return values[(Ellipsis,) + tuple(indices)]
## [END] LEAST SQUARES BACKGROUNDS ============================================


## MOMENTUM FIELD =============================================================
@dataclass(frozen=True, eq=False)
class MomentumField:
    '''
    M(q, t) = A q + b + periodic(q), component first.

    Arguments:
    - periodic (ndarray): periodic remainder, shape (dim, *grid.shape)
    - grid (Grid): sampling grid
    - t (float): time stamp
    - gradient_matrix (ndarray): A, defaults to zero
    - offset (ndarray): b, defaults to zero
    - covered (ndarray of bool): nodes reached by characteristics, None = all
    - profile: analytic source with a `momentum(q)` method, used off-grid
    '''
    periodic: np.ndarray = field(repr=False)
    grid: Grid = None
    t: float = 0.0
    gradient_matrix: np.ndarray = None
    offset: np.ndarray = None
    covered: np.ndarray = field(default=None, repr=False)
    profile: object = None

    def __post_init__(self):
        dim = self.grid.dim
        periodic = self.grid.check_field(np.asarray(self.periodic, dtype=float))
        if periodic.shape != (dim,) + self.grid.shape:
            raise ConfigurationError(f'momentum field needs shape {(dim,) + self.grid.shape}')
        object.__setattr__(self, 'periodic', periodic)
        matrix = np.zeros((dim, dim)) if self.gradient_matrix is None else self.gradient_matrix
        offset = np.zeros(dim) if self.offset is None else self.offset
        object.__setattr__(self, 'gradient_matrix', np.asarray(matrix, dtype=float).reshape(dim, dim))
        object.__setattr__(self, 'offset', np.asarray(offset, dtype=float).reshape(dim))

    @classmethod
    def from_profile(cls, profile, grid, t=0.0):
        '''Sample an analytic momentum profile; affine profiles keep their exact background.'''
        values = profile.momentum(grid.mesh)
        background = profile.background() if hasattr(profile, 'background') else None
        if background is None:
            return cls(periodic=values, grid=grid, t=t, profile=profile)
        matrix, offset = background
        periodic = values - _affine(matrix, offset, grid.mesh)
        return cls(periodic=periodic, grid=grid, t=t, gradient_matrix=matrix,
                   offset=offset, profile=profile)

    @classmethod
    def from_values(cls, values, grid, t=0.0, covered=None):
        '''Node samples -> field, with the affine background fitted on covered nodes.'''
        values = np.asarray(values, dtype=float)
        mask = np.ones(grid.shape, dtype=bool) if covered is None else covered
        if not np.any(mask):
            return cls(periodic=np.zeros_like(values), grid=grid, t=t, covered=covered)
        points = grid.mesh[:, mask]
        matrix, offset = fit_affine(points, values[:, mask])
        remainder = values - _affine(matrix, offset, grid.mesh)
        return cls(periodic=fill_uncovered(remainder, covered), grid=grid, t=t,
                   gradient_matrix=matrix, offset=offset, covered=covered)

    @property
    def dim(self):
        return self.grid.dim

    @cached_property
    def values(self):
        return _affine(self.gradient_matrix, self.offset, self.grid.mesh) + self.periodic

    def at(self, points):
        points = np.asarray(points, dtype=float)
        if self.profile is not None:
            return self.profile.momentum(points)
        return (_affine(self.gradient_matrix, self.offset, points)
                + fourier_interpolate(self.periodic, self.grid, points))

    momentum = at

    def derivative(self, k, i):
        '''dM_k/dq_i on the grid.'''
        return self.gradient_matrix[k, i] + spectral_derivative(self.periodic[k], self.grid, axis=i)

    def divergence(self):
        return sum(self.derivative(k, k) for k in range(self.dim))

    def to_dataset(self, attrs=None):
        fields = {f'M{k + 1}': self.values[k] for k in range(self.dim)}
        return self.grid.to_dataset(attrs={'t': self.t, **(attrs or {})}, **fields)
## [END] MOMENTUM FIELD =======================================================


## ACTION FIELD ===============================================================
@dataclass(frozen=True, eq=False)
class ConfigAction:
    '''
    S(q, t) = q.A.q/2 + b.q + periodic(q); NaN on `mask`.

    Winding offsets w_k are the special case b_k = 2 pi hbar w_k / L_k of the
    linear background; they are recorded as integers in `winding`.
    '''
    periodic: np.ndarray = field(repr=False)
    grid: Grid = None
    t: float = 0.0
    hessian: np.ndarray = None
    linear: np.ndarray = None
    winding: tuple = None
    mask: np.ndarray = field(default=None, repr=False)
    covered: np.ndarray = field(default=None, repr=False)
    profile: object = None

    def __post_init__(self):
        dim = self.grid.dim
        periodic = self.grid.check_field(np.asarray(self.periodic, dtype=float))
        object.__setattr__(self, 'periodic', periodic)
        hessian = np.zeros((dim, dim)) if self.hessian is None else self.hessian
        linear = np.zeros(dim) if self.linear is None else self.linear
        object.__setattr__(self, 'hessian', np.asarray(hessian, dtype=float).reshape(dim, dim))
        object.__setattr__(self, 'linear', np.asarray(linear, dtype=float).reshape(dim))
        if self.winding is not None:
            object.__setattr__(self, 'winding', tuple(int(w) for w in self.winding))

    @classmethod
    def from_profile(cls, profile, grid, t=0.0):
        values = profile.value(grid.mesh)
        background = profile.background() if hasattr(profile, 'background') else None
        if background is None:
            return cls(periodic=values, grid=grid, t=t, profile=profile)
        hessian, linear = background
        return cls(periodic=values - _quadratic(hessian, linear, grid.mesh), grid=grid, t=t,
                   hessian=hessian, linear=linear, profile=profile)

    @classmethod
    def from_values(cls, values, grid, t=0.0, covered=None):
        '''Node samples -> field, with the quadratic background fitted on covered nodes.'''
        values = np.asarray(values, dtype=float)
        mask = np.ones(grid.shape, dtype=bool) if covered is None else covered
        if not np.any(mask):
            return cls(periodic=np.zeros_like(values), grid=grid, t=t, covered=covered)
        hessian, linear, _ = fit_quadratic(grid.mesh[:, mask], values[mask])
        remainder = values - _quadratic(hessian, linear, grid.mesh)
        return cls(periodic=fill_uncovered(remainder, covered), grid=grid, t=t,
                   hessian=hessian, linear=linear, covered=covered)

    @property
    def dim(self):
        return self.grid.dim

    @cached_property
    def values(self):
        values = _quadratic(self.hessian, self.linear, self.grid.mesh) + self.periodic
        if self.mask is not None:
            values = np.where(self.mask, np.nan, values)
        return values

    def at(self, points):
        points = np.asarray(points, dtype=float)
        if self.profile is not None:
            return self.profile.value(points)
        return (_quadratic(self.hessian, self.linear, points)
                + fourier_interpolate(self.periodic, self.grid, points))

    value = at

    def momentum_at(self, points):
        '''grad S at arbitrary points.'''
        points = np.asarray(points, dtype=float)
        if self.profile is not None:
            return self.profile.gradient(points)
        return (_affine(self.hessian, self.linear, points)
                + fourier_interpolate(gradient(self.periodic, self.grid), self.grid, points))

    def gradient(self):
        '''The momentum field grad S.'''
        return MomentumField(periodic=gradient(self.periodic, self.grid), grid=self.grid,
                             t=self.t, gradient_matrix=self.hessian, offset=self.linear,
                             covered=self.covered)

    def to_dataset(self, attrs=None):
        attrs = {'t': self.t, **(attrs or {})}
        if self.winding is not None:
            attrs['winding'] = list(self.winding)
        return self.grid.to_dataset(attrs=attrs, S=self.values)
## [END] ACTION FIELD =========================================================


## DENSITY FIELD ==============================================================
@dataclass(frozen=True, eq=False)
class ConfigDensity:
    '''rho(q, t) on a Grid; uncovered nodes carry zero density.'''
    values: np.ndarray = field(repr=False)
    grid: Grid = None
    t: float = 0.0
    covered: np.ndarray = field(default=None, repr=False)
    profile: object = None

    def __post_init__(self):
        values = self.grid.check_field(np.asarray(self.values, dtype=float))
        if values.shape != self.grid.shape:
            raise ConfigurationError(f'density needs shape {self.grid.shape}, got {values.shape}')
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_profile(cls, profile, grid, t=0.0):
        return cls(values=profile.value(grid.mesh), grid=grid, t=t, profile=profile)

    @property
    def dim(self):
        return self.grid.dim

    def norm(self):
        return float(quadrature(self.values, self.grid))

    def amplitude(self):
        '''sqrt(rho), clipped at zero.'''
        return np.sqrt(np.clip(self.values, 0.0, None))

    def mask(self, floor):
        '''Nodes with rho below floor * max(rho).'''
        return self.values < floor * np.max(self.values)

    def at(self, points):
        if self.profile is not None:
            return self.profile.value(points)
        return fourier_interpolate(self.values, self.grid, points)

    value = at

    def to_dataset(self, attrs=None):
        return self.grid.to_dataset(attrs={'t': self.t, **(attrs or {})}, rho=self.values)
## [END] DENSITY FIELD ========================================================
