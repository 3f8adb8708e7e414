from dataclasses import dataclass
from functools import cached_property

import numpy as np
import xarray as xr

from ..errors import ConfigurationError


'''
Uniform periodic sample lattices. Every axis covers [-L/2, L/2) with a power
of two number of points; the node at index i sits at -L/2 + i*L/N. Vector
valued quantities are stored component first, i.e. with shape (dim, ...).
'''


def _is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    '''
    Configuration-space grid of dimension 1 or 2.

    Arguments:
    - extent (tuple of float): domain length L per axis
    - points (tuple of int): number of nodes per axis, each a power of two
    '''
    extent: tuple
    points: tuple

    ## INITIALIZE =============================================================
    def __post_init__(self):
        extent = tuple(float(L) for L in np.atleast_1d(self.extent))
        points = tuple(int(n) for n in np.atleast_1d(self.points))
        object.__setattr__(self, 'extent', extent)
        object.__setattr__(self, 'points', points)

        if len(extent) != len(points):
            raise ConfigurationError(
                f'extent has {len(extent)} axes but points has {len(points)}')
        if len(points) not in (1, 2):
            raise ConfigurationError(f'grid dimension must be 1 or 2, got {len(points)}')
        for L, n in zip(extent, points):
            if not np.isfinite(L) or L <= 0:
                raise ConfigurationError(f'extent must be positive, got {L}')
            if not _is_power_of_two(n):
                raise ConfigurationError(f'points per axis must be a power of two, got {n}')

    @classmethod
    def uniform(cls, dim, extent, points):
        '''Grid with the same extent and resolution along every axis.'''
        return cls(extent=(extent,) * dim, points=(points,) * dim)
    ## [END] INITIALIZE =======================================================

    @property
    def dim(self):
        return len(self.points)

    @property
    def shape(self):
        return self.points

    @property
    def spacing(self):
        return np.asarray(self.extent) / np.asarray(self.points)

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def volume(self):
        return float(np.prod(self.extent))

    @property
    def lower(self):
        return -0.5 * np.asarray(self.extent)

    @cached_property
    def axes(self):
        return tuple(-0.5 * L + (L / n) * np.arange(n)
                     for L, n in zip(self.extent, self.points))

    @cached_property
    def mesh(self):
        '''Node coordinates, shape (dim, *points).'''
        return np.stack(np.meshgrid(*self.axes, indexing='ij'))

    @cached_property
    def wavenumbers(self):
        '''Angular wavenumbers per axis in numpy FFT ordering.'''
        return tuple(2.0 * np.pi * np.fft.fftfreq(n, d=L / n)
                     for L, n in zip(self.extent, self.points))

    def broadcast_wavenumber(self, axis):
        '''Wavenumbers of `axis` reshaped to broadcast against a field.'''
        shape = [1] * self.dim
        shape[axis] = self.points[axis]
        return self.wavenumbers[axis].reshape(shape)

    def index_coordinates(self, points):
        '''Fractional node indices of physical points with shape (dim, ...).'''
        points = np.asarray(points, dtype=float)
        lower = self.lower.reshape((self.dim,) + (1,) * (points.ndim - 1))
        spacing = self.spacing.reshape((self.dim,) + (1,) * (points.ndim - 1))
        return (points - lower) / spacing

    def check_field(self, field):
        '''Raise unless the trailing axes of `field` match the grid shape.'''
        field = np.asarray(field)
        if field.shape[field.ndim - self.dim:] != self.shape:
            raise ConfigurationError(
                f'field of shape {field.shape} is not sampled on a grid of shape {self.shape}')
        return field

    def coords(self):
        '''Coordinate mapping for xarray objects: q1[, q2].'''
        return {f'q{k + 1}': axis for k, axis in enumerate(self.axes)}

    @property
    def dims(self):
        return tuple(f'q{k + 1}' for k in range(self.dim))

    def to_dataset(self, attrs=None, **fields):
        '''Wrap node samples into an xarray Dataset with coordinates q1[, q2].'''
        data_vars = {name: (self.dims, np.asarray(values))
                     for name, values in fields.items()}
        return xr.Dataset(data_vars=data_vars, coords=self.coords(),
                          attrs=dict(attrs or {}))


@dataclass(frozen=True)
class PhaseGrid:
    '''
    Phase-space grid for one degree of freedom: a q grid and a p grid.

    The pair behaves as a two dimensional Grid over the (q, p) plane through
    `plane`, so quadrature and spline sampling are shared with configuration
    space.
    '''
    q: Grid
    p: Grid

    def __post_init__(self):
        if self.q.dim != 1 or self.p.dim != 1:
            raise ConfigurationError('phase grids are supported for one degree of freedom only')

    @classmethod
    def from_extents(cls, q_extent, q_points, p_extent, p_points):
        return cls(q=Grid((q_extent,), (q_points,)), p=Grid((p_extent,), (p_points,)))

    @cached_property
    def plane(self):
        return Grid(extent=self.q.extent + self.p.extent,
                    points=self.q.points + self.p.points)

    @property
    def shape(self):
        return self.plane.shape

    @property
    def cell_volume(self):
        return self.plane.cell_volume

    @property
    def volume(self):
        return self.plane.volume

    @property
    def mesh(self):
        '''Node coordinates (q, p), each of shape (Nq, Np).'''
        return self.plane.mesh
