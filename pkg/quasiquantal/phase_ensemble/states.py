from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import ndimage

from ..errors import ConfigurationError, ScenarioError
from ..grid import PhaseGrid, quadrature


## PHASE POINTS ===============================================================
@dataclass(frozen=True, eq=False)
class PhaseState:
    '''A point (q, p) of phase space at time t.'''
    q: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if q.shape != p.shape:
            raise ConfigurationError(f'q{q.shape} and p{p.shape} must have the same shape')
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise ConfigurationError('phase state components must be finite')
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'p', p)
## [END] PHASE POINTS =========================================================


## SAMPLED FIELDS =============================================================
@dataclass(frozen=True, eq=False)
class PhaseDensity:
    '''Samples of rho(q, p, t) on a PhaseGrid, indexed [q, p].'''
    values: np.ndarray = field(repr=False)
    grid: PhaseGrid = None
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'values', self.grid.plane.check_field(
            np.asarray(self.values, dtype=float)))

    @classmethod
    def from_profile(cls, profile, grid, t=0.0):
        q, p = grid.mesh
        return cls(values=profile(q, p), grid=grid, t=t)

    def norm(self):
        return float(quadrature(self.values, self.grid.plane))


@dataclass(frozen=True, eq=False)
class PhaseAction:
    '''
    Samples of S(q, p, t) on a PhaseGrid. An analytic `profile` (q, p) -> S,
    when present, is used for off-grid evaluation instead of interpolation.
    '''
    values: np.ndarray = field(repr=False)
    grid: PhaseGrid = None
    t: float = 0.0
    profile: object = None

    def __post_init__(self):
        object.__setattr__(self, 'values', self.grid.plane.check_field(
            np.asarray(self.values, dtype=float)))

    @classmethod
    def from_profile(cls, profile, grid, t=0.0):
        q, p = grid.mesh
        return cls(values=profile(q, p), grid=grid, t=t, profile=profile)

    def at(self, q, p):
        if self.profile is not None:
            return self.profile(q, p)
        coordinates = self.grid.plane.index_coordinates(np.stack([q, p]))
        return ndimage.map_coordinates(self.values, coordinates, order=3, mode='nearest')
## [END] SAMPLED FIELDS =======================================================


## CATALOG ====================================================================
@dataclass(frozen=True, eq=False)
class GaussianPhaseDensity:
    '''Normalized bivariate Gaussian in (q, p).'''
    mean: np.ndarray = (0.0, 0.0)
    cov: np.ndarray = ((1.0, 0.0), (0.0, 1.0))

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(2)
        cov = np.asarray(self.cov, dtype=float).reshape(2, 2)
        if not np.allclose(cov, cov.T) or np.any(np.linalg.eigvalsh(cov) <= 0):
            raise ConfigurationError('phase density covariance must be symmetric positive definite')
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', cov)

    def __call__(self, q, p):
        d = np.stack([np.asarray(q, dtype=float) - self.mean[0],
                      np.asarray(p, dtype=float) - self.mean[1]])
        precision = np.linalg.inv(self.cov)
        exponent = np.einsum('i...,ij,j...->...', d, precision, d)
        return np.exp(-0.5 * exponent) / (2.0 * np.pi * np.sqrt(np.linalg.det(self.cov)))

    def sample(self, rng, n):
        '''(q, p) arrays of n draws, each of shape (1, n).'''
        x = rng.multivariate_normal(self.mean, self.cov, size=n)
        return x[:, 0][None, :], x[:, 1][None, :]


@dataclass(frozen=True)
class PolynomialPhaseAction:
    '''S0(q, p) = sum_i a_i q^i + sum_j b_j p^j'''
    q_coefficients: tuple = ()
    p_coefficients: tuple = ()

    def __call__(self, q, p):
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        value = np.zeros(np.broadcast(q, p).shape)
        if len(self.q_coefficients):
            value = value + np.polynomial.polynomial.polyval(q, self.q_coefficients)
        if len(self.p_coefficients):
            value = value + np.polynomial.polynomial.polyval(p, self.p_coefficients)
        return value


def zero_phase_action():
    return PolynomialPhaseAction()


def phase_field_from_csv(path, grid, key='initial_state'):
    '''
    Read tabulated phase-space samples with columns q, p, value. Rows may be
    in any order; every node of the grid must be present exactly once.
    '''
    df = pd.read_csv(path)
    missing = {'q', 'p', 'value'} - set(df.columns)
    if missing:
        raise ScenarioError(f"CSV is missing columns {sorted(missing)}", key=f'{key}.path')
    nq, npts = grid.shape
    if len(df) != nq * npts:
        raise ScenarioError(f'expected {nq * npts} rows, got {len(df)}', key=f'{key}.path')
    df = df.sort_values(['q', 'p'], kind='mergesort')
    # sorted rows must fall on the nodes in C order
    q, p = grid.mesh
    atol = 1e-6 * float(np.min(grid.plane.spacing))
    if not (np.allclose(df['q'].to_numpy(dtype=float), q.ravel(), rtol=0.0, atol=atol)
            and np.allclose(df['p'].to_numpy(dtype=float), p.ravel(), rtol=0.0, atol=atol)):
        raise ScenarioError('q, p columns do not match the phase grid nodes '
                            f'(q extent {grid.q.extent[0]}, p extent {grid.p.extent[0]})',
                            key=f'{key}.path')
    return df['value'].to_numpy(dtype=float).reshape(nq, npts)
## [END] CATALOG ==============================================================
