from dataclasses import dataclass, asdict

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from ..errors import CausticError, NumericalBlowupError, PreconditionError
from ..grid import NumericsConfig
from ..phase_ensemble import STEPPERS, step_count
from .fields import MomentumField, ConfigAction, ConfigDensity


## CAUSTIC REPORT =============================================================
@dataclass(frozen=True)
class CausticReport:
    '''
    Breakdown diagnostic of a characteristic flow.

    Arguments:
    - time (float or None): first time min det(dq/dq0) fell below the threshold
    - location (tuple or None): position of the seed with the smallest determinant
    - min_jacobian (float): smallest determinant seen on accepted steps
    - min_jacobian_time (float): time of that minimum
    - threshold (float): the caustic threshold in force
    - requested_time (float or None): time the caller asked for
    '''
    time: float = None
    location: tuple = None
    min_jacobian: float = 1.0
    min_jacobian_time: float = 0.0
    threshold: float = 1e-3
    requested_time: float = None

    @property
    def detected(self):
        return self.time is not None

    @property
    def multivalued(self):
        '''True when the requested time lies at or beyond the caustic.'''
        return (self.time is not None and self.requested_time is not None
                and self.requested_time >= self.time)

    def to_dict(self):
        out = asdict(self)
        out['location'] = None if self.location is None else [float(x) for x in self.location]
        out['detected'] = self.detected
        out['multivalued'] = self.multivalued
        return out
## [END] CAUSTIC REPORT =======================================================


@dataclass(frozen=True, eq=False)
class FlowSnapshot:
    momentum: MomentumField
    action: ConfigAction
    density: ConfigDensity


def _evaluator(source, attribute):
    if source is None:
        return None
    if hasattr(source, attribute):
        return getattr(source, attribute)
    if callable(source):
        return source
    raise PreconditionError(f'{type(source).__name__} provides no {attribute}(q)')


class CharacteristicFlow:
    '''
    Characteristics of the canonical condition, the Hamilton-Jacobi and the
    continuity equation, started on the surface p = M0(q).

    Seeds form a regular Lagrangian lattice (`oversample` seeds per grid
    spacing, a quarter extent of margin per side) that is carried forward in
    time together with the accumulated action and the Jacobian dq(t)/dq0.
    Eulerian values at arbitrary points come from inverting the seed map by
    Newton iterations on its cubic B-spline interpolant.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - grid (Grid): configuration grid of dimension 1 or 2
    - momentum0: initial momentum field, an object with `momentum(q)` or a callable
    - action0: initial action, an object with `value(q)` or a callable (optional)
    - density0: initial density, an object with `value(q)` or a callable (optional)
    - config (NumericsConfig): dt, integrator, caustic threshold and oversampling
    - t0 (float): initial time
    '''
    _NEWTON_ITERATIONS = 40
    # seeds next to the lattice edge feel the mirror extension of the splines
    _EDGE_SEEDS = 16

    ## INITIALIZE =============================================================
    def __init__(self, H, grid, momentum0, action0=None, density0=None, config=None, t0=0.0):
        self.H = H
        self.grid = grid
        self.config = config or NumericsConfig()
        self._momentum0 = _evaluator(momentum0, 'momentum')
        self._action0 = _evaluator(action0, 'value')
        self._density0 = _evaluator(density0, 'value')

        extent = np.asarray(grid.extent)
        self.seed_spacing = grid.spacing / self.config.seeds_per_spacing(grid.dim)
        self.seed_origin = grid.lower - 0.25 * extent
        counts = np.ceil(1.5 * extent / self.seed_spacing).astype(int) + 1
        axes = [o + h * np.arange(n) for o, h, n in zip(self.seed_origin, self.seed_spacing, counts)]

        self._q = np.stack(np.meshgrid(*axes, indexing='ij'))
        self._p = np.array(self._momentum0(self._q), dtype=float).reshape(self._q.shape)
        self._s = np.zeros(self._q.shape[1:])
        self.t0 = self.t = float(t0)

        self._jacobian = self._jacobian_matrix(self._q)
        self._det = self._determinant(self._jacobian)
        self._min_jacobian = float(self._det.min())
        self._min_jacobian_time = self.t
        self._caustic_time = None
        self._caustic_location = None
        self._cache = None
        if self._min_jacobian < self.config.caustic_threshold:
            self._mark_caustic(self.t, self._q, self._det)
    ## [END] INITIALIZE =======================================================

    @property
    def dim(self):
        return self.grid.dim

    @property
    def mass(self):
        return self.H.mass

    @property
    def caustic_time(self):
        return self._caustic_time

    @property
    def seed_count(self):
        return int(np.prod(self._q.shape[1:]))

    def report(self, requested_time=None):
        return CausticReport(time=self._caustic_time, location=self._caustic_location,
                             min_jacobian=self._min_jacobian,
                             min_jacobian_time=self._min_jacobian_time,
                             threshold=self.config.caustic_threshold,
                             requested_time=requested_time)

    ## JACOBIAN ===============================================================
    def _jacobian_matrix(self, q):
        '''dq_k/dq0_j on the seed lattice, shape (dim, dim, *lattice).'''
        d = self.dim
        return np.stack([np.stack([np.gradient(q[k], self.seed_spacing[j], axis=j, edge_order=2)
                                   for j in range(d)]) for k in range(d)])

    @staticmethod
    def _determinant(J):
        if J.shape[0] == 1:
            return J[0, 0]
        return J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]

    def _mark_caustic(self, time, q, det):
        self._caustic_time = float(time)
        where = np.unravel_index(np.argmin(det), det.shape)
        self._caustic_location = tuple(float(x) for x in q[(slice(None),) + where])
    ## [END] JACOBIAN =========================================================

    ## TIME STEPPING ==========================================================
    def advance_to(self, t, strict=True):
        '''
        Move every seed forward to time t.

        The flow stops at the last step before the determinant falls below
        the caustic threshold; the crossing time is interpolated linearly
        between the two steps.

        Arguments:
        - t (float): target time, not earlier than the current one
        - strict (bool): raise CausticError at a caustic instead of returning False

        Returns:
        - True when t was reached
        '''
        t = float(t)
        if t < self.t - 1e-12:
            raise PreconditionError(f'characteristic flows only advance forward (at t = {self.t}, asked {t})')
        if self._caustic_time is not None and t >= self._caustic_time:
            return self._stop(t, strict)
        remaining = t - self.t
        if remaining <= 0:
            return True

        n = step_count(remaining, self.config.dt)
        h = remaining / n
        stepper = STEPPERS[self.config.integrator]
        threshold = self.config.caustic_threshold
        for _ in range(n):
            q, p, s = stepper(self.H, self._q, self._p, self._s, h)
            if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
                raise NumericalBlowupError(f'non-finite characteristics after t = {self.t}')
            J = self._jacobian_matrix(q)
            det = self._determinant(J)
            low = float(det.min())
            if low < threshold:
                previous = float(self._det.min())
                fraction = (previous - threshold) / (previous - low) if previous > low else 1.0
                self._mark_caustic(self.t + np.clip(fraction, 0.0, 1.0) * h, q, det)
                return self._stop(t, strict)

            self._q, self._p, self._s = q, p, s
            self._jacobian, self._det = J, det
            self.t += h
            if low < self._min_jacobian:
                self._min_jacobian, self._min_jacobian_time = low, self.t
            self._cache = None
        self.t = t
        return True

    def _stop(self, t, strict):
        if strict:
            raise CausticError(f'caustic at t* = {self._caustic_time:.6g}, requested t = {t:.6g}',
                               report=self.report(requested_time=t))
        return False
    ## [END] TIME STEPPING ====================================================

    ## EULERIAN EVALUATION ====================================================
    def _lattice(self):
        if self._cache is None:
            def prefilter(a):
                return ndimage.spline_filter(a, order=3, mode='mirror')
            self._cache = {'q': [prefilter(c) for c in self._q],
                           'p': [prefilter(c) for c in self._p],
                           's': prefilter(self._s),
                           'det': prefilter(self._det),
                           'tree': cKDTree(self._q.reshape(self.dim, -1).T)}
        return self._cache

    @staticmethod
    def _sample(coefficients, idx):
        return ndimage.map_coordinates(coefficients, idx, order=3, mode='mirror', prefilter=False)

    def lagrangian_coordinates(self, points):
        '''
        Invert the seed map at the current time.

        Arguments:
        - points (ndarray): positions, shape (dim, n)

        Returns:
        - idx (ndarray): fractional lattice indices of the foot points, shape (dim, n)
        - covered (ndarray of bool): Newton converged away from the lattice edge
        '''
        lattice = self._lattice()
        points = np.asarray(points, dtype=float).reshape(self.dim, -1)
        upper = np.array(self._q.shape[1:], dtype=float)[:, None] - 1.0
        tolerance = 1e-11 * max(1.0, float(np.max(self.grid.extent)))

        _, nearest = lattice['tree'].query(points.T)
        idx = np.array(np.unravel_index(nearest, self._q.shape[1:]), dtype=float)
        for _ in range(self._NEWTON_ITERATIONS):
            residual = np.stack([self._sample(c, idx) for c in lattice['q']]) - points
            if np.all(np.abs(residual) <= tolerance):
                break
            # Jacobian in index units
            J = np.stack([np.stack([ndimage.map_coordinates(self._jacobian[k, j], idx, order=1,
                                                            mode='nearest') * self.seed_spacing[j]
                                    for j in range(self.dim)]) for k in range(self.dim)])
            if self.dim == 1:
                step = residual / J[0]
            else:
                step = np.linalg.solve(np.moveaxis(J, -1, 0), residual.T[..., None])[..., 0].T
            idx = np.clip(idx - step, 0.0, upper)

        residual = np.stack([self._sample(c, idx) for c in lattice['q']]) - points
        inside = np.all((idx >= self._EDGE_SEEDS) & (idx <= upper - self._EDGE_SEEDS), axis=0)
        covered = inside & np.all(np.abs(residual) <= 1e3 * tolerance, axis=0)
        return idx, covered

    def initial_positions(self, idx):
        origin = self.seed_origin.reshape(-1, 1)
        return origin + self.seed_spacing.reshape(-1, 1) * idx

    def _invert(self, points, t):
        if t is not None:
            self.advance_to(t)
        points = np.asarray(points, dtype=float)
        idx, covered = self.lagrangian_coordinates(points.reshape(self.dim, -1))
        return idx, covered, points.shape[1:]

    def momentum_at(self, points, t=None):
        '''M(q, t); NaN where no characteristic arrives.'''
        idx, covered, shape = self._invert(points, t)
        M = np.stack([self._sample(c, idx) for c in self._lattice()['p']])
        M[:, ~covered] = np.nan
        return M.reshape((self.dim,) + shape)

    def velocity_at(self, points, t=None):
        return self.H.velocity_map(self.momentum_at(points, t))

    def action_at(self, points, t=None):
        '''S(q, t) = S0(q0) + accumulated Lagrangian, gauge f(t) = 0.'''
        idx, covered, shape = self._invert(points, t)
        S = self._sample(self._lattice()['s'], idx)
        if self._action0 is not None:
            S = S + self._action0(self.initial_positions(idx))
        S[~covered] = np.nan
        return S.reshape(shape)

    def density_at(self, points, t=None):
        '''rho(q, t) = rho0(q0) / |det dq/dq0|; zero where no characteristic arrives.'''
        if self._density0 is None:
            raise PreconditionError('flow was built without an initial density')
        idx, covered, shape = self._invert(points, t)
        det = np.abs(self._sample(self._lattice()['det'], idx))
        rho = self._density0(self.initial_positions(idx)) / det
        rho[~covered] = 0.0
        return rho.reshape(shape)

    def coverage(self, points, t=None):
        _, covered, shape = self._invert(points, t)
        return covered.reshape(shape)

    def snapshot(self, t=None):
        '''Eulerian rebuild of M, S and rho on the grid nodes at the current time.'''
        if t is not None:
            self.advance_to(t)
        grid = self.grid
        nodes = grid.mesh.reshape(self.dim, -1)
        idx, covered = self.lagrangian_coordinates(nodes)
        lattice = self._lattice()
        q0 = self.initial_positions(idx)

        M = np.stack([self._sample(c, idx) for c in lattice['p']])
        S = self._sample(lattice['s'], idx)
        if self._action0 is not None:
            S = S + self._action0(q0)
        if self._density0 is not None:
            rho = self._density0(q0) / np.abs(self._sample(lattice['det'], idx))
        else:
            rho = np.zeros(idx.shape[1])
        rho[~covered] = 0.0

        mask = covered.reshape(grid.shape)
        momentum = MomentumField.from_values(M.reshape((self.dim,) + grid.shape), grid,
                                             t=self.t, covered=mask)
        action = ConfigAction.from_values(S.reshape(grid.shape), grid, t=self.t, covered=mask)
        density = ConfigDensity(values=rho.reshape(grid.shape), grid=grid, t=self.t, covered=mask)
        return FlowSnapshot(momentum=momentum, action=action, density=density)
    ## [END] EULERIAN EVALUATION ==============================================
