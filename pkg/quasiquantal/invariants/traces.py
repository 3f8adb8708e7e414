from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..errors import (AdvectionError, CausticError, CirculationUndefinedError, ConfigurationError,
                      UnreliableWindingError)
from ..grid import NumericsConfig
from .contours import advect_contour, circulation, measure_winding, phase_circulation, WINDING_RESIDUE


## PROVIDERS ==================================================================
class SteadyMomentumProvider:
    '''
    Time-independent momentum field M(q) with velocity M / m.

    Arguments:
    - momentum: callable M(q) on component-first points, or an object with `momentum(q)`
    - mass (float): particle mass
    '''

    def __init__(self, momentum, mass=1.0):
        self._momentum = momentum.momentum if hasattr(momentum, 'momentum') else momentum
        self.mass = float(mass)

    def momentum_at(self, points, t=None):
        return np.asarray(self._momentum(points), dtype=float)

    def velocity_at(self, points, t=None):
        return self.momentum_at(points) / self.mass


class PhaseFlowProvider:
    '''Hamiltonian vector field (dH/dp, -dH/dq) on phase points stacked as (q, p).'''

    def __init__(self, H):
        self.H = H

    def velocity_at(self, points, t=None):
        d = points.shape[0] // 2
        q, p = points[:d], points[d:]
        return np.concatenate([self.H.velocity_map(p), self.H.force(q)])
## [END] PROVIDERS ============================================================


## TRACES =====================================================================
@dataclass(frozen=True, eq=False)
class CirculationTrace:
    '''
    Circulation recorded along an advected contour.

    Arguments:
    - times (ndarray): sample times
    - circulation (ndarray): loop integrals, NaN where undefined
    - winding (list): integer windings or None where not measured
    - residue (ndarray): distance of the accumulated phase to the winding
    - flags (list of str): '' or a comma separated list of conditions per sample
    - truncated (bool): the trace stopped early at a caustic
    - contour: the contour at the last recorded time
    - centroid (ndarray): mean vertex position per sample, shape (n, dim)
    '''
    times: np.ndarray
    circulation: np.ndarray
    winding: list = None
    residue: np.ndarray = None
    flags: list = None
    truncated: bool = False
    contour: object = field(default=None, repr=False)
    centroid: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.times)
        object.__setattr__(self, 'times', np.asarray(self.times, dtype=float))
        object.__setattr__(self, 'circulation', np.asarray(self.circulation, dtype=float))
        if self.winding is None:
            object.__setattr__(self, 'winding', [None] * n)
        if self.residue is None:
            object.__setattr__(self, 'residue', np.full(n, np.nan))
        if self.flags is None:
            object.__setattr__(self, 'flags', [''] * n)

    @property
    def drift(self):
        '''max |I(t) - I(t0)| over defined samples.'''
        defined = self.circulation[np.isfinite(self.circulation)]
        if defined.size == 0:
            return float('nan')
        return float(np.max(np.abs(defined - defined[0])))

    @property
    def relative_drift(self):
        defined = self.circulation[np.isfinite(self.circulation)]
        if defined.size == 0:
            return float('nan')
        reference = abs(defined[0])
        return self.drift / reference if reference > 0 else self.drift

    def jumps(self):
        '''Sample indices where the winding changes between consecutive measured samples.'''
        measured = [(i, w) for i, w in enumerate(self.winding) if w is not None]
        return [j for (_, a), (j, b) in zip(measured, measured[1:]) if a != b]

    def jump_records(self):
        '''Time, windings before and after, and contour centroid of every jump.'''
        records = []
        for j in self.jumps():
            before = next(w for w in reversed(self.winding[:j]) if w is not None)
            location = None if self.centroid is None else [float(x) for x in self.centroid[j]]
            records.append({'t': float(self.times[j]), 'winding_before': int(before),
                            'winding_after': int(self.winding[j]), 'location': location})
        return records

    def to_frame(self):
        return pd.DataFrame({'t': self.times, 'circulation': self.circulation,
                             'winding': pd.array(self.winding, dtype='Int64'),
                             'residue': self.residue, 'flags': self.flags})

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.12e')
        return path


def _times(times):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(np.diff(times) < 0):
        raise ConfigurationError('trace times must be non-decreasing')
    return times


def poincare_invariant(H, C0, times, config=None):
    '''
    Loop integral of p dq along a phase-space contour carried by the
    canonical flow, at each requested time.
    '''
    config = config or NumericsConfig()
    provider = PhaseFlowProvider(H)
    contour = C0
    values = []
    for time in _times(times):
        contour, _ = advect_contour(provider, contour, time - contour.t, config.dt)
        values.append(phase_circulation(contour))
    return CirculationTrace(times=_times(times), circulation=values, contour=contour)


def kelvin_trace_qa(flow, C0, times, config=None):
    '''
    Circulation of M along a contour moving with v = M / m.

    Arguments:
    - flow: CharacteristicFlow or SteadyMomentumProvider
    - C0 (Contour): contour in the plane
    - times (array-like): sample times, starting at the flow time

    Returns:
    - CirculationTrace; a caustic ends the trace with truncated=True and
      the flag 'caustic' on the first unreached time
    '''
    config = config or getattr(flow, 'config', None) or NumericsConfig()
    if C0.dim != 2:
        raise ConfigurationError('Kelvin traces need a contour in the plane')
    times = _times(times)
    contour = C0
    recorded, values, flags, centroids = [], [], [], []
    truncated = False
    for time in times:
        recorded.append(time)
        try:
            contour, _ = advect_contour(flow, contour, time - contour.t, config.dt)
            values.append(circulation(flow, contour, t=time))
            flags.append('')
            centroids.append(contour.points.mean(axis=1))
        except CausticError:
            values.append(np.nan)
            flags.append('caustic')
            centroids.append(contour.points.mean(axis=1))
            truncated = True
            break
        except (CirculationUndefinedError, AdvectionError) as exc:
            values.append(np.nan)
            flags.append(type(exc).__name__)
            centroids.append(contour.points.mean(axis=1))
            truncated = True
            break
    return CirculationTrace(times=recorded, circulation=values, flags=flags,
                            truncated=truncated, contour=contour, centroid=np.asarray(centroids))


def kelvin_trace_qt(flow, C0, times, config=None):
    '''
    Circulation of grad S and winding of psi along a contour moving with the
    Madelung velocity of a SchrodingerFlow. Vertices over the density mask
    are held in place and flagged 'masked'; the trace continues.
    '''
    config = config or flow.config
    if C0.dim != 2:
        raise ConfigurationError('Kelvin traces need a contour in the plane')
    times = _times(times)
    contour = C0
    values, windings, residues, flags, centroids = [], [], [], [], []
    for time in times:
        contour, frozen = advect_contour(flow, contour, time - contour.t, 2.0 * flow.dt,
                                         on_undefined='freeze')
        psi = flow.advance_to(time)
        notes = ['masked'] if frozen else []
        centroids.append(contour.points.mean(axis=1))
        try:
            values.append(circulation(flow, contour))
        except CirculationUndefinedError:
            notes.append('masked')
            values.append(np.nan)
        try:
            measurement = measure_winding(psi, contour, floor=config.density_floor)
            windings.append(measurement.winding)
            residues.append(measurement.residue)
            if measurement.residue >= WINDING_RESIDUE:
                notes.append('unreliable_winding')
        except UnreliableWindingError:
            windings.append(None)
            residues.append(np.nan)
            notes.append('unreliable_winding')
        flags.append(','.join(dict.fromkeys(notes)))
    return CirculationTrace(times=times, circulation=values, winding=windings,
                            residue=np.asarray(residues), flags=flags, contour=contour,
                            centroid=np.asarray(centroids))
## [END] TRACES ===============================================================


## SYMPLECTIC MATRIX ==========================================================
CANONICAL_SYMPLECTIC = np.array([[0.0, -1.0], [1.0, 0.0]])


def symplectic_vorticity(points, step=1e-4):
    '''
    Curl Z_ij = d_i G_j - d_j G_i of the phase-space field G = (p, 0) at
    phase points (q, p) by central differences.

    Arguments:
    - points (ndarray): phase points, shape (2, n)
    - step (float): finite-difference step

    Returns:
    - (Z of shape (n, 2, 2), max deviation from CANONICAL_SYMPLECTIC)
    '''
    points = np.asarray(points, dtype=float).reshape(2, -1)

    def G(x):
        return np.stack([x[1], np.zeros_like(x[0])])

    D = np.empty((points.shape[1], 2, 2))
    for i in range(2):
        e = np.zeros((2, 1))
        e[i] = step
        D[:, i, :] = ((G(points + e) - G(points - e)) / (2.0 * step)).T
    Z = D - D.transpose(0, 2, 1)
    return Z, float(np.max(np.abs(Z - CANONICAL_SYMPLECTIC)))
## [END] SYMPLECTIC MATRIX ====================================================
