from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import (AdvectionError, CirculationUndefinedError, ConfigurationError,
                      UnreliableWindingError)
from ..phase_ensemble import step_count


'''
Closed polylines, their advection and the periodic line integrals taken
along them. A contour with n vertices is parametrized by theta in [0, 2 pi)
with vertex i at theta = 2 pi i / n; tangents come from the spectral
derivative in theta and line integrals from the periodic trapezoid rule.
'''

MIN_VERTICES = 64
WINDING_RESIDUE = 0.05


## CONTOUR ====================================================================
def _theta_derivative(values):
    n = values.shape[-1]
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    result = np.fft.ifft(1j * k * np.fft.fft(values, axis=-1), axis=-1)
    return result.real if np.isrealobj(values) else result


@dataclass(frozen=True, eq=False)
class Contour:
    '''
    Closed polyline in configuration or phase space.

    Arguments:
    - points (ndarray): vertices, shape (dim, n); the last vertex connects to the first
    - t (float): time stamp
    '''
    points: np.ndarray = field(repr=False)
    t: float = 0.0

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if points.shape[1] < MIN_VERTICES:
            raise ConfigurationError(f'contours need at least {MIN_VERTICES} vertices, got {points.shape[1]}')
        object.__setattr__(self, 'points', points)

    @classmethod
    def circle(cls, center=(0.0, 0.0), radius=1.0, n=256, clockwise=False, t=0.0):
        '''
        Circle in configuration space, counter-clockwise unless asked
        otherwise: a rigid rotation has positive circulation around it and a
        charge +1 vortex winds +1. Use `phase_circle` in the (q, p) plane.
        '''
        theta = 2.0 * np.pi * np.arange(n) / n
        sign = -1.0 if clockwise else 1.0
        center = np.asarray(center, dtype=float).reshape(2, 1)
        return cls(points=center + radius * np.stack([np.cos(theta), sign * np.sin(theta)]), t=t)

    @classmethod
    def phase_circle(cls, center=(0.0, 0.0), radius=1.0, n=256, t=0.0):
        '''Circle in the (q, p) plane with loop integral of p dq = +pi r^2 (clockwise).'''
        return cls.circle(center=center, radius=radius, n=n, clockwise=True, t=t)

    @property
    def dim(self):
        return self.points.shape[0]

    @property
    def size(self):
        return self.points.shape[1]

    def segment_lengths(self):
        return np.linalg.norm(np.roll(self.points, -1, axis=1) - self.points, axis=0)

    def max_segment(self):
        return float(np.max(self.segment_lengths()))

    def tangent(self):
        '''d points / d theta.'''
        return _theta_derivative(self.points)

    def upsampled(self, factor=2):
        '''Fourier interpolation onto factor * n vertices.'''
        n = self.size
        spectrum = np.fft.fft(self.points, axis=1)
        padded = np.zeros((self.dim, factor * n), dtype=complex)
        half = n // 2
        padded[:, :half] = spectrum[:, :half]
        padded[:, -half:] = spectrum[:, -half:]
        if n % 2 == 0:
            # split the Nyquist coefficient
            padded[:, half] = 0.5 * spectrum[:, half]
            padded[:, -half] = 0.5 * spectrum[:, half]
        points = np.fft.ifft(padded, axis=1).real * factor
        return replace(self, points=points)

    def with_points(self, points, t):
        return replace(self, points=points, t=t)
## [END] CONTOUR ==============================================================


## ADVECTION ==================================================================
def velocity_function(provider):
    '''velocity(points, t) of a flow object or a plain callable.'''
    if hasattr(provider, 'velocity_at'):
        return provider.velocity_at
    if callable(provider):
        return provider
    raise ConfigurationError(f'{type(provider).__name__} provides no velocity')


def advect_contour(provider, C0, t, dt, max_growth=2.0, on_undefined='raise'):
    '''
    Move every vertex with the provider's velocity by RK4 over time t.
    Whenever a segment grows beyond max_growth times the initial maximal
    segment the contour is Fourier upsampled.

    Arguments:
    - provider: object with velocity_at(points, t) or a callable of the same signature
    - C0 (Contour): initial contour
    - t (float): advection time (>= 0)
    - dt (float): maximal step
    - on_undefined (str): 'raise' for AdvectionError at undefined velocities,
        'freeze' to hold those vertices in place for the step

    Returns:
    - (Contour, frozen) with the number of frozen vertex updates
    '''
    velocity = velocity_function(provider)
    limit = max_growth * max(C0.max_segment(), np.finfo(float).tiny)
    points, start = C0.points, C0.t
    frozen = 0
    if t <= 0:
        return C0, frozen

    def rate(x, time):
        nonlocal frozen
        v = np.asarray(velocity(x, time), dtype=float).reshape(x.shape)
        bad = ~np.all(np.isfinite(v), axis=0)
        if np.any(bad):
            if on_undefined != 'freeze':
                raise AdvectionError(f'velocity undefined at {np.count_nonzero(bad)} vertices at t = {time:.6g}')
            frozen += int(np.count_nonzero(bad))
            v[:, bad] = 0.0
        return v

    n = step_count(t, dt)
    h = t / n
    for i in range(n):
        time = start + i * h
        k1 = rate(points, time)
        k2 = rate(points + 0.5 * h * k1, time + 0.5 * h)
        k3 = rate(points + 0.5 * h * k2, time + 0.5 * h)
        k4 = rate(points + h * k3, time + h)
        points = points + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        contour = C0.with_points(points, time + h)
        while contour.max_segment() > limit and contour.size < 2 ** 16:
            contour = contour.upsampled()
        points = contour.points
    return C0.with_points(points, start + t), frozen
## [END] ADVECTION ============================================================


## LINE INTEGRALS =============================================================
def line_integral(values, tangent):
    '''(2 pi / n) sum_i values_i . tangent_i'''
    n = tangent.shape[-1]
    return float(2.0 * np.pi / n * np.sum(values * tangent))


def momentum_function(provider):
    if hasattr(provider, 'momentum_at'):
        return provider.momentum_at
    if hasattr(provider, 'momentum'):
        return provider.momentum
    if callable(provider):
        return provider
    raise ConfigurationError(f'{type(provider).__name__} provides no momentum field')


def circulation(provider, C, t=None):
    '''
    Loop integral of M . dq along a configuration-space contour.

    Arguments:
    - provider: momentum field with momentum_at(points[, t]), momentum(points) or a callable
    - C (Contour): closed contour
    - t (float): evaluation time for time-dependent providers

    Returns:
    - float
    '''
    field_at = momentum_function(provider)
    M = field_at(C.points) if t is None else field_at(C.points, t)
    M = np.asarray(M, dtype=float).reshape(C.points.shape)
    if not np.all(np.isfinite(M)):
        raise CirculationUndefinedError(
            f'momentum undefined at {np.count_nonzero(~np.all(np.isfinite(M), axis=0))} contour vertices')
    return line_integral(M, C.tangent())


def phase_circulation(C):
    '''Loop integral of p . dq along a phase-space contour with points (q, p).'''
    d = C.dim // 2
    if C.dim != 2 * d:
        raise ConfigurationError(f'phase-space contours need an even number of components, got {C.dim}')
    return line_integral(C.points[d:], C.tangent()[:d])


@dataclass(frozen=True)
class WindingMeasurement:
    '''Phase accumulated around a contour in units of 2 pi and its distance to the nearest integer.'''
    winding: int
    residue: float
    turns: float

    def to_dict(self):
        return {'winding': self.winding, 'residue': self.residue, 'turns': self.turns}


def measure_winding(psi, C, floor=1e-12):
    '''
    Accumulated phase of psi around C from the spectral angular velocity
    Im(psi* d psi / d theta) / |psi|^2.

    Arguments:
    - psi: WaveFunction (evaluated by Fourier interpolation) or callable psi(points)
    - C (Contour): closed contour
    - floor (float): |psi|^2 on C must exceed floor * max |psi|^2 on C
    '''
    values = psi.at(C.points) if hasattr(psi, 'at') else np.asarray(psi(C.points))
    values = np.asarray(values, dtype=complex)
    rho = np.abs(values) ** 2
    if not np.all(rho > floor * np.max(rho)) or np.max(rho) == 0:
        raise UnreliableWindingError('wave function vanishes on the contour')
    angular = np.imag(np.conj(values) * _theta_derivative(values)) / rho
    turns = float(np.mean(angular))
    winding = int(np.round(turns))
    return WindingMeasurement(winding=winding, residue=abs(turns - winding), turns=turns)


def winding_number(psi, C, floor=1e-12):
    '''Integer winding of psi around C; UnreliableWindingError when the residue reaches 0.05.'''
    measurement = measure_winding(psi, C, floor=floor)
    if measurement.residue >= WINDING_RESIDUE:
        raise UnreliableWindingError(
            f'accumulated phase {measurement.turns:.4f} turns is not close to an integer')
    return measurement.winding
## [END] LINE INTEGRALS =======================================================
