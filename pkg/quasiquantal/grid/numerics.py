from dataclasses import dataclass, replace, asdict

import numpy as np

from ..errors import ConfigurationError


INTEGRATORS = ('rk4', 'verlet', 'yoshida4')
QUADRATURE_RULES = ('rectangle',)


@dataclass(frozen=True)
class NumericsConfig:
    '''
    Numerical parameters shared by every solver.

    Arguments:
    - hbar (float): action unit
    - dt (float): maximal time step
    - t_end (float): default end time of a run
    - density_floor (float): mask threshold, relative to max(rho)
    - caustic_threshold (float): |det dq(t)/dq0| below which a caustic is declared
    - quadrature (str): quadrature rule tag; only the periodic rectangle rule exists
    - integrator (str): characteristic integrator, one of rk4 | verlet | yoshida4
    - comparison_floor (float): relative density below which pointwise
        identities and cross-pipeline comparisons are not evaluated
    - oversample (int or None): seeds per grid spacing for characteristics;
        None picks 4 in 1D and 2 in 2D
    - blowup_factor (float): bound on max|T_Q| relative to its initial scale
    - support_floor (float): relative density marking the support of a
        classical-wave run
    '''
    hbar: float = 1.0
    dt: float = 1e-3
    t_end: float = 1.0
    density_floor: float = 1e-12
    caustic_threshold: float = 1e-3
    quadrature: str = 'rectangle'
    integrator: str = 'rk4'
    comparison_floor: float = 1e-4
    oversample: int = None
    blowup_factor: float = 1e6
    support_floor: float = 1e-4

    def __post_init__(self):
        positive = {'hbar': self.hbar, 'dt': self.dt,
                    'caustic_threshold': self.caustic_threshold,
                    'blowup_factor': self.blowup_factor}
        for name, value in positive.items():
            if not (np.isfinite(value) and value > 0):
                raise ConfigurationError(f'{name} must be positive, got {value}')
        if not (np.isfinite(self.t_end) and self.t_end >= 0):
            raise ConfigurationError(f't_end must be non-negative, got {self.t_end}')
        for name in ('density_floor', 'comparison_floor', 'support_floor'):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ConfigurationError(f'{name} must lie in (0, 1), got {value}')
        if self.quadrature not in QUADRATURE_RULES:
            raise ConfigurationError(
                f"quadrature must be one of {QUADRATURE_RULES}, got '{self.quadrature}'")
        if self.integrator not in INTEGRATORS:
            raise ConfigurationError(
                f"integrator must be one of {INTEGRATORS}, got '{self.integrator}'")
        if self.oversample is not None and int(self.oversample) < 1:
            raise ConfigurationError(f'oversample must be >= 1, got {self.oversample}')

    def seeds_per_spacing(self, dim):
        if self.oversample is not None:
            return int(self.oversample)
        return 4 if dim == 1 else 2

    def updated(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)
