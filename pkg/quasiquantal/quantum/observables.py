from dataclasses import dataclass, asdict, field

import numpy as np
import pandas as pd

from ..errors import PreconditionError
from ..grid import NumericsConfig, laplacian, quadrature
from ..phase_ensemble import step_count
from .madelung import phase_gradient
from .propagator import SplitStepPropagator


## EXPECTATION VALUES =========================================================
@dataclass(frozen=True)
class QTExpectations:
    '''
    Expectation values of a wave function; vectors have one entry per axis.

    - p: spectral momentum hbar int Im(psi* grad psi)
    - p_from_phase: int rho grad S, which has to agree with p
    - force: -int rho grad V
    '''
    t: float
    q: tuple
    p: tuple
    p_from_phase: tuple
    force: tuple
    energy: float
    norm: float

    def to_dict(self):
        return asdict(self)

    def to_row(self):
        row = {'t': self.t, 'energy': self.energy, 'norm': self.norm}
        for name in ('q', 'p', 'p_from_phase', 'force'):
            for k, value in enumerate(getattr(self, name)):
                row[f'{name}{k + 1}'] = value
        return row


def _tuple(values):
    return tuple(float(v) for v in np.atleast_1d(values))


def qt_expectations(psi, H, config=None):
    config = config or NumericsConfig(hbar=psi.hbar)
    grid = psi.grid
    rho = psi.density()
    q = quadrature(rho * grid.mesh, grid)
    p = psi.hbar * quadrature(np.imag(np.conj(psi.values) * psi.gradient()), grid)
    p_phase = quadrature(rho * phase_gradient(psi, config.density_floor), grid)
    force = -quadrature(rho * H.potential.gradient(grid.mesh), grid)
    kinetic = np.real(quadrature(np.conj(psi.values) * laplacian(psi.values, grid), grid))
    energy = -0.5 * psi.hbar ** 2 / H.mass * kinetic + quadrature(rho * H.potential.on_grid(grid), grid)
    return QTExpectations(t=psi.t, q=_tuple(q), p=_tuple(p), p_from_phase=_tuple(p_phase),
                          force=_tuple(force), energy=float(energy), norm=psi.norm())


def width(psi, axis=0):
    '''Standard deviation of |psi|^2 along one axis.'''
    grid = psi.grid
    rho = psi.density() / psi.norm()
    q = grid.mesh[axis]
    mean = quadrature(rho * q, grid)
    return float(np.sqrt(quadrature(rho * (q - mean) ** 2, grid)))
## [END] EXPECTATION VALUES ===================================================


## RUN DIAGNOSTICS ============================================================
def expectation_series(H, psi0, t, config=None, every=1):
    '''
    Expectation values after every `every` steps of a Schrodinger run,
    starting with psi0.

    Returns:
    - (DataFrame of QTExpectations rows, final WaveFunction)
    '''
    config = config or NumericsConfig(hbar=psi0.hbar)
    propagator = SplitStepPropagator(H, psi0.grid, config.dt, hbar=psi0.hbar, config=config)
    rows = [qt_expectations(psi0, H, config).to_row()]
    psi = psi0
    for i, psi in enumerate(propagator.iterate(psi0, t), start=1):
        if i % every == 0:
            rows.append(qt_expectations(psi, H, config).to_row())
    return pd.DataFrame(rows), psi


@dataclass(frozen=True)
class EhrenfestResiduals:
    '''max |d<q>/dt - <p>/m| and max |d<p>/dt - <F>| by centered differences.'''
    position: float
    momentum: float
    series: pd.DataFrame = field(repr=False, compare=False)

    def to_dict(self):
        return {'position': self.position, 'momentum': self.momentum}


def ehrenfest_residuals(H, psi0, t, config=None):
    config = config or NumericsConfig(hbar=psi0.hbar)
    # centered differences need an interior sample
    if t == 0 or step_count(t, config.dt) < 2:
        raise PreconditionError(f'Ehrenfest residuals need at least two steps, got t={t} with dt={config.dt}')
    series, _ = expectation_series(H, psi0, t, config)
    times = series['t'].to_numpy()
    position = momentum = 0.0
    for k in range(psi0.grid.dim):
        q = series[f'q{k + 1}'].to_numpy()
        p = series[f'p{k + 1}'].to_numpy()
        force = series[f'force{k + 1}'].to_numpy()
        span = times[2:] - times[:-2]
        position = max(position, float(np.max(np.abs((q[2:] - q[:-2]) / span - p[1:-1] / H.mass))))
        momentum = max(momentum, float(np.max(np.abs((p[2:] - p[:-2]) / span - force[1:-1]))))
    return EhrenfestResiduals(position=position, momentum=momentum, series=series)


def qt_energy_drift(series):
    '''Relative change of <H> between the first and last row of a series.'''
    energy = series['energy'].to_numpy()
    return float(abs(energy[-1] - energy[0]) / max(abs(energy[0]), np.finfo(float).tiny))


def qt_norm_drift(series):
    return float(np.max(np.abs(series['norm'].to_numpy() - 1.0)))
## [END] RUN DIAGNOSTICS ======================================================
