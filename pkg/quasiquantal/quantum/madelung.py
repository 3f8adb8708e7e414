from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError
from ..grid import NumericsConfig, gradient, laplacian, quadrature, spectral_derivative
from ..projection import ConfigAction, ConfigDensity
from .wavefunction import from_madelung


'''
Madelung decomposition psi = sqrt(rho) exp(i S / hbar) and the identities
built on it: the quantum potential, the modified Hamilton-Jacobi residual,
the gradient-phase identity and the integrodifferential constraint.
'''


## QUANTUM POTENTIAL ==========================================================
def quantum_potential_values(rho, grid, hbar=1.0, mass=1.0, floor=1e-12):
    '''
    T_Q = (hbar^2 / 2m) lap(sqrt(rho)) / sqrt(rho), zero where rho < floor * max(rho).
    '''
    amplitude = np.sqrt(np.clip(rho, 0.0, None))
    mask = rho < floor * np.max(rho)
    curvature = laplacian(amplitude, grid)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(mask, 0.0, curvature / np.where(mask, 1.0, amplitude))
    return 0.5 * hbar ** 2 / mass * ratio


def quantum_potential(rho, hbar=1.0, mass=1.0, floor=1e-12):
    '''T_Q of a ConfigDensity; see quantum_potential_values.'''
    return quantum_potential_values(rho.values, rho.grid, hbar=hbar, mass=mass, floor=floor)
## [END] QUANTUM POTENTIAL ====================================================


## DECOMPOSITION ==============================================================
@dataclass(frozen=True, eq=False)
class MadelungPair:
    '''rho = |psi|^2 and S = hbar * unwrapped phase, undefined on `mask`.'''
    density: ConfigDensity
    action: ConfigAction
    mask: np.ndarray = field(repr=False)
    hbar: float = 1.0

    @property
    def winding(self):
        return self.action.winding


def _wrap(angle):
    return (angle + np.pi) % (2.0 * np.pi) - np.pi


def _unwrap_line(phase, mask):
    out = phase.copy()
    keep = ~mask
    if np.count_nonzero(keep) > 1:
        out[keep] = np.unwrap(phase[keep])
    return out


def _seam_winding(unwrapped, raw, mask, axis):
    '''Integer phase jump across the periodic seam, from rows without masked nodes.'''
    lines = np.moveaxis(unwrapped, axis, -1).reshape(-1, unwrapped.shape[axis])
    raw_lines = np.moveaxis(raw, axis, -1).reshape(-1, raw.shape[axis])
    clean = ~np.any(np.moveaxis(mask, axis, -1).reshape(-1, mask.shape[axis]), axis=1)
    if not np.any(clean):
        return 0
    total = (lines[clean, -1] - lines[clean, 0]
             + _wrap(raw_lines[clean, 0] - raw_lines[clean, -1]))
    return int(np.median(np.round(total / (2.0 * np.pi))))


def _unwrap(raw, mask):
    if raw.ndim == 1:
        return _unwrap_line(raw, mask)

    # rows first, then stitch rows through the column with the most valid nodes
    phase = np.stack([_unwrap_line(raw[i], mask[i]) for i in range(raw.shape[0])])
    column = int(np.argmax(np.count_nonzero(~mask, axis=0)))
    rows = ~mask[:, column]
    if np.count_nonzero(rows) > 1:
        stitched = np.unwrap(phase[rows, column])
        phase[rows] += (stitched - phase[rows, column])[:, None]
    return phase


def madelung_decompose(psi, config=None):
    '''
    Split psi into (rho, S). The phase is unwrapped along the axis order
    (sequentially in 1D; rows, then a column stitch in 2D) skipping masked
    nodes; integer windings across the periodic seam become the linear
    background b_k = 2 pi hbar w_k / L_k of the action.

    Arguments:
    - psi (WaveFunction): wave function
    - config (NumericsConfig): provides the density floor

    Returns:
    - MadelungPair
    '''
    config = config or NumericsConfig()
    grid = psi.grid
    rho = psi.density()
    mask = rho < config.density_floor * np.max(rho)
    raw = np.angle(psi.values)
    phase = _unwrap(raw, mask)

    winding = tuple(_seam_winding(phase, raw, mask, axis) for axis in range(grid.dim))
    linear = 2.0 * np.pi * psi.hbar * np.asarray(winding) / np.asarray(grid.extent)
    S = psi.hbar * phase
    periodic = S - np.einsum('i,i...->...', linear, grid.mesh)
    periodic = np.where(mask, 0.0, periodic)

    density = ConfigDensity(values=rho, grid=grid, t=psi.t)
    action = ConfigAction(periodic=periodic, grid=grid, t=psi.t, linear=linear,
                          winding=winding, mask=mask)
    return MadelungPair(density=density, action=action, mask=mask, hbar=psi.hbar)


def madelung_compose(pair, t=None):
    '''sqrt(rho) exp(i S / hbar); masked nodes keep their modulus and lose their phase.'''
    return from_madelung(pair.density, pair.action, hbar=pair.hbar,
                         t=pair.density.t if t is None else t)
## [END] DECOMPOSITION ========================================================


## IDENTITIES =================================================================
def phase_gradient(psi, floor=1e-12):
    '''grad S = hbar Im(psi* grad psi) / rho, zero where rho < floor * max(rho).'''
    rho = psi.density()
    mask = rho < floor * np.max(rho)
    current = np.imag(np.conj(psi.values) * psi.gradient())
    with np.errstate(divide='ignore', invalid='ignore'):
        out = psi.hbar * current / np.where(mask, 1.0, rho)
    return np.where(mask, 0.0, out)


def _comparison_mask(*waves, floor):
    mask = np.ones(waves[0].grid.shape, dtype=bool)
    for psi in waves:
        rho = psi.density()
        mask &= rho >= floor * np.max(rho)
    return mask


def _hj_terms(psi_a, psi_b, H, config):
    dt = psi_b.t - psi_a.t
    if not dt > 0:
        raise PreconditionError(f'wave functions must be ordered in time, got t = {psi_a.t} and {psi_b.t}')
    hbar = psi_a.hbar
    grid = psi_a.grid
    dS_dt = hbar * np.angle(psi_b.values * np.conj(psi_a.values)) / dt
    grad_S = 0.5 * (phase_gradient(psi_a, config.density_floor)
                    + phase_gradient(psi_b, config.density_floor))
    hamilton = H.kinetic(grad_S) + H.potential.on_grid(grid)
    T_Q = 0.5 * (quantum_potential_values(psi_a.density(), grid, hbar, H.mass, config.density_floor)
                 + quantum_potential_values(psi_b.density(), grid, hbar, H.mass, config.density_floor))
    return dS_dt, hamilton, T_Q


def modified_hj_residual(psi_a, psi_b, H, config=None, include_quantum_potential=True):
    '''
    max |dS/dt + H(q, grad S) - T_Q| at the midpoint of two snapshots of a
    Schrodinger run, over nodes with rho >= comparison_floor * max(rho).
    With include_quantum_potential=False the plain Hamilton-Jacobi residual
    is returned.
    '''
    config = config or NumericsConfig()
    dS_dt, hamilton, T_Q = _hj_terms(psi_a, psi_b, H, config)
    residual = dS_dt + hamilton
    if include_quantum_potential:
        residual = residual - T_Q
    mask = _comparison_mask(psi_a, psi_b, floor=config.comparison_floor)
    return float(np.max(np.abs(residual[mask])))


def integrodifferential_residual(psi_a, psi_b, H, config=None):
    '''
    |int d_k rho (dS/dt + |grad S|^2 / 2m + V)| per axis at the midpoint;
    the integrand equals d_k rho T_Q, whose integral vanishes.
    '''
    config = config or NumericsConfig()
    dS_dt, hamilton, _ = _hj_terms(psi_a, psi_b, H, config)
    rho = 0.5 * (psi_a.density() + psi_b.density())
    grid = psi_a.grid
    keep = rho >= config.density_floor * np.max(rho)
    integrand = np.where(keep, dS_dt + hamilton, 0.0)
    return np.array([abs(float(quadrature(spectral_derivative(rho, grid, axis=k) * integrand, grid)))
                     for k in range(grid.dim)])


def gradient_phase_residual(psi, config=None):
    '''
    max |(d_k S) psi - (hbar / i) [d_k psi - (d_k rho / 2 rho) psi]| over the
    comparison region, with d_k S from the phase gradient and d_k rho from
    the spectral derivative of |psi|^2.
    '''
    config = config or NumericsConfig()
    rho = psi.density()
    mask = rho >= config.comparison_floor * np.max(rho)
    safe = np.where(mask, rho, 1.0)
    dS = phase_gradient(psi, config.density_floor)
    grad_rho = gradient(rho, psi.grid)
    rhs = (psi.hbar / 1j) * (psi.gradient() - 0.5 * grad_rho / safe * psi.values)
    residual = np.abs(dS * psi.values - rhs)
    return float(np.max(residual[:, mask]))
## [END] IDENTITIES ===========================================================
