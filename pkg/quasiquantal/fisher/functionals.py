import warnings
from dataclasses import dataclass, asdict

import numpy as np

from ..errors import DivergenceUndefinedError, IdentityViolationError, UnreliableFunctionalWarning
from ..grid import NumericsConfig, gradient, laplacian, quadrature, spectral_shift


'''
Density functionals on configuration-space densities: Fisher information,
entropy, the Kullback-Leibler entropy and its shift expansion, and the L0
term with the conditions that single it out.

Every functional integrates over nodes with rho >= floor * max(rho) only
and renormalizes the retained mass to one.
'''

DEFAULT_FLOOR = NumericsConfig.density_floor


## MASKING ====================================================================
def _retained(values, grid, floor):
    '''(keep mask, retained fraction, renormalized density).'''
    keep = values >= floor * np.max(values)
    total = quadrature(values, grid)
    kept = quadrature(np.where(keep, values, 0.0), grid)
    fraction = float(kept / total) if total > 0 else 0.0
    if fraction < 0.5:
        warnings.warn(f'only {fraction:.3f} of the probability mass lies above the density floor',
                      UnreliableFunctionalWarning, stacklevel=3)
    return keep, fraction, np.where(keep, values / kept, 0.0)


def retained_fraction(rho, floor=DEFAULT_FLOOR):
    return _retained(rho.values, rho.grid, floor)[1]
## [END] MASKING ==============================================================


## FUNCTIONALS ================================================================
def fisher_info(rho, floor=DEFAULT_FLOOR):
    '''
    I[rho] = int rho sum_k (d_k rho / rho)^2

    Arguments:
    - rho (ConfigDensity): density, normalized up to the masked mass
    - floor (float): relative density below which nodes are dropped

    Returns:
    - float, non-negative
    '''
    keep, _, values = _retained(rho.values, rho.grid, floor)
    grad = gradient(values, rho.grid)
    with np.errstate(divide='ignore', invalid='ignore'):
        integrand = np.where(keep, np.sum(grad ** 2, axis=0) / np.where(keep, values, 1.0), 0.0)
    return float(quadrature(integrand, rho.grid))


def entropy(rho, floor=DEFAULT_FLOOR):
    '''S[rho] = -int rho ln rho'''
    keep, _, values = _retained(rho.values, rho.grid, floor)
    integrand = np.where(keep, values * np.log(np.where(keep, values, 1.0)), 0.0)
    return float(-quadrature(integrand, rho.grid))


def _kl(values, chi, grid, floor):
    keep, _, values = _retained(values, grid, floor)
    chi = chi / quadrature(chi, grid)
    if np.any(keep & ~(chi > 0)):
        raise DivergenceUndefinedError(
            f'reference density vanishes at {np.count_nonzero(keep & ~(chi > 0))} nodes where rho does not')
    safe = np.where(keep, chi, 1.0)
    ratio = np.where(keep, (values - chi) / safe, 0.0)
    return float(-quadrature(np.where(keep, values * np.log1p(ratio), 0.0), grid))


def kl_divergence(rho, chi, floor=DEFAULT_FLOOR):
    '''
    G[rho, chi] = -int rho ln(rho / chi); non-positive for normalized
    densities. Raises DivergenceUndefinedError when chi <= 0 somewhere rho
    is retained.
    '''
    return _kl(rho.values, chi.values, rho.grid, floor)


def kl_shift(rho, axis=0, delta=0.0, floor=DEFAULT_FLOOR):
    '''G[rho, rho(. - delta e_axis)] with the shifted density built by a spectral phase ramp.'''
    if delta == 0:
        return 0.0
    shifted = spectral_shift(rho.values, rho.grid, axis, delta)
    return _kl(rho.values, shifted, rho.grid, floor)
## [END] FUNCTIONALS ==========================================================


## L0 TERM ====================================================================
@dataclass(frozen=True, eq=False)
class L0Forms:
    '''
    L0 sampled in both forms, zero on the mask.

    - rho_form: B0 [-|grad rho|^2 / 2 rho^2 + lap(rho) / rho]
    - sqrt_form: 2 B0 lap(sqrt rho) / sqrt rho, i.e. (hbar^2 / 2m) lap(sqrt rho) / sqrt rho for B0 = hbar^2 / 4m
    '''
    rho_form: np.ndarray
    sqrt_form: np.ndarray
    keep: np.ndarray
    b0: float


def default_b0(hbar=1.0, mass=1.0):
    return hbar ** 2 / (4.0 * mass)


def l0_term(rho, b0=None, hbar=1.0, mass=1.0, floor=DEFAULT_FLOOR, comparison_floor=1e-4,
            tolerance=1e-8):
    '''
    Both forms of L0. The forms must agree pointwise where
    rho >= comparison_floor * max(rho); IdentityViolationError otherwise.
    '''
    b0 = default_b0(hbar, mass) if b0 is None else b0
    grid = rho.grid
    values = rho.values
    keep = values >= floor * np.max(values)
    safe = np.where(keep, values, 1.0)

    grad = gradient(values, grid)
    rho_form = b0 * (-0.5 * np.sum(grad ** 2, axis=0) / safe ** 2 + laplacian(values, grid) / safe)
    amplitude = np.sqrt(np.clip(values, 0.0, None))
    sqrt_form = 2.0 * b0 * laplacian(amplitude, grid) / np.sqrt(safe)
    rho_form = np.where(keep, rho_form, 0.0)
    sqrt_form = np.where(keep, sqrt_form, 0.0)

    compare = values >= comparison_floor * np.max(values)
    if np.any(compare):
        gap = float(np.max(np.abs(rho_form - sqrt_form)[compare]))
        scale = max(1.0, float(np.max(np.abs(rho_form[compare]))))
        if gap > tolerance * scale:
            raise IdentityViolationError(f'the two forms of L0 differ by {gap:.3e}')
    return L0Forms(rho_form=rho_form, sqrt_form=sqrt_form, keep=keep, b0=b0)


def null_lagrangian_integral(rho, b0=None, hbar=1.0, mass=1.0):
    '''int rho B0 lap(rho) / rho, which vanishes on the periodic domain.'''
    b0 = default_b0(hbar, mass) if b0 is None else b0
    values = rho.values
    return float(b0 * quadrature(np.where(values > 0, laplacian(values, rho.grid), 0.0), rho.grid))


@dataclass(frozen=True)
class DensityFunctionalReport:
    '''
    Functionals of one density and the residuals of the L0 conditions.

    - l0_identity_residual: |int rho L0 + (B0 / 2) I|
    - constraint_residual: |int d_k rho L0| per axis
    - kl_shift_ratio: G_k / delta^2 at delta = spacing / 8, close to -I_k / 2
    '''
    fisher: float
    entropy: float
    l0_identity_residual: float
    constraint_residual: tuple
    retained_fraction: float
    l0_integral: float
    kl_shift_ratio: tuple
    b0: float

    def to_dict(self):
        return asdict(self)


def verify_l0_conditions(rho, b0=None, hbar=1.0, mass=1.0, config=None):
    config = config or NumericsConfig(hbar=hbar)
    floor = config.density_floor
    grid = rho.grid
    b0 = default_b0(hbar, mass) if b0 is None else b0

    forms = l0_term(rho, b0=b0, floor=floor, comparison_floor=config.comparison_floor)
    L0 = forms.rho_form
    keep, fraction, values = _retained(rho.values, grid, floor)
    L0 = np.where(keep, L0, 0.0)
    I = fisher_info(rho, floor=floor)

    l0_integral = float(quadrature(values * L0, grid))
    grad = gradient(values, grid)
    constraint = tuple(abs(float(quadrature(grad[k] * L0, grid))) for k in range(grid.dim))
    ratios = tuple(kl_shift(rho, axis=k, delta=grid.spacing[k] / 8.0, floor=floor)
                   / (grid.spacing[k] / 8.0) ** 2 for k in range(grid.dim))

    return DensityFunctionalReport(fisher=I, entropy=entropy(rho, floor=floor),
                                   l0_identity_residual=abs(l0_integral + 0.5 * b0 * I),
                                   constraint_residual=constraint, retained_fraction=fraction,
                                   l0_integral=l0_integral, kl_shift_ratio=ratios, b0=b0)
## [END] L0 TERM ==============================================================
