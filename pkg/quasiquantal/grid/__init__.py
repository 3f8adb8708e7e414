from .grids import Grid, PhaseGrid
from .numerics import NumericsConfig, INTEGRATORS
from ._spectral import (spectral_derivative, gradient, laplacian, quadrature,
                        spectral_shift, fourier_interpolate, spline_sample)
