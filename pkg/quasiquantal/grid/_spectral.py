import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError


def _field_axis(field, grid, axis):
    if not 0 <= axis < grid.dim:
        raise ConfigurationError(f'axis {axis} out of range for a {grid.dim}D grid')
    return field.ndim - grid.dim + axis


def _along(values, ndim, axis):
    shape = [1] * ndim
    shape[axis] = -1
    return values.reshape(shape)


def spectral_derivative(field, grid, axis=0, order=1):
    '''
    Fourier-collocation derivative of grid samples.

    Arguments:
    - field (ndarray): real or complex samples; leading axes beyond the grid
        dimensions are treated as a batch
    - grid (Grid): sampling grid
    - axis (int): grid axis to differentiate along
    - order (int): 1 or 2

    Returns:
    - ndarray of the same shape and kind (real in, real out)
    '''
    if order not in (1, 2):
        raise ConfigurationError(f'derivative order must be 1 or 2, got {order}')
    field = grid.check_field(field)
    ax = _field_axis(field, grid, axis)

    factor = (1j * grid.wavenumbers[axis]) ** order
    if order % 2 == 1:
        # odd derivatives of the unpaired Nyquist mode are not real
        factor = factor.copy()
        factor[grid.points[axis] // 2] = 0.0

    spectrum = np.fft.fft(field, axis=ax) * _along(factor, field.ndim, ax)
    result = np.fft.ifft(spectrum, axis=ax)
    return result.real if np.isrealobj(field) else result


def gradient(field, grid):
    '''Stack of first derivatives along every grid axis, shape (dim, ...).'''
    return np.stack([spectral_derivative(field, grid, axis=k, order=1)
                     for k in range(grid.dim)])


def laplacian(field, grid):
    return sum(spectral_derivative(field, grid, axis=k, order=2)
               for k in range(grid.dim))


def quadrature(field, grid):
    '''
    Periodic rectangle rule: cell volume times the sum of the samples over
    the grid axes. Leading batch axes are kept.
    '''
    field = grid.check_field(field)
    axes = tuple(range(field.ndim - grid.dim, field.ndim))
    return grid.cell_volume * np.sum(field, axis=axes)


def spectral_shift(field, grid, axis, delta):
    '''Samples of q -> f(q - delta e_axis) by a Fourier phase ramp.'''
    field = grid.check_field(field)
    ax = _field_axis(field, grid, axis)
    ramp = np.exp(-1j * grid.wavenumbers[axis] * delta)
    result = np.fft.ifft(np.fft.fft(field, axis=ax) * _along(ramp, field.ndim, ax), axis=ax)
    return result.real if np.isrealobj(field) else result


def fourier_interpolate(field, grid, points):
    '''
    Evaluate the trigonometric interpolant of grid samples at arbitrary
    points.

    Arguments:
    - field (ndarray): samples, optionally with leading batch axes
    - grid (Grid): sampling grid
    - points (ndarray): physical coordinates, shape (dim, ...)

    Returns:
    - ndarray of shape batch + points.shape[1:]
    '''
    field = grid.check_field(field)
    points = np.asarray(points, dtype=float)
    if points.shape[0] != grid.dim:
        raise ConfigurationError(f'points must have {grid.dim} leading components')
    batch = field.shape[:field.ndim - grid.dim]
    out_shape = points.shape[1:]
    x = points.reshape(grid.dim, -1)

    grid_axes = tuple(range(len(batch), field.ndim))
    coeff = np.fft.fftn(field, axes=grid_axes) / np.prod(grid.points)
    coeff = coeff.reshape((-1,) + grid.shape)

    factors = []
    for a in range(grid.dim):
        nyquist = grid.points[a] // 2
        phase = (x[a] - grid.lower[a])[:, None] * grid.wavenumbers[a][None, :]
        E = np.exp(1j * phase)
        # split Nyquist coefficient between +k and -k
        E[:, nyquist] = np.cos(phase[:, nyquist])
        factors.append(E)

    if grid.dim == 1:
        values = coeff @ factors[0].T
    else:
        partial = np.matmul(factors[0], coeff)
        values = np.sum(partial * factors[1][None, :, :], axis=-1)

    values = values.reshape(batch + out_shape)
    return values.real if np.isrealobj(field) else values


def spline_sample(field, grid, points, periodic=True):
    '''
    Cubic B-spline samples of real grid data at arbitrary points.

    Arguments:
    - periodic (bool): wrap around the domain when True; otherwise the data
        is extended by zero outside the grid
    '''
    field = grid.check_field(field)
    coordinates = grid.index_coordinates(points)
    if periodic:
        return ndimage.map_coordinates(field, coordinates, order=3, mode='grid-wrap')
    return ndimage.map_coordinates(field, coordinates, order=3, mode='constant', cval=0.0)
