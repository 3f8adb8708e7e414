import os

import numpy as np
import matplotlib
matplotlib.use("Agg")   # must be before importing pyplot
import matplotlib.pyplot as plt

from ..errors import ConfigurationError


def plot_density_1D(snapshots, path=None, title=None):
    '''
    Density profiles of a 1D run, one line per output time.

    Arguments:
    - snapshots (DataFrame): long table with columns t, q1 and rho, as
        written to the snapshots CSV of a run
    - path (str): output PNG; defaults to `density.png` in the `figures` directory
    - title (str): axes title

    Returns:
    - path of the written figure
    '''
    missing = {'t', 'q1', 'rho'} - set(snapshots.columns)
    if missing:
        raise ConfigurationError(f'snapshots are missing columns {sorted(missing)}')
    if 'q2' in snapshots.columns:
        raise ConfigurationError('plot_density_1D needs a 1D run')

    ## BASIC PLOT FORMATTING --------------------------------------------------
    fig, ax = plt.subplots(dpi=135)
    ax.set_title(title or 'density')
    ax.set_xlabel('q'); ax.set_ylabel(r'$\rho$')
    ## [END] BASIC PLOT FORMATTING --------------------------------------------

    times = np.unique(snapshots['t'].to_numpy())
    colors = plt.cm.viridis(np.linspace(0.0, 1.0, max(len(times), 1)))
    for color, time in zip(colors, times):
        frame = snapshots[snapshots['t'] == time].sort_values('q1')
        ax.plot(frame['q1'], frame['rho'], color=color, lw=1, label=f't = {time:.3g}')

    ax.legend(loc='upper right', ncol=2, fontsize=6, fancybox=False)

    if path is None:
        path = os.path.join(os.getenv('figures', '.'), 'density.png')
    fig.savefig(path)
    plt.close(fig)
    return path
