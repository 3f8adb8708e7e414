from .plot_density_1D import plot_density_1D
