from .potentials import (Potential, Free, Harmonic, Quartic, DoubleWell, GaussianWell,
                         Tabulated, potential_from_spec, CATALOG as POTENTIALS)
from .hamiltonian import Hamiltonian, hamiltonian_from_spec
