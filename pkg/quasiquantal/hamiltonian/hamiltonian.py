from dataclasses import dataclass, field

import numpy as np

from ..errors import ScenarioError
from .potentials import Potential, Free, potential_from_spec


@dataclass(frozen=True)
class Hamiltonian:
    '''
    Separable Hamiltonian H(q, p) = |p|^2 / 2m + V(q).

    q and p are component-first arrays of shape (dim, ...); every method is
    vectorized over the trailing axes.
    '''
    mass: float = 1.0
    potential: Potential = field(default_factory=Free)

    def __post_init__(self):
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise ScenarioError(f'mass must be positive, got {self.mass}', key='hamiltonian.mass')

    def velocity_map(self, p):
        '''dH/dp = p / m'''
        return np.asarray(p, dtype=float) / self.mass

    def force(self, q):
        '''-dH/dq = -grad V(q)'''
        return -self.potential.gradient(q)

    def kinetic(self, p):
        return 0.5 * np.sum(np.asarray(p, dtype=float) ** 2, axis=0) / self.mass

    def energy(self, q, p):
        return self.kinetic(p) + self.potential.value(q)

    def lagrangian(self, q, p):
        '''p . dH/dp - H, which is |p|^2/2m - V(q) for the separable form.'''
        return self.kinetic(p) - self.potential.value(q)

    def to_dict(self):
        return {'mass': self.mass, **self.potential.to_dict()}


def hamiltonian_from_spec(spec, grid=None, key='hamiltonian'):
    '''
    Scenario entry -> Hamiltonian, e.g. {"type": "harmonic", "omega": 1.0, "mass": 1.0}
    '''
    mass = spec.get('mass', 1.0)
    if not isinstance(mass, (int, float)) or isinstance(mass, bool) or not mass > 0:
        raise ScenarioError(f'must be a positive number, got {mass!r}', key=f'{key}.mass')
    potential = potential_from_spec(spec, grid=grid, mass=float(mass), key=key)
    return Hamiltonian(mass=float(mass), potential=potential)
