from dataclasses import dataclass, asdict

import numpy as np
import pandas as pd

from ..errors import ConfigurationError


'''
Integer arithmetic of the odd Clebsch representation for N particles in
three dimensions: n = 3N coordinates, k functional relations between the
momentum components and m Clebsch pairs, tied together by n - k = 2m + 1.
'''

SEQUENCE_RULES = ('regular', 'maximal', 'minimal_k', 'maximal_k')


def _check_particles(N):
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise ConfigurationError(f'particle count must be an integer >= 1, got {N!r}')
    return int(N)


## SOLUTIONS =================================================================
@dataclass(frozen=True, order=True)
class ClassSolution:
    '''
    One admissible (k, m) pair for N particles.

    Arguments:
    - N (int): particle count
    - k (int): number of functional relations between the M_i
    - m (int): number of Clebsch pairs (P, Q)
    '''
    N: int
    k: int
    m: int

    def __post_init__(self):
        if self.n - self.k != 2 * self.m + 1:
            raise ConfigurationError(f'n - k = 2m + 1 violated by (N, k, m) = {self.as_tuple()}')
        if not (0 <= self.k <= self.n - 1 and self.m >= 0):
            raise ConfigurationError(f'(k, m) = ({self.k}, {self.m}) out of range for n = {self.n}')

    @property
    def n(self):
        return 3 * self.N

    @property
    def L(self):
        '''Pfaff class of the momentum field.'''
        return 2 * self.m + 1

    @property
    def regular(self):
        return (self.k, self.m) == (self.N - 1, self.N)

    @property
    def maximal_redundancy(self):
        return self.m == 0

    def as_tuple(self):
        return (self.N, self.k, self.m)

    def to_dict(self):
        return {**asdict(self), 'n': self.n, 'L': self.L, 'variable_count': variable_count(self),
                'regular': self.regular, 'maximal_redundancy': self.maximal_redundancy}


def enumerate_class_solutions(N, include_maximal=False):
    '''
    Every (k, m) with n - k = 2m + 1 and 0 <= k <= n - 1, sorted by k. The
    maximal redundancy solution m = 0 is left out unless requested.
    '''
    N = _check_particles(N)
    n = 3 * N
    lowest_m = 0 if include_maximal else 1
    # n - k must be odd
    return [ClassSolution(N=N, k=k, m=(n - k - 1) // 2)
            for k in range((n + 1) % 2, n, 2) if (n - k - 1) // 2 >= lowest_m]


def regular_solution(N):
    '''The linear solution k = N - 1, m = N.'''
    N = _check_particles(N)
    solution = ClassSolution(N=N, k=N - 1, m=N)
    assert solution in enumerate_class_solutions(N), f'regular solution missing for N = {N}'
    return solution


def variable_count(solution):
    '''2m + 2 dynamical fields: S, m Clebsch pairs and rho.'''
    return 2 * solution.m + 2


def parity_check(N):
    '''
    The representation that can hold for every particle count, with the
    reason. The even representation yields an even number of fields and so
    cannot describe N = 1, which needs three.
    '''
    N = _check_particles(N)
    reason = ('even representation needs an even number of fields and fails at N = 1 '
              '(three fields); the odd representation L = 2m + 1 holds for every N')
    return 'odd', reason
## [END] SOLUTIONS ============================================================


## TABLES AND SEQUENCES =======================================================
def class_table(n_min=1, n_max=5, include_maximal=True):
    '''All solutions for N in [n_min, n_max] as a DataFrame.'''
    n_min, n_max = _check_particles(n_min), _check_particles(n_max)
    if n_max < n_min:
        raise ConfigurationError(f'n_max ({n_max}) must not be below n_min ({n_min})')
    rows = [solution.to_dict()
            for N in range(n_min, n_max + 1)
            for solution in enumerate_class_solutions(N, include_maximal=include_maximal)]
    columns = ['N', 'n', 'k', 'm', 'L', 'variable_count', 'regular', 'maximal_redundancy']
    return pd.DataFrame(rows)[columns]


def _pick(N, rule):
    solutions = enumerate_class_solutions(N, include_maximal=(rule == 'maximal'))
    if rule == 'regular':
        return regular_solution(N)
    if rule == 'maximal':
        return solutions[-1]
    if rule == 'minimal_k':
        return solutions[0]
    if rule == 'maximal_k':
        return solutions[-1]
    raise ConfigurationError(f"unknown rule '{rule}', use one of {SEQUENCE_RULES} or a list of k")


def variable_count_sequence(choice, n_max):
    '''
    2m + 2 for N = 1..n_max under a rule choosing one solution per N.

    Arguments:
    - choice (str or list): 'regular' | 'maximal' (m = 0) | 'minimal_k' |
        'maximal_k' (smallest m >= 1), or an explicit list of k per N
    - n_max (int): largest particle count

    Returns:
    - list of int
    '''
    n_max = _check_particles(n_max)
    if isinstance(choice, str):
        return [variable_count(_pick(N, choice)) for N in range(1, n_max + 1)]

    choice = list(choice)
    if len(choice) != n_max:
        raise ConfigurationError(f'expected {n_max} values of k, got {len(choice)}')
    counts = []
    for N, k in enumerate(choice, start=1):
        n = 3 * N
        if (n - k - 1) % 2 or not 0 <= k <= n - 1:
            raise ConfigurationError(f'k = {k} admits no solution for N = {N}')
        counts.append(variable_count(ClassSolution(N=N, k=k, m=(n - k - 1) // 2)))
    return counts


def is_regular_sequence(sequence, increment=None):
    '''Constant increment between neighbours (equal to `increment` when given).'''
    steps = np.diff(np.asarray(sequence, dtype=int))
    if steps.size == 0:
        return True
    if not np.all(steps == steps[0]):
        return False
    return increment is None or int(steps[0]) == increment
## [END] TABLES AND SEQUENCES =================================================
