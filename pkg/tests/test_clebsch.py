import pytest

from quasiquantal.clebsch import (ClassSolution, enumerate_class_solutions, regular_solution,
                                  variable_count, parity_check, class_table, variable_count_sequence,
                                  is_regular_sequence)
from quasiquantal.errors import ConfigurationError


def test_solutions_for_one_particle():
    assert enumerate_class_solutions(1) == [ClassSolution(N=1, k=0, m=1)]
    assert enumerate_class_solutions(1, include_maximal=True) == [ClassSolution(N=1, k=0, m=1),
                                                                  ClassSolution(N=1, k=2, m=0)]


@pytest.mark.parametrize('N', range(1, 8))
def test_every_solution_satisfies_the_class_relation(N):
    solutions = enumerate_class_solutions(N, include_maximal=True)
    assert all(s.n - s.k == 2 * s.m + 1 for s in solutions)
    assert [s.k for s in solutions] == sorted(s.k for s in solutions)
    assert solutions[-1].maximal_redundancy
    assert regular_solution(N) in solutions


def test_regular_solution():
    solution = regular_solution(3)
    assert solution.as_tuple() == (3, 2, 3)
    assert solution.regular
    assert solution.L == 7
    assert variable_count(solution) == 8


def test_invalid_solutions_rejected():
    with pytest.raises(ConfigurationError):
        ClassSolution(N=2, k=2, m=2)
    with pytest.raises(ConfigurationError):
        ClassSolution(N=1, k=4, m=-1)
    with pytest.raises(ConfigurationError):
        enumerate_class_solutions(0)
    with pytest.raises(ConfigurationError):
        regular_solution(True)


def test_parity_check():
    representation, reason = parity_check(1)
    assert representation == 'odd'
    assert 'N = 1' in reason


def test_class_table():
    table = class_table(1, 3)
    assert len(table) == 10
    assert list(table.columns) == ['N', 'n', 'k', 'm', 'L', 'variable_count', 'regular',
                                   'maximal_redundancy']
    assert table['regular'].sum() == 3
    assert (table['n'] - table['k'] == table['L']).all()
    assert len(class_table(1, 3, include_maximal=False)) == 7
    with pytest.raises(ConfigurationError):
        class_table(3, 1)


def test_variable_count_sequences():
    assert variable_count_sequence('regular', 5) == [4, 6, 8, 10, 12]
    assert variable_count_sequence('maximal', 3) == [2, 2, 2]
    assert variable_count_sequence('maximal_k', 3) == [4, 4, 4]
    assert variable_count_sequence('minimal_k', 4) == [4, 6, 10, 12]
    assert variable_count_sequence([0, 1, 2], 3) == [4, 6, 8]


def test_variable_count_sequence_validation():
    with pytest.raises(ConfigurationError, match='unknown rule'):
        variable_count_sequence('random', 3)
    with pytest.raises(ConfigurationError, match='expected 3 values'):
        variable_count_sequence([0, 1], 3)
    with pytest.raises(ConfigurationError, match='admits no solution'):
        variable_count_sequence([1], 1)


def test_regularity_of_sequences():
    assert is_regular_sequence(variable_count_sequence('regular', 6), increment=2)
    assert not is_regular_sequence(variable_count_sequence('minimal_k', 4))
    assert not is_regular_sequence([4, 6, 8], increment=3)
    assert is_regular_sequence([5])
