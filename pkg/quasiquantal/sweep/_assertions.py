import numbers

from ..errors import ScenarioError


def _is_range(entry):
    if isinstance(entry, tuple):
        return len(entry) == 3 and all(isinstance(x, numbers.Real) and not isinstance(x, bool)
                                       for x in entry)
    if isinstance(entry, dict):
        return (set(entry) == {'lo', 'hi', 'num'}
                and all(isinstance(entry[k], numbers.Real) and not isinstance(entry[k], bool)
                        for k in ('lo', 'hi'))
                and isinstance(entry['num'], int) and not isinstance(entry['num'], bool)
                and entry['num'] >= 1)
    return False


def _is_constant(entry):
    return isinstance(entry, (str, bool, numbers.Real))


def assert_sweep_matrix(matrix):
    '''
    Check a sweep matrix: every section key holds a dictionary whose entries
    are either
        - a constant (string, number or boolean)
        - a range: {"lo": a, "hi": b, "num": n} or a 3-tuple (a, b, n)
        - a list of constants and ranges
    '''
    if not isinstance(matrix, dict) or not matrix:
        raise ScenarioError('must be a non-empty object', key='matrix')
    for section, section_dict in matrix.items():
        if not isinstance(section_dict, dict):
            raise ScenarioError(f"'{section}' must contain a dictionary", key=f'matrix.{section}')
        for name, values in section_dict.items():
            key = f'matrix.{section}.{name}'
            if _is_constant(values) or _is_range(values):
                continue
            if not isinstance(values, list) or not values:
                raise ScenarioError('must be a constant, a range or a non-empty list', key=key)
            for i, entry in enumerate(values):
                if not (_is_constant(entry) or _is_range(entry)):
                    raise ScenarioError('list entries must be constants or ranges', key=f'{key}[{i}]')
    return matrix
