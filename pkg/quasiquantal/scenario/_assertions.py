import numbers

from ..errors import ScenarioError


'''
Schema checks for scenario files. Each helper raises ScenarioError with the
dotted key path of the offending entry and returns the checked value.
'''


def assert_section(value, key):
    if not isinstance(value, dict):
        raise ScenarioError(f'must be an object, got {type(value).__name__}', key=key)
    return value


def assert_known_keys(section, allowed, key):
    for name in section:
        if name not in allowed:
            raise ScenarioError(f"unknown entry '{name}'", key=f'{key}.{name}' if key else name,
                                valid=sorted(allowed))
    return section


def assert_number(value, key, positive=False, non_negative=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ScenarioError(f'must be a number, got {value!r}', key=key)
    if integer and int(value) != value:
        raise ScenarioError(f'must be an integer, got {value!r}', key=key)
    if positive and not value > 0:
        raise ScenarioError(f'must be positive, got {value!r}', key=key)
    if non_negative and value < 0:
        raise ScenarioError(f'must be non-negative, got {value!r}', key=key)
    return int(value) if integer else float(value)


def assert_choice(value, valid, key):
    if value not in valid:
        raise ScenarioError(f"unknown entry '{value}'", key=key, valid=valid)
    return value


def assert_per_axis(value, dim, key, **number_rules):
    '''A number, or a list with one number per axis.'''
    values = value if isinstance(value, (list, tuple)) else [value] * dim
    if len(values) != dim:
        raise ScenarioError(f'expected {dim} entries, got {len(values)}', key=key)
    return tuple(assert_number(v, f'{key}[{i}]', **number_rules) for i, v in enumerate(values))


def assert_name_list(values, valid, key):
    if not isinstance(values, (list, tuple)):
        raise ScenarioError(f'must be a list, got {type(values).__name__}', key=key)
    for i, value in enumerate(values):
        assert_choice(value, valid, f'{key}[{i}]')
    if len(set(values)) != len(values):
        raise ScenarioError('entries must not repeat', key=key)
    return tuple(values)
