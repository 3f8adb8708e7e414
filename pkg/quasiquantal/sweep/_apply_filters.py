from ..errors import QuasiquantalError
from ..scenario import scenario_from_dict


def valid_scenario(var_dict):
    '''The combined scenario passes validation.'''
    try:
        scenario_from_dict(var_dict['scenario'])
    except QuasiquantalError as exc:
        print(f'\t\t{exc}')
        return False
    return True


def stable_time_step(var_dict):
    '''Time step no larger than the first output interval.'''
    data = var_dict['scenario']
    numerics, output = data.get('numerics', {}), data.get('output', {})
    dt = numerics.get('dt', 1e-3)
    if not isinstance(dt, (int, float)):
        return True
    if isinstance(output.get('times'), list) and len(output['times']) > 1:
        return dt <= min(b - a for a, b in zip(output['times'], output['times'][1:]))
    samples = output.get('samples', 11)
    return samples < 2 or dt <= numerics.get('t_end', 1.0) / (samples - 1)


DEFAULT_FILTERS = [valid_scenario, stable_time_step]


def apply_filters(var_dict, functions_to_apply):
    '''
    Applies the filter functions to knock out combinations that are not
    valid.

    Arguments:
    - var_dict (dictionary): swept values plus the combined scenario under 'scenario'
    - functions_to_apply (list): filter functions of var_dict returning bool

    Returns:
    - failed_vars (dict/None): swept values and the names of the failed filters
    '''
    failed_checks = []
    failed_vars = {}
    print('\nApplying FILTER functions')

    for func in functions_to_apply:
        print(f'\tApplying FILTER function: {func.__name__}')
        if not func(var_dict):
            print(f'\tFailed FILTER function: {func.__name__}')
            failed_checks.append(func.__name__)
            for k, v in var_dict.items():
                if isinstance(v, (str, int, float)):
                    failed_vars[k] = v

    if failed_checks:
        failed_vars['failed_checks'] = ', '.join(failed_checks)
        return failed_vars

    print('All FILTER functions passed successfully!')
    return None
