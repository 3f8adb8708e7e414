from itertools import product

import numpy as np
import pandas as pd

from ._assertions import assert_sweep_matrix, _is_range


def _expand(values, indent='\t\t'):
    '''Constant, range or list of both -> list of values.'''
    entries = values if isinstance(values, list) else [values]
    val_list = []
    for entry in entries:
        if _is_range(entry):
            lo, hi, num = (entry['lo'], entry['hi'], entry['num']) if isinstance(entry, dict) else entry
            print(f'{indent}• RANGED: np.linspace({lo},{hi},{num})')
            val_list.extend(float(v) for v in np.linspace(lo, hi, int(num)))
        else:
            print(f'{indent}• CONSTANT: {entry}')
            val_list.append(entry)
    return val_list


def find_combinations_from_dict(input_dict):
    '''
    Cartesian product of every swept scenario entry.

    Arguments:
    - input_dict (dict): section -> {dotted key within the section -> values}

    Returns:
    - DataFrame with one column per full dotted key and one row per combination
    '''
    header = '\nRANGES OF SCENARIO VALUES'
    print(header + '=' * (80 - len(header)))
    assert_sweep_matrix(input_dict)

    param_ranges = {}
    for section, section_dict in input_dict.items():
        print(f'{section}' + '-' * (80 - len(section)))
        for name, values in section_dict.items():
            print(f'\t{name}')
            param_ranges[f'{section}.{name}'] = _expand(values)

    combinations = list(product(*param_ranges.values()))
    dfv = pd.DataFrame(combinations, columns=list(param_ranges.keys()))
    print('=' * 80)
    return dfv


def set_dotted(data, dotted_key, value):
    '''Assign value at a dotted path, creating intermediate objects.'''
    *parents, leaf = dotted_key.split('.')
    node = data
    for part in parents:
        node = node.setdefault(part, {})
    node[leaf] = value
    return data
