import json
import math

import numpy as np
import pandas as pd


FLOAT_FORMAT = '%.12e'


## TYPE ENFORCEMENT ===========================================================
def _coerce(value, key):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no inf / nan
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _coerce(v, f'{key}.{k}' if key else str(k)) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_coerce(v, f'{key}[{i}]') for i, v in enumerate(value)]
    if isinstance(value, np.ndarray):
        return _coerce(value.tolist(), key)
    if isinstance(value, pd.DataFrame):
        return _coerce(value.to_dict(orient='list'), key)
    if hasattr(value, 'to_dict'):
        return _coerce(value.to_dict(), key)
    print(f'\tConverting {type(value).__name__} at {key or "<root>"} to a string')
    return str(value)


def ensure_json_types(data):
    '''
    Plain JSON types for a report mapping: numpy scalars become float / int,
    arrays and frames become lists, non-finite floats become null, objects
    with `to_dict` are expanded and anything else is converted to a string.
    '''
    print('\tStarting type enforcement on report')
    return _coerce(data, '')
## [END] TYPE ENFORCEMENT =====================================================


## WRITERS ====================================================================
def write_report(data, path):
    '''Write a report mapping as indented JSON.'''
    with open(path, 'w') as f:
        json.dump(ensure_json_types(data), f, indent=2, allow_nan=False)
        f.write('\n')
    return path


def read_report(path):
    with open(path) as f:
        return json.load(f)


def write_frame(df, path):
    '''CSV with fixed float formatting, so identical runs give identical files.'''
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def snapshot_frame(dataset):
    '''Long table of an xarray snapshot: coordinates first, then t and the fields.'''
    df = dataset.to_dataframe().reset_index()
    df.insert(0, 't', float(dataset.attrs.get('t', 0.0)))
    return df
## [END] WRITERS ==============================================================
