import os

import pandas as pd


def save_out_summary(success_dict, fail_dict, name=None):
    '''
    Write `<name>_input_summary.csv` (runs executed) and
    `<name>_failure_summary.csv` (combinations knocked out by a filter) into
    the `sweeps` directory of the environment.
    '''
    df_pass = pd.DataFrame(success_dict)
    df_fail = pd.DataFrame(fail_dict)

    base_path = os.getenv('sweeps')
    name = name or os.getenv('name')

    pass_name = f'{name}_input_summary.csv'
    fail_name = f'{name}_failure_summary.csv'
    df_pass.to_csv(os.path.join(base_path, pass_name), index=False)
    df_fail.to_csv(os.path.join(base_path, fail_name), index=False)
    return df_pass, df_fail
