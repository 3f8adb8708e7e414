import copy
import json
import os

from dotenv import load_dotenv

from ._apply_filters import apply_filters, DEFAULT_FILTERS
from ._combination_functions import find_combinations_from_dict, set_dotted
from ._make_summary import save_out_summary

from ..errors import ScenarioError
from ..paths import setup_key_dirs, add_dirs_to_env, default_main_dir
from ..scenario import scenario_from_dict, run


'''
Parameter sweeps: one scenario file, a matrix of swept entries, one run per
valid combination.
'''


def _read_json(path, what):
    if not os.path.isfile(path):
        raise ScenarioError(f'{what} file {path} does not exist')
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f'{path} is not valid JSON: {exc}') from exc


def sweep(scenario, matrix, out=None, filter_sets=None, plot=False):
    '''
    Runs a scenario over the cartesian product of the swept entries
        - Finds all combinations of the matrix values
        - Loops through each combination
            - sets the values into a copy of the scenario
            - applies the filters (default: the scenario validates)
            - runs the combination under the name `<name>_<combo:05>`
        - Writes input and failure summaries

    Arguments:
    - scenario (str or dict): scenario file or mapping
    - matrix (str or dict): sweep matrix file or mapping, see assert_sweep_matrix
    - out (str): output root
    - filter_sets (list): filter functions, defaults to DEFAULT_FILTERS

    Returns:
    - (df_pass, df_fail, exit_code) with the largest run exit code
    '''
    if isinstance(scenario, str):
        base_name = os.path.splitext(os.path.basename(scenario))[0]
        base = _read_json(scenario, 'scenario')
    else:
        base = scenario
        base_name = None
    base_name = base.get('name', base_name) or 'sweep'
    if isinstance(matrix, str):
        matrix = _read_json(matrix, 'matrix')
    filter_sets = DEFAULT_FILTERS if filter_sets is None else filter_sets

    main_dir = default_main_dir(out)
    paths = setup_key_dirs(name=base_name, main_dir=main_dir)
    add_dirs_to_env(paths['env_file'], {'sweeps': os.path.join(main_dir, 'sweeps')})
    load_dotenv(dotenv_path=paths['env_file'], override=True)

    df_combinations = find_combinations_from_dict(matrix)

    fail_data, pass_data = [], []
    exit_code = 0
    ## CORE LOOP ==============================================================
    for combo_i, row in df_combinations.iterrows():
        combo_num = combo_i + 1
        print(f'\nStarted processing combination: {combo_num:05}...', flush=True)
        # numpy scalars -> python values
        var_dict = {k: v.item() if hasattr(v, 'item') else v for k, v in row.to_dict().items()}

        data = copy.deepcopy(base)
        for dotted_key, value in var_dict.items():
            set_dotted(data, dotted_key, value)
        data['name'] = f'{base_name}_{combo_num:05}'
        var_dict['scenario'] = data

        failed_params = apply_filters(var_dict, filter_sets)

        # FAILURE CASES -------------------------------------------------------
        if failed_params is not None:
            failed_params['COMBO_NUM'] = combo_num
            fail_data.append(failed_params)
            print(f'Combination {combo_num:05} FAILED. Moving on.')
        # [END] FAILURE CASES -------------------------------------------------

        # SUCCESSFUL CASES ----------------------------------------------------
        else:
            report = run(scenario_from_dict(data), out=main_dir, plot=plot)
            summary = report.summary()
            pass_data.append({'COMBO_NUM': combo_num, 'name': data['name'],
                              **{k: v for k, v in var_dict.items() if k != 'scenario'},
                              **summary, 'report': report.files.get('report')})
            exit_code = max(exit_code, report.exit_code)
            print(f'FINISHED COMBINATION: {combo_num:05}', flush=True)
            print('#' * 40)
        # [END] SUCCESSFUL CASES ----------------------------------------------
    ## [END] CORE LOOP ========================================================

    # the runs above rewrote the environment
    load_dotenv(dotenv_path=paths['env_file'], override=True)
    df_pass, df_fail = save_out_summary(pass_data, fail_data, base_name)
    print('SWEEP FINISHED')
    return df_pass, df_fail, exit_code
