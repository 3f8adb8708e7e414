import os

from dotenv import load_dotenv


# key -> (directory key, file stem, extension)
RUN_FILES = {'report': ('reports', 'report', '.json'),
             'checks': ('reports', 'checks', '.csv'),
             'figure': ('figures', 'density', '.png')}
for _tier in ('pm', 'qa', 'qt', 'cwe'):
    RUN_FILES[f'series_{_tier}'] = ('series', f'{_tier}_series', '.csv')
    RUN_FILES[f'snapshots_{_tier}'] = ('snapshots', f'{_tier}_snapshots', '.csv')
for _trace in ('poincare', 'kelvin_qa', 'winding_qt'):
    RUN_FILES[f'trace_{_trace}'] = ('series', f'{_trace}_trace', '.csv')


def add_dirs_to_env(env_file, dirs_to_add):
    '''Append key=path pairs to an .env file, creating each directory.'''
    with open(env_file, 'a') as f:
        for key, path_name in dirs_to_add.items():
            f.write(f'{key}={path_name}\n')
            os.makedirs(path_name, exist_ok=True)


def get_key_dirs(run_name=None, env=None):
    '''
    File paths of one run, built as `<dir>/<run_name>_<stem><ext>` from the
    directories recorded in the environment.

    Arguments:
    - run_name (str): defaults to the `name` variable
    - env (str): .env file to load first; its values replace the current ones

    Returns:
    - dict of key -> file path, for every directory that is set
    '''
    if env is not None:
        load_dotenv(dotenv_path=env, override=True)
    if run_name is None:
        run_name = os.getenv('name')
    if run_name is None:
        raise ValueError('no run name given and `name` is not set in the environment')

    # Get the base paths
    base_paths = {}
    for dir_key in {entry[0] for entry in RUN_FILES.values()}:
        base_path = os.getenv(dir_key)
        if base_path:
            base_paths[dir_key] = base_path

    # Construct the paths
    run_paths = {}
    for key, (dir_key, stem, ext) in RUN_FILES.items():
        if dir_key in base_paths:
            run_paths[key] = os.path.join(base_paths[dir_key], f'{run_name}_{stem}{ext}')
    return run_paths
