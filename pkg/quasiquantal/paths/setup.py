import os


DEFAULT_MAIN_DIR = 'quasiquantal_out'


def default_main_dir(out=None):
    '''
    Output root of a run: an explicit `out` wins over the `main` variable of
    a loaded .env file, which wins over ./quasiquantal_out.
    '''
    if out:
        return out
    return os.getenv('main') or os.path.join(os.getcwd(), DEFAULT_MAIN_DIR)


## PATH SETUP
def setup_key_dirs(name='NAME',
                   main_dir=None,
                   reports_dir=None,
                   series_dir=None,
                   snapshots_dir=None,
                   figures_dir=None,
                   env_dir=None,
                   dir_add_ons=None):
    '''
    Create the output directories of a run and record them in
    `envs/<name>.env`, one `key=path` line each.

    Arguments:
    - name (str): run name, also the .env file name
    - main_dir (str): output root; the other directories default to its children
    - dir_add_ons (dict): further key -> directory entries

    Returns:
    - paths (dict): key -> directory, plus `env_file`
    '''
    if main_dir is None:
        raise ValueError("`main_dir` must be specified")
    print(f'main_dir Directory set as: {main_dir}')

    paths = {'main': main_dir,
             'reports': reports_dir or os.path.join(main_dir, 'reports'),
             'series': series_dir or os.path.join(main_dir, 'series'),
             'snapshots': snapshots_dir or os.path.join(main_dir, 'snapshots'),
             'figures': figures_dir or os.path.join(main_dir, 'figures'),
             'envs': env_dir or os.path.join(main_dir, 'envs'),
             'name': name}

    # Make Directories
    for key, path_name in paths.items():
        if key != 'name':
            print(f'\tSpecifying {key}: {path_name}')
            os.makedirs(path_name, exist_ok=True)

    if dir_add_ons:
        for key, path_name in dir_add_ons.items():
            print(f'\tMaking {key}: {path_name}')
            os.makedirs(path_name, exist_ok=True)

    # Write to Environment File
    env_path = os.path.join(paths['envs'], f'{name}.env')
    print(f'.env file created at {env_path}')
    with open(env_path, 'w') as f:
        for key, path_name in {**paths, **(dir_add_ons or {})}.items():
            f.write(f'{key}={path_name}\n')

    paths['env_file'] = env_path
    return paths
