import os

import pytest

from quasiquantal.errors import ScenarioError
from quasiquantal.sweep import (assert_sweep_matrix, find_combinations_from_dict, set_dotted, apply_filters,
                                valid_scenario, stable_time_step, DEFAULT_FILTERS, sweep)


BASE = {'name': 'packet',
        'tiers': ['QT'],
        'grid': {'dim': 1, 'extent': 16.0, 'points': 128},
        'numerics': {'dt': 1e-2, 't_end': 0.2},
        'initial_state': {'psi0': {'type': 'gaussian_packet', 'sigma': 1.0}},
        'output': {'samples': 3},
        'cross_checks': ['norm_drift']}


def test_matrix_entries():
    matrix = {'numerics': {'dt': [1e-3, {'lo': 1e-2, 'hi': 2e-2, 'num': 2}], 'integrator': 'verlet'},
              'grid': {'points': (64, 128, 2)}}
    assert assert_sweep_matrix(matrix) is matrix


@pytest.mark.parametrize('matrix, key', [
    ({}, 'matrix'),
    ({'numerics': 0.1}, 'matrix.numerics'),
    ({'numerics': {'dt': []}}, 'matrix.numerics.dt'),
    ({'numerics': {'dt': [0.1, {'lo': 0.1}]}}, 'matrix.numerics.dt[1]'),
    ({'numerics': {'dt': None}}, 'matrix.numerics.dt'),
])
def test_matrix_errors(matrix, key):
    with pytest.raises(ScenarioError) as excinfo:
        assert_sweep_matrix(matrix)
    assert excinfo.value.key == key


def test_combinations():
    df = find_combinations_from_dict({'numerics': {'dt': [0.1, 0.2]},
                                      'grid': {'points': {'lo': 64, 'hi': 128, 'num': 2}},
                                      'initial_state': {'psi0.sigma': (0.5, 1.5, 3)}})
    assert list(df.columns) == ['numerics.dt', 'grid.points', 'initial_state.psi0.sigma']
    assert len(df) == 12
    assert sorted(df['grid.points'].unique()) == [64.0, 128.0]
    assert sorted(df['initial_state.psi0.sigma'].unique()) == [0.5, 1.0, 1.5]


def test_set_dotted():
    data = {'numerics': {'dt': 0.1}}
    set_dotted(data, 'numerics.t_end', 2.0)
    set_dotted(data, 'initial_state.psi0.type', 'coherent_state')
    assert data == {'numerics': {'dt': 0.1, 't_end': 2.0},
                    'initial_state': {'psi0': {'type': 'coherent_state'}}}


def test_filters():
    good = {'numerics.dt': 0.01, 'scenario': BASE}
    assert valid_scenario(good)
    assert stable_time_step(good)
    assert apply_filters(good, DEFAULT_FILTERS) is None

    coarse = {'numerics.dt': 0.5, 'scenario': {**BASE, 'numerics': {'dt': 0.5, 't_end': 0.2}}}
    assert not stable_time_step(coarse)
    failed = apply_filters(coarse, DEFAULT_FILTERS)
    assert failed == {'numerics.dt': 0.5, 'failed_checks': 'stable_time_step'}

    broken = {'grid.points': 100, 'scenario': {**BASE, 'grid': {'points': 100}}}
    assert apply_filters(broken, DEFAULT_FILTERS)['failed_checks'] == 'valid_scenario'


def test_stable_time_step_with_explicit_times():
    data = {'scenario': {'numerics': {'dt': 0.1}, 'output': {'times': [0.0, 0.05, 1.0]}}}
    assert not stable_time_step(data)


def test_sweep_runs_valid_combinations(tmp_path):
    df_pass, df_fail, exit_code = sweep(BASE, {'numerics': {'dt': [1e-2, 0.5]},
                                               'initial_state': {'psi0.sigma': [1.0, 0.8]}},
                                        out=str(tmp_path))
    assert exit_code == 0
    assert list(df_pass['COMBO_NUM']) == [1, 2]
    assert list(df_pass['name']) == ['packet_00001', 'packet_00002']
    assert list(df_pass['initial_state.psi0.sigma']) == [1.0, 0.8]
    assert (df_pass['passed'] == 1).all()
    assert list(df_fail['COMBO_NUM']) == [3, 4]
    assert (df_fail['failed_checks'] == 'stable_time_step').all()
    for path in df_pass['report']:
        assert os.path.isfile(path)
    assert os.path.isfile(tmp_path / 'sweeps' / 'packet_input_summary.csv')
    assert os.path.isfile(tmp_path / 'sweeps' / 'packet_failure_summary.csv')


def test_sweep_needs_existing_files(tmp_path):
    with pytest.raises(ScenarioError, match='does not exist'):
        sweep(str(tmp_path / 'missing.json'), {'numerics': {'dt': 0.1}}, out=str(tmp_path))
