import copy
import json
import os
from dataclasses import dataclass, field, fields

import numpy as np

from ..errors import ConfigurationError, ScenarioError, UnsupportedDimensionError
from ..grid import Grid, PhaseGrid, NumericsConfig
from ..hamiltonian import hamiltonian_from_spec
from ..invariants import Contour, WINDING_RESIDUE
from ..phase_ensemble import (PhaseDensity, PhaseAction, GaussianPhaseDensity,
                              PolynomialPhaseAction, phase_field_from_csv)
from ..projection import (ConfigAction, ConfigDensity, CharacteristicFlow, action_from_spec,
                          density_from_spec, momentum_from_spec, flow_from_action)
from ..quantum import from_madelung, wavefunction_from_spec
from ._assertions import (assert_section, assert_known_keys, assert_number, assert_choice,
                          assert_per_axis, assert_name_list)


TIERS = ('PM', 'QA', 'QT', 'CWE')
WAVE_TIERS = ('QT', 'CWE')
SCHEMA_VERSION = 1


## CROSS CHECK CATALOG ========================================================
@dataclass(frozen=True)
class CheckSpec:
    '''
    Catalog entry of a cross-check.

    - operation: the module operation whose output is compared, cited in the report
    - tiers: tiers that must be requested
    - tolerance: default tolerance on the measured value
    - dims: grid dimensions the check supports
    - options: extra entries accepted in the scenario
    '''
    operation: str
    tiers: tuple
    tolerance: float
    dims: tuple = (1, 2)
    options: tuple = ()


CROSS_CHECKS = {
    'pm_qa_trajectories': CheckSpec('projection.trajectory_agreement', ('QA',), 1e-6,
                                    options=('start', 'time', 'fraction')),
    's_minus_S': CheckSpec('projection.consistency_s_minus_S', ('QA',), 1e-6,
                           options=('start', 'time', 'fraction')),
    'caustic_time': CheckSpec('projection.CharacteristicFlow.caustic_time', ('QA',), 1e-2,
                              options=('expected',)),
    'qa_cwe_fields': CheckSpec('quantum.madelung_decompose(evolve_classical_wave) '
                               'vs projection.evolve_hj_continuity', ('QA', 'CWE'), 5e-3,
                               options=('time',)),
    'cwe_qt_toggle': CheckSpec('quantum.evolve_classical_wave vs quantum.evolve_schrodinger',
                               ('QT',), 1e-12, options=('time', 'coefficient')),
    'ehrenfest': CheckSpec('quantum.ehrenfest_residuals', ('QT',), 1e-5, options=('time',)),
    'norm_drift': CheckSpec('quantum.qt_norm_drift', ('QT',), 1e-10),
    'energy_drift': CheckSpec('quantum.qt_energy_drift', ('QT',), 1e-8),
    'modified_hj': CheckSpec('quantum.modified_hj_residual', ('QT',), 1e-4, options=('time',)),
    'fisher_identities': CheckSpec('fisher.verify_l0_conditions', (), 1e-8),
    'poincare_invariant': CheckSpec('invariants.poincare_invariant', ('PM',), 1e-6, dims=(1,)),
    'symplectic_vorticity': CheckSpec('invariants.symplectic_vorticity', ('PM',), 1e-8, dims=(1,)),
    'liouville_monte_carlo': CheckSpec('phase_ensemble.monte_carlo_expectations '
                                       'vs phase_ensemble.grid_expectations', ('PM',), 3.0,
                                       dims=(1,), options=('time', 'samples', 'seed')),
    'kelvin_qa': CheckSpec('invariants.kelvin_trace_qa', ('QA',), 1e-6, dims=(2,)),
    'winding_trace': CheckSpec('invariants.kelvin_trace_qt', ('QT',), WINDING_RESIDUE, dims=(2,)),
}
## [END] CROSS CHECK CATALOG ==================================================


## DEFAULTS ===================================================================
SECTIONS = ('name', 'description', 'tiers', 'grid', 'phase_grid', 'hamiltonian', 'numerics',
            'initial_state', 'output', 'contour', 'cross_checks')
GRID_DEFAULTS = {1: {'extent': 40.0, 'points': 512}, 2: {'extent': 16.0, 'points': 128}}
PHASE_GRID_DEFAULTS = {'p_extent': 16.0, 'p_points': 256}
OUTPUT_DEFAULTS = {'samples': 11}
CONTOUR_DEFAULTS = {'center': [0.0, 0.0], 'radius': 1.0, 'points': 256, 'clockwise': None}
INITIAL_STATE_KEYS = ('psi0', 'action', 'density', 'momentum', 'phase_density', 'phase_action')
PHASE_DENSITIES = ('gaussian', 'tabulated')
PHASE_ACTIONS = ('zero', 'polynomial', 'tabulated')
## [END] DEFAULTS =============================================================


@dataclass(frozen=True, eq=False)
class QAInitial:
    '''Initial data of a projected run: S0 (None for pure momentum fields), rho0 and M0.'''
    action: ConfigAction
    density: ConfigDensity
    momentum: object


@dataclass(frozen=True, eq=False)
class PhaseInitial:
    '''Initial phase-space data of an ensemble run.'''
    grid: PhaseGrid
    density: PhaseDensity
    action: PhaseAction
    profile: object = None


@dataclass(frozen=True, eq=False)
class Scenario:
    '''
    A validated scenario with every default filled in.

    Arguments:
    - name (str): run name, used for every output file
    - tiers (tuple): requested tiers, a subset of PM, QA, QT, CWE
    - grid (Grid): configuration grid
    - hamiltonian (Hamiltonian): separable Hamiltonian
    - config (NumericsConfig): numerics
    - output_times (ndarray): sample times of series and snapshots
    - cross_checks (tuple of dict): normalized cross-check entries with name and tolerance
    - settings (dict): the filled scenario, echoed into the report
    '''
    name: str
    tiers: tuple
    grid: Grid
    hamiltonian: object
    config: NumericsConfig
    output_times: np.ndarray = field(repr=False)
    cross_checks: tuple = ()
    settings: dict = field(default_factory=dict, repr=False)
    psi0: object = field(default=None, repr=False)
    qa: QAInitial = field(default=None, repr=False)
    phase: PhaseInitial = field(default=None, repr=False)
    source: str = None

    @property
    def dim(self):
        return self.grid.dim

    @property
    def t_end(self):
        return self.config.t_end

    def to_dict(self):
        return copy.deepcopy(self.settings)

    def qa_flow(self):
        '''A fresh characteristic flow started on the initial data.'''
        if self.qa is None:
            raise ScenarioError('the scenario has no QA initial data', key='initial_state')
        if self.qa.action is not None:
            return flow_from_action(self.hamiltonian, self.qa.action, self.qa.density, config=self.config)
        return CharacteristicFlow(self.hamiltonian, self.grid, self.qa.momentum,
                                  density0=self.qa.density, config=self.config)

    def contour(self, phase=False):
        '''
        The scenario contour. Without an explicit `clockwise` it is oriented
        positively for its plane: clockwise in (q, p) when `phase`, else
        counter-clockwise.
        '''
        spec = self.settings['contour']
        clockwise = phase if spec['clockwise'] is None else spec['clockwise']
        return Contour.circle(center=spec['center'], radius=spec['radius'], n=spec['points'],
                              clockwise=clockwise)

    def initial_density(self):
        '''Configuration density for the functional report: |psi0|^2, else the QA rho0.'''
        if self.psi0 is not None:
            return ConfigDensity(values=self.psi0.density(), grid=self.grid)
        if self.qa is not None:
            return self.qa.density
        return None


## SECTION PARSERS ============================================================
def _parse_grid(spec, tiers):
    spec = dict(assert_known_keys(assert_section(spec, 'grid'), ('dim', 'extent', 'points'), 'grid'))
    dim = assert_number(spec.get('dim', 1), 'grid.dim', positive=True, integer=True)
    if dim not in (1, 2):
        requested = ', '.join(tiers) or 'this scenario'
        raise UnsupportedDimensionError(f'{requested} supports dimensions 1 and 2, got {dim}',
                                        key='grid.dim')
    if 'PM' in tiers and dim != 1:
        raise UnsupportedDimensionError(f'PM runs one degree of freedom, got dim = {dim}',
                                        key='grid.dim')
    spec['dim'] = dim
    spec.setdefault('extent', GRID_DEFAULTS[dim]['extent'])
    spec.setdefault('points', GRID_DEFAULTS[dim]['points'])
    extent = assert_per_axis(spec['extent'], dim, 'grid.extent', positive=True)
    points = assert_per_axis(spec['points'], dim, 'grid.points', positive=True, integer=True)
    try:
        grid = Grid(extent=extent, points=points)
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), key='grid.points') from exc
    return grid, spec


def _parse_numerics(spec):
    spec = assert_section(spec, 'numerics')
    allowed = [f.name for f in fields(NumericsConfig)]
    assert_known_keys(spec, allowed, 'numerics')
    try:
        config = NumericsConfig(**spec)
    except (ConfigurationError, TypeError) as exc:
        raise ScenarioError(str(exc), key='numerics') from exc
    return config, config.to_dict()


def _parse_output(spec, config):
    spec = dict(assert_known_keys(assert_section(spec, 'output'), ('samples', 'times'), 'output'))
    if 'times' in spec:
        times = spec['times']
        if not isinstance(times, list) or not times:
            raise ScenarioError('must be a non-empty list', key='output.times')
        times = np.array([assert_number(t, f'output.times[{i}]', non_negative=True)
                          for i, t in enumerate(times)])
        if np.any(np.diff(times) <= 0):
            raise ScenarioError('must be strictly increasing', key='output.times')
        if times[-1] > config.t_end + 1e-12:
            raise ScenarioError(f'exceeds t_end = {config.t_end}', key='output.times')
        spec.pop('samples', None)
        return times, spec
    spec.setdefault('samples', OUTPUT_DEFAULTS['samples'])
    samples = assert_number(spec['samples'], 'output.samples', positive=True, integer=True)
    if samples < 2:
        raise ScenarioError('needs at least 2 samples', key='output.samples')
    return np.linspace(0.0, config.t_end, samples), spec


def _parse_contour(spec):
    spec = {**CONTOUR_DEFAULTS,
            **assert_known_keys(assert_section(spec, 'contour'), CONTOUR_DEFAULTS, 'contour')}
    spec['center'] = list(assert_per_axis(spec['center'], 2, 'contour.center'))
    spec['radius'] = assert_number(spec['radius'], 'contour.radius', positive=True)
    spec['points'] = assert_number(spec['points'], 'contour.points', positive=True, integer=True)
    if spec['clockwise'] is not None and not isinstance(spec['clockwise'], bool):
        raise ScenarioError('must be true, false or null', key='contour.clockwise')
    try:
        Contour.circle(n=spec['points'])
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), key='contour.points') from exc
    return spec


def _parse_cross_checks(entries, tiers, dim):
    if not isinstance(entries, list):
        raise ScenarioError('must be a list', key='cross_checks')
    checks, seen = [], set()
    for i, entry in enumerate(entries):
        key = f'cross_checks[{i}]'
        entry = {'name': entry} if isinstance(entry, str) else dict(assert_section(entry, key))
        name = assert_choice(entry.get('name'), tuple(CROSS_CHECKS), f'{key}.name')
        if name in seen:
            raise ScenarioError(f"'{name}' is requested twice", key=key)
        seen.add(name)
        spec = CROSS_CHECKS[name]
        assert_known_keys(entry, ('name', 'tolerance') + spec.options, key)
        entry['tolerance'] = assert_number(entry.get('tolerance', spec.tolerance),
                                           f'{key}.tolerance', positive=True)
        missing = [tier for tier in spec.tiers if tier not in tiers]
        if missing:
            raise ScenarioError(f"'{name}' needs the tiers {', '.join(missing)}", key=f'{key}.name')
        if dim not in spec.dims:
            raise UnsupportedDimensionError(f"'{name}' supports dimensions {spec.dims}, got {dim}",
                                            key=f'{key}.name')
        if name == 'caustic_time':
            entry['expected'] = assert_number(entry.get('expected'), f'{key}.expected',
                                              non_negative=True)
        checks.append(entry)
    return tuple(checks)


def _phase_initial(state, grid, phase_spec, tiers):
    spec = {**PHASE_GRID_DEFAULTS,
            **assert_known_keys(assert_section(phase_spec, 'phase_grid'), PHASE_GRID_DEFAULTS, 'phase_grid')}
    p_extent = assert_number(spec['p_extent'], 'phase_grid.p_extent', positive=True)
    p_points = assert_number(spec['p_points'], 'phase_grid.p_points', positive=True, integer=True)
    try:
        phase_grid = PhaseGrid(q=grid, p=Grid((p_extent,), (p_points,)))
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), key='phase_grid.p_points') from exc

    density_spec = dict(assert_section(state.setdefault('phase_density', {'type': 'gaussian'}),
                                       'initial_state.phase_density'))
    tag = assert_choice(density_spec.get('type', 'gaussian'), PHASE_DENSITIES,
                        'initial_state.phase_density.type')
    profile = None
    if tag == 'gaussian':
        density_spec.setdefault('mean', [0.0, 0.0])
        density_spec.setdefault('cov', [[1.0, 0.0], [0.0, 1.0]])
        try:
            profile = GaussianPhaseDensity(mean=density_spec['mean'], cov=density_spec['cov'])
        except (ConfigurationError, ValueError) as exc:
            raise ScenarioError(str(exc), key='initial_state.phase_density.cov') from exc
        density = PhaseDensity.from_profile(profile, phase_grid)
    else:
        if 'path' not in density_spec:
            raise ScenarioError("tabulated entries need a 'path'", key='initial_state.phase_density')
        values = phase_field_from_csv(density_spec['path'], phase_grid, key='initial_state.phase_density')
        density = PhaseDensity(values=values, grid=phase_grid)
    density_spec['type'] = tag
    state['phase_density'] = density_spec

    action_spec = dict(assert_section(state.setdefault('phase_action', {'type': 'zero'}),
                                      'initial_state.phase_action'))
    tag = assert_choice(action_spec.get('type', 'zero'), PHASE_ACTIONS, 'initial_state.phase_action.type')
    if tag == 'tabulated':
        if 'path' not in action_spec:
            raise ScenarioError("tabulated entries need a 'path'", key='initial_state.phase_action')
        values = phase_field_from_csv(action_spec['path'], phase_grid, key='initial_state.phase_action')
        action = PhaseAction(values=values, grid=phase_grid)
    else:
        action_profile = PolynomialPhaseAction(
            q_coefficients=tuple(action_spec.get('q_coefficients', ())) if tag == 'polynomial' else (),
            p_coefficients=tuple(action_spec.get('p_coefficients', ())) if tag == 'polynomial' else ())
        action = PhaseAction.from_profile(action_profile, phase_grid)
    action_spec['type'] = tag
    state['phase_action'] = action_spec
    return PhaseInitial(grid=phase_grid, density=density, action=action, profile=profile), spec


def _qa_initial(state, grid):
    action_spec = assert_section(state.setdefault('action', {'type': 'zero'}), 'initial_state.action')
    density_spec = assert_section(state.setdefault('density', {'type': 'gaussian'}), 'initial_state.density')
    momentum_spec = assert_section(state.setdefault('momentum', {'type': 'from_action'}),
                                   'initial_state.momentum')
    action_profile = action_from_spec(action_spec, grid)
    density = ConfigDensity.from_profile(density_from_spec(density_spec, grid), grid)
    momentum = momentum_from_spec(momentum_spec, grid, action=action_profile)
    action = ConfigAction.from_profile(action_profile, grid) if momentum is action_profile else None
    return QAInitial(action=action, density=density, momentum=momentum)
## [END] SECTION PARSERS ======================================================


## LOAD =======================================================================
def scenario_from_dict(data, name=None, source=None):
    '''
    Validate a scenario mapping and fill in every default.

    Arguments:
    - data (dict): parsed scenario
    - name (str): run name when `data` has none

    Returns:
    - Scenario
    '''
    data = copy.deepcopy(assert_section(data, 'scenario'))
    assert_known_keys(data, SECTIONS, '')

    name = data.get('name', name)
    if not isinstance(name, str) or not name:
        raise ScenarioError('must be a non-empty string', key='name')
    description = data.get('description', '')
    tiers = assert_name_list(data.get('tiers', []), TIERS, 'tiers')

    grid, grid_spec = _parse_grid(data.get('grid', {}), tiers)
    config, numerics_spec = _parse_numerics(data.get('numerics', {}))
    hamiltonian_spec = dict(assert_section(data.get('hamiltonian', {'type': 'free'}), 'hamiltonian'))
    H = hamiltonian_from_spec(hamiltonian_spec, grid=grid)
    hamiltonian_spec.setdefault('type', 'free')
    hamiltonian_spec.setdefault('mass', H.mass)
    output_times, output_spec = _parse_output(data.get('output', {}), config)
    contour_spec = _parse_contour(data.get('contour', {}))
    checks = _parse_cross_checks(data.get('cross_checks', []), tiers, grid.dim)
    check_names = {entry['name'] for entry in checks}

    state = dict(assert_known_keys(assert_section(data.get('initial_state', {}), 'initial_state'),
                                   INITIAL_STATE_KEYS, 'initial_state'))
    qa = phase = psi0 = None
    phase_spec = None
    if 'QA' in tiers or ('fisher_identities' in check_names and not set(tiers) & set(WAVE_TIERS)):
        qa = _qa_initial(state, grid)
    if 'PM' in tiers:
        phase, phase_spec = _phase_initial(state, grid, data.get('phase_grid', {}), tiers)
        if 'liouville_monte_carlo' in check_names and phase.profile is None:
            raise ScenarioError('the Monte Carlo check samples a gaussian phase density',
                                key='initial_state.phase_density.type')
    if set(tiers) & set(WAVE_TIERS):
        if 'psi0' in state or qa is None:
            psi_spec = assert_section(state.setdefault('psi0', {'type': 'gaussian_packet'}),
                                      'initial_state.psi0')
            psi0 = wavefunction_from_spec(psi_spec, grid, H, hbar=config.hbar)
        elif qa.action is None:
            raise ScenarioError('wave runs need psi0 or an initial action', key='initial_state.psi0')
        else:
            # wave tiers start from the QA data
            psi0 = from_madelung(qa.density, qa.action, hbar=config.hbar).normalized()
    if {'pm_qa_trajectories', 's_minus_S'} & check_names and qa.action is None:
        raise ScenarioError('trajectory checks need an action, not a bare momentum field',
                            key='initial_state.momentum')

    settings = {'name': name, 'description': description, 'tiers': list(tiers),
                'grid': grid_spec, 'hamiltonian': hamiltonian_spec, 'numerics': numerics_spec,
                'initial_state': state, 'output': output_spec, 'contour': contour_spec,
                'cross_checks': [dict(entry) for entry in checks]}
    if phase_spec is not None:
        settings['phase_grid'] = phase_spec

    return Scenario(name=name, tiers=tiers, grid=grid, hamiltonian=H, config=config,
                    output_times=output_times, cross_checks=checks, settings=settings,
                    psi0=psi0, qa=qa, phase=phase, source=source)


def load_scenario(path):
    '''
    Read and validate a scenario JSON file.

    Arguments:
    - path (str): scenario file; its stem is the default run name

    Returns:
    - Scenario with all defaults filled
    '''
    if not os.path.isfile(path):
        raise ScenarioError(f'scenario file {path} does not exist')
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f'{path} is not valid JSON: {exc}') from exc
    name = os.path.splitext(os.path.basename(path))[0]
    return scenario_from_dict(data, name=name, source=path)
## [END] LOAD =================================================================
