import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import xarray as xr

from ..errors import (CausticError, NumericalBlowupError, PreconditionError, QuasiquantalError,
                      SingularAmplitudeError)
from ..fisher import verify_l0_conditions
from ..grid import quadrature
from ..invariants import (poincare_invariant, kelvin_trace_qa, kelvin_trace_qt, symplectic_vorticity)
from ..paths import setup_key_dirs, get_key_dirs, default_main_dir
from ..phase_ensemble import (evolve_liouville, evolve_phase_action, grid_expectations,
                              monte_carlo_expectations)
from ..plotting import plot_density_1D
from ..projection import (evolve_hj_continuity, extract_trajectory, trajectory_agreement,
                          consistency_s_minus_S, lift_action)
from ..quantum import (SplitStepPropagator, SchrodingerFlow, madelung_decompose, qt_expectations,
                       evolve_schrodinger, evolve_classical_wave, ehrenfest_residuals,
                       modified_hj_residual, qt_energy_drift, qt_norm_drift)
from .report import write_report, write_frame, snapshot_frame
from .scenario import CROSS_CHECKS, SCHEMA_VERSION, TIERS


## RESULT TYPES ===============================================================
@dataclass
class CrossCheck:
    '''
    Verdict of one comparison.

    Arguments:
    - name (str): check or criterion name
    - operation (str): the module operation the measurement comes from
    - measured (float or None): None when nothing could be measured
    - tolerance (float): bound on the measured value
    - passed (bool): measured <= tolerance
    - error (str): exception raised while measuring, if any
    - details (dict): supporting values
    '''
    name: str
    operation: str
    measured: float = None
    tolerance: float = None
    passed: bool = False
    error: str = None
    details: dict = field(default_factory=dict)

    @classmethod
    def judge(cls, name, operation, measured, tolerance, details=None):
        passed = measured is not None and math.isfinite(measured) and measured <= tolerance
        return cls(name=name, operation=operation, measured=measured, tolerance=tolerance,
                   passed=bool(passed), details=details or {})

    @property
    def status(self):
        if self.error is not None:
            return 'error'
        return 'pass' if self.passed else 'fail'

    def to_dict(self):
        return {'name': self.name, 'operation': self.operation, 'measured': self.measured,
                'tolerance': self.tolerance, 'passed': self.passed, 'status': self.status,
                'error': self.error, 'details': self.details}


@dataclass
class TierResult:
    '''
    Output of one tier.

    - status: 'ok', 'caustic' (QA stopped at a caustic before the last
      output time) or 'error' (the run raised)
    '''
    tier: str
    status: str = 'ok'
    series: pd.DataFrame = field(default_factory=pd.DataFrame, repr=False)
    snapshots: pd.DataFrame = field(default=None, repr=False)
    error: str = None
    caustic: dict = None
    final: object = field(default=None, repr=False)

    def to_dict(self):
        return {'status': self.status, 'error': self.error, 'caustic': self.caustic,
                'series': self.series.to_dict(orient='list')}


@dataclass
class RunReport:
    scenario: dict
    tiers: dict = field(default_factory=dict)
    fisher: dict = None
    traces: dict = field(default_factory=dict, repr=False)
    checks: list = field(default_factory=list)
    files: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def execution_failed(self):
        return (any(result.status == 'error' for result in self.tiers.values())
                or any(check.error is not None for check in self.checks))

    @property
    def passed(self):
        return not self.execution_failed and all(check.passed for check in self.checks)

    @property
    def exit_code(self):
        '''0 pass, 1 check failure, 2 execution error.'''
        if self.execution_failed:
            return 2
        return 0 if self.passed else 1

    def check(self, name):
        return next(check for check in self.checks if check.name == name)

    def summary(self):
        statuses = [check.status for check in self.checks]
        return {'checks': len(statuses), 'passed': statuses.count('pass'),
                'failed': statuses.count('fail'), 'errors': statuses.count('error'),
                'exit_code': self.exit_code}

    def to_dict(self):
        traces = {name: {'truncated': trace.truncated, 'jumps': trace.jump_records(),
                         'series': trace.to_frame().to_dict(orient='list')}
                  for name, trace in self.traces.items()}
        return {'schema_version': self.schema_version,
                'scenario': self.scenario,
                'tiers': {tier: result.to_dict() for tier, result in self.tiers.items()},
                'fisher': self.fisher,
                'traces': traces,
                'checks': [check.to_dict() for check in self.checks],
                'summary': self.summary(),
                'files': self.files}
## [END] RESULT TYPES =========================================================


## TIERS ======================================================================
def _run_pm(scenario):
    H, config = scenario.hamiltonian, scenario.config
    phase = scenario.phase
    rows = []
    rho = phase.density
    for time in scenario.output_times:
        rho = evolve_liouville(H, phase.density, time, config=config)
        rows.append({'t': float(time), **grid_expectations(H, rho)})
    action = evolve_phase_action(H, phase.action, rho.t, config=config)
    ds = xr.Dataset({'rho': (('q', 'p'), rho.values), 'S': (('q', 'p'), action.values)},
                    coords={'q': phase.grid.q.axes[0], 'p': phase.grid.p.axes[0]},
                    attrs={'t': rho.t})
    return TierResult(tier='PM', series=pd.DataFrame(rows), snapshots=snapshot_frame(ds), final=rho)


def _qa_row(snapshot, time):
    density, momentum = snapshot.density, snapshot.momentum
    grid = density.grid
    norm = float(quadrature(density.values, grid))
    row = {'t': float(time), 'norm': norm}
    weight = density.values / norm if norm > 0 else np.zeros(grid.shape)
    for k in range(grid.dim):
        row[f'q{k + 1}'] = float(quadrature(weight * grid.mesh[k], grid))
        row[f'p{k + 1}'] = float(quadrature(weight * momentum.values[k], grid))
    covered = density.covered
    row['covered_fraction'] = 1.0 if covered is None else float(np.mean(covered))
    return row


def _qa_dataset(snapshot, time):
    grid = snapshot.density.grid
    covered = snapshot.density.covered
    fields = {f'M{k + 1}': snapshot.momentum.values[k] for k in range(grid.dim)}
    fields['S'] = snapshot.action.values
    fields['rho'] = snapshot.density.values
    fields['covered'] = (np.ones(grid.shape, dtype=int) if covered is None
                         else covered.astype(int))
    return grid.to_dataset(attrs={'t': float(time)}, **fields)


def _run_qa(scenario):
    flow = scenario.qa_flow()
    result = TierResult(tier='QA')
    rows, frames = [], []
    try:
        for time in scenario.output_times:
            if not flow.advance_to(time, strict=False):
                result.status = 'caustic'
                break
            snapshot = flow.snapshot()
            rows.append(_qa_row(snapshot, time))
            frames.append(snapshot_frame(_qa_dataset(snapshot, time)))
    except NumericalBlowupError as exc:
        result.status, result.error = 'error', f'{type(exc).__name__}: {exc}'
    result.series = pd.DataFrame(rows)
    result.snapshots = pd.concat(frames, ignore_index=True) if frames else None
    result.caustic = flow.report(requested_time=float(scenario.output_times[-1])).to_dict()
    result.final = flow
    return result


def _wave_frame(psi, config):
    ds = psi.to_dataset()
    ds['S'] = (psi.grid.dims, madelung_decompose(psi, config).action.values)
    return snapshot_frame(ds)


def _run_wave(scenario, tier):
    '''Schrodinger (QT) or classical-wave (CWE) run sampled at the output times.'''
    H, config = scenario.hamiltonian, scenario.config
    coefficient = 1.0 if tier == 'CWE' else 0.0
    propagator = SplitStepPropagator(H, scenario.grid, config.dt, hbar=config.hbar,
                                     quantum_coefficient=coefficient, config=config)
    result = TierResult(tier=tier)
    psi = scenario.psi0
    rows, frames = [], []
    try:
        for time in scenario.output_times:
            if time > psi.t + 1e-12:
                psi = propagator.evolve(psi, time - psi.t)
            rows.append(qt_expectations(psi, H, config).to_row())
            frames.append(_wave_frame(psi, config))
    except (NumericalBlowupError, SingularAmplitudeError) as exc:
        result.status, result.error = 'error', f'{type(exc).__name__}: {exc}'
        if getattr(exc, 'time', None) is not None:
            result.caustic = {'blowup_time': exc.time}
    result.series = pd.DataFrame(rows)
    result.snapshots = pd.concat(frames, ignore_index=True) if frames else None
    result.final = psi
    return result


TIER_RUNNERS = {'PM': _run_pm, 'QA': _run_qa,
                'QT': lambda scenario: _run_wave(scenario, 'QT'),
                'CWE': lambda scenario: _run_wave(scenario, 'CWE')}
## [END] TIERS ================================================================


## CROSS CHECKS ===============================================================
def madelung_field_gap(action, density, psi, config):
    '''
    Largest difference between characteristics-based (S, rho) and the
    Madelung fields of psi, over covered nodes where both densities exceed
    the comparison floor. S is compared up to a constant.

    Returns:
    - (density gap, action gap)
    '''
    pair = madelung_decompose(psi, config)
    rho_wave = pair.density.values
    rho_qa = density.values
    mask = ((rho_wave >= config.comparison_floor * np.max(rho_wave))
            & (rho_qa >= config.comparison_floor * np.max(rho_qa)) & ~pair.mask)
    if density.covered is not None:
        mask &= density.covered
    if not np.any(mask):
        raise PreconditionError('no nodes left to compare')
    gap = pair.action.values - action.values
    gap = gap - np.median(gap[mask])
    return (float(np.max(np.abs(rho_wave - rho_qa)[mask])), float(np.max(np.abs(gap[mask]))))


def _trajectory(scenario, run, entry):
    time = entry.get('time', scenario.t_end)
    t_star = run.tiers['QA'].caustic['time']
    if t_star is not None:
        time = min(time, entry.get('fraction', 0.9) * t_star)
    start = np.broadcast_to(np.asarray(entry.get('start', 0.5), dtype=float), (scenario.dim,))
    return extract_trajectory(scenario.hamiltonian, scenario.qa_flow(), start, time, scenario.config)


def _check_pm_qa_trajectories(scenario, run, entry):
    trajectory = _trajectory(scenario, run, entry)
    measured = trajectory_agreement(scenario.hamiltonian, trajectory, scenario.config)
    return measured, {'t_final': trajectory.times[-1], 'start': trajectory.positions[0]}


def _check_s_minus_S(scenario, run, entry):
    trajectory = _trajectory(scenario, run, entry)
    measured = consistency_s_minus_S(scenario.hamiltonian, lift_action(scenario.qa.action),
                                     trajectory, scenario.config)
    return measured, {'t_final': trajectory.times[-1]}


def _check_caustic_time(scenario, run, entry):
    t_star = run.tiers['QA'].caustic['time']
    details = {'caustic_time': t_star, 'expected': entry['expected']}
    if t_star is None:
        return None, details
    return abs(t_star - entry['expected']), details


def _check_qa_cwe_fields(scenario, run, entry):
    H, config = scenario.hamiltonian, scenario.config
    time = entry.get('time', scenario.t_end)
    action, density, report = evolve_hj_continuity(H, scenario.qa.action, scenario.qa.density,
                                                   time, config=config)
    if report.multivalued:
        raise CausticError(f'QA fields are multivalued at t = {time}', report=report)
    psi = evolve_classical_wave(H, scenario.psi0, time, config=config)
    density_gap, action_gap = madelung_field_gap(action, density, psi, config)
    return max(density_gap, action_gap), {'density': density_gap, 'action': action_gap, 'time': time}


def _check_cwe_qt_toggle(scenario, run, entry):
    H, config = scenario.hamiltonian, scenario.config
    time = entry.get('time', scenario.t_end)
    coefficient = entry.get('coefficient', 0.0)
    wave = evolve_classical_wave(H, scenario.psi0, time, config=config, coefficient=coefficient)
    reference = evolve_schrodinger(H, scenario.psi0, time, config=config)
    measured = float(np.max(np.abs(wave.values - reference.values)))
    return measured, {'coefficient': coefficient, 'time': time}


def _check_ehrenfest(scenario, run, entry):
    residuals = ehrenfest_residuals(scenario.hamiltonian, scenario.psi0,
                                    entry.get('time', scenario.t_end), scenario.config)
    return max(residuals.position, residuals.momentum), residuals.to_dict()


def _check_norm_drift(scenario, run, entry):
    return qt_norm_drift(run.tiers['QT'].series), {}


def _check_energy_drift(scenario, run, entry):
    return qt_energy_drift(run.tiers['QT'].series), {}


def _check_modified_hj(scenario, run, entry):
    H, config = scenario.hamiltonian, scenario.config
    time = entry.get('time', scenario.t_end)
    flow = SchrodingerFlow(H, scenario.psi0, config)
    psi_a = flow.advance_to(time)
    psi_b = flow.advance_to(psi_a.t + config.dt)
    measured = modified_hj_residual(psi_a, psi_b, H, config)
    classical = modified_hj_residual(psi_a, psi_b, H, config, include_quantum_potential=False)
    return measured, {'time': psi_a.t, 'without_quantum_potential': classical}


def _check_fisher_identities(scenario, run, entry):
    if run.fisher is None or 'error' in run.fisher:
        raise PreconditionError((run.fisher or {}).get('error', 'no density to evaluate'))
    measured = max(run.fisher['l0_identity_residual'], *run.fisher['constraint_residual'])
    return measured, {'fisher': run.fisher['fisher']}


def _check_poincare_invariant(scenario, run, entry):
    trace = poincare_invariant(scenario.hamiltonian, scenario.contour(phase=True), scenario.output_times,
                               scenario.config)
    run.traces['poincare'] = trace
    return trace.relative_drift, {'initial': trace.circulation[0], 'vertices': trace.contour.size}


def _check_symplectic_vorticity(scenario, run, entry):
    trace = run.traces.get('poincare')
    points = trace.contour.points if trace is not None else scenario.contour(phase=True).points
    _, deviation = symplectic_vorticity(points)
    return deviation, {}


def _check_liouville_monte_carlo(scenario, run, entry):
    H, config = scenario.hamiltonian, scenario.config
    phase = scenario.phase
    time = entry.get('time', scenario.t_end)
    on_grid = grid_expectations(H, evolve_liouville(H, phase.density, time, config=config))
    sampled = monte_carlo_expectations(H, phase.profile, time, samples=int(entry.get('samples', 10 ** 6)),
                                       seed=int(entry.get('seed', 0)), config=config, antithetic=False)
    ratios = {name: abs(on_grid[name] - estimate.mean) / max(estimate.standard_error, np.finfo(float).tiny)
              for name, estimate in sampled.items()}
    details = {name: {'grid': on_grid[name], 'monte_carlo': sampled[name].mean,
                      'standard_error': sampled[name].standard_error} for name in sampled}
    return max(ratios.values()), details


def _check_kelvin_qa(scenario, run, entry):
    trace = kelvin_trace_qa(scenario.qa_flow(), scenario.contour(), scenario.output_times,
                            scenario.config)
    run.traces['kelvin_qa'] = trace
    return trace.relative_drift, {'initial': trace.circulation[0], 'truncated': trace.truncated}


def _check_winding_trace(scenario, run, entry):
    flow = SchrodingerFlow(scenario.hamiltonian, scenario.psi0, scenario.config)
    trace = kelvin_trace_qt(flow, scenario.contour(), scenario.output_times, scenario.config)
    run.traces['winding_qt'] = trace
    defined = trace.residue[np.isfinite(trace.residue)]
    measured = float(np.max(defined)) if defined.size else None
    return measured, {'windings': trace.winding, 'jumps': trace.jump_records()}


CHECK_RUNNERS = {
    'pm_qa_trajectories': _check_pm_qa_trajectories,
    's_minus_S': _check_s_minus_S,
    'caustic_time': _check_caustic_time,
    'qa_cwe_fields': _check_qa_cwe_fields,
    'cwe_qt_toggle': _check_cwe_qt_toggle,
    'ehrenfest': _check_ehrenfest,
    'norm_drift': _check_norm_drift,
    'energy_drift': _check_energy_drift,
    'modified_hj': _check_modified_hj,
    'fisher_identities': _check_fisher_identities,
    'poincare_invariant': _check_poincare_invariant,
    'symplectic_vorticity': _check_symplectic_vorticity,
    'liouville_monte_carlo': _check_liouville_monte_carlo,
    'kelvin_qa': _check_kelvin_qa,
    'winding_trace': _check_winding_trace,
}


def evaluate_check(scenario, run, entry):
    name = entry['name']
    operation = CROSS_CHECKS[name].operation
    print(f'\tStarted cross-check: {name}', flush=True)
    try:
        measured, details = CHECK_RUNNERS[name](scenario, run, entry)
    except QuasiquantalError as exc:
        print(f'\t\t{name} raised {type(exc).__name__}: {exc}')
        return CrossCheck(name=name, operation=operation, tolerance=entry['tolerance'],
                          error=f'{type(exc).__name__}: {exc}')
    check = CrossCheck.judge(name, operation, measured, entry['tolerance'], details)
    print(f'\t\t{name}: measured {measured} against {entry["tolerance"]}: {check.status.upper()}')
    return check
## [END] CROSS CHECKS =========================================================


## RUN ========================================================================
def _fisher_report(scenario):
    density = scenario.initial_density()
    if density is None:
        return None
    try:
        return verify_l0_conditions(density, hbar=scenario.config.hbar, mass=scenario.hamiltonian.mass,
                                    config=scenario.config).to_dict()
    except (QuasiquantalError, AssertionError) as exc:
        return {'error': f'{type(exc).__name__}: {exc}'}


def _write_outputs(report, scenario, out, plot):
    paths = setup_key_dirs(name=scenario.name, main_dir=default_main_dir(out))
    ptr = get_key_dirs(scenario.name, env=paths['env_file'])
    files = {}
    for tier, result in report.tiers.items():
        files[f'series_{tier.lower()}'] = write_frame(result.series, ptr[f'series_{tier.lower()}'])
        if result.snapshots is not None:
            files[f'snapshots_{tier.lower()}'] = write_frame(result.snapshots,
                                                             ptr[f'snapshots_{tier.lower()}'])
    for name, trace in report.traces.items():
        files[f'trace_{name}'] = trace.to_csv(ptr[f'trace_{name}'])
    columns = ['name', 'operation', 'measured', 'tolerance', 'status', 'error']
    checks = pd.DataFrame([check.to_dict() for check in report.checks], columns=columns + ['details'])
    files['checks'] = write_frame(checks[columns], ptr['checks'])

    if plot and scenario.dim == 1:
        for tier in ('QT', 'CWE', 'QA'):
            result = report.tiers.get(tier)
            if result is not None and result.snapshots is not None:
                files['figure'] = plot_density_1D(result.snapshots, ptr['figure'],
                                                  title=f'{scenario.name} ({tier})')
                break
    files['report'] = ptr['report']
    report.files = files
    write_report(report.to_dict(), ptr['report'])
    return files


def run(scenario, out=None, plot=False, write=True):
    '''
    Execute the requested tiers of a scenario, evaluate its cross-checks and
    write the report.

    Arguments:
    - scenario (Scenario): validated scenario
    - out (str): output root, see paths.default_main_dir
    - plot (bool): also render the density figure of a 1D run
    - write (bool): write report JSON and CSV files

    Returns:
    - RunReport
    '''
    print(f'\nStarted run: {scenario.name}', flush=True)
    report = RunReport(scenario=scenario.to_dict())

    ## TIERS ------------------------------------------------------------------
    for tier in TIERS:
        if tier not in scenario.tiers:
            continue
        print(f'\tStarted tier: {tier}', flush=True)
        result = TIER_RUNNERS[tier](scenario)
        report.tiers[tier] = result
        if result.status == 'ok':
            print(f'\tTier {tier} finished successfully')
        elif result.status == 'caustic':
            print(f"\tTier {tier} stopped at the caustic t* = {result.caustic['time']:.6g}")
        else:
            print(f'\tTier {tier} FAILED: {result.error}')
    ## [END] TIERS ------------------------------------------------------------

    report.fisher = _fisher_report(scenario)

    ## CROSS CHECKS -----------------------------------------------------------
    for entry in scenario.cross_checks:
        report.checks.append(evaluate_check(scenario, report, entry))
    ## [END] CROSS CHECKS -----------------------------------------------------

    if write:
        _write_outputs(report, scenario, out, plot)
    summary = report.summary()
    print(f"Run {scenario.name} finished: {summary['passed']}/{summary['checks']} checks passed, "
          f"exit code {summary['exit_code']}")
    return report
## [END] RUN ==================================================================
