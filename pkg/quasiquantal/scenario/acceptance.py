from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..clebsch import enumerate_class_solutions, regular_solution, is_regular_sequence, variable_count_sequence
from ..errors import QuasiquantalError
from ..fisher import fisher_info, entropy, kl_shift, verify_l0_conditions
from ..grid import Grid, PhaseGrid, NumericsConfig
from ..hamiltonian import Hamiltonian, Free, Harmonic, Quartic
from ..invariants import (Contour, circulation, measure_winding, poincare_invariant, kelvin_trace_qa,
                          kelvin_trace_qt, symplectic_vorticity)
from ..phase_ensemble import (PhaseDensity, GaussianPhaseDensity, evolve_liouville, grid_expectations,
                              monte_carlo_expectations)
from ..projection import (ConfigAction, ConfigDensity, CharacteristicFlow, GaussianBumpAction,
                          GaussianDensity, RigidRotation, quadratic_action, zero_action, flow_from_action,
                          evolve_hj_continuity, extract_trajectory, trajectory_agreement)
from ..quantum import (SchrodingerFlow, gaussian_packet, coherent_state, plane_wave, vortex_2d,
                       from_madelung, evolve_schrodinger, evolve_classical_wave, expectation_series,
                       width, ehrenfest_residuals, modified_hj_residual, quantum_potential_values)
from .pipeline import CrossCheck, madelung_field_gap


'''
Fixed acceptance criteria. Every criterion builds its own small problem with
a known answer, so `verify` needs no scenario file and no output directory.
'''

HARMONIC = Hamiltonian(mass=1.0, potential=Harmonic(omega=1.0, mass=1.0))
FREE = Hamiltonian(mass=1.0, potential=Free())


@dataclass(frozen=True)
class Criterion:
    title: str
    runner: object

    def run(self, **options):
        return self.runner(**options)


## CRITERIA ===================================================================
def _poincare():
    config = NumericsConfig(dt=1e-3)
    C0 = Contour.phase_circle(radius=1.0, n=256)
    trace = poincare_invariant(HARMONIC, C0, np.linspace(0.0, 2.0 * np.pi, 5), config)
    measured = float(np.max(np.abs(trace.circulation - np.pi)) / np.pi)
    _, deviation = symplectic_vorticity(trace.contour.points)
    return [CrossCheck.judge('poincare_harmonic_circle', 'invariants.poincare_invariant', measured, 1e-6,
                             {'final': trace.circulation[-1]}),
            CrossCheck.judge('symplectic_vorticity', 'invariants.symplectic_vorticity', deviation, 1e-8)]


def _burgers(caustic_threshold=None):
    grid = Grid.uniform(1, 8.0, 256)
    config = NumericsConfig(dt=1e-3)
    if caustic_threshold is not None:
        config = config.updated(caustic_threshold=caustic_threshold)
    flow = flow_from_action(FREE, ConfigAction.from_profile(quadratic_action(-1.0), grid), config=config)

    measured = None
    if flow.advance_to(0.5, strict=False):
        M = flow.momentum_at(grid.mesh)[0]
        covered = np.isfinite(M)
        measured = float(np.max(np.abs(M[covered] + 2.0 * grid.mesh[0][covered])))
    field_check = CrossCheck.judge('burgers_field_t0.5', 'projection.CharacteristicFlow.momentum_at',
                                   measured, 1e-5)

    flow.advance_to(1.5, strict=False)
    t_star = flow.caustic_time
    gap = None if t_star is None else abs(t_star - 1.0)
    return [field_check,
            CrossCheck.judge('burgers_caustic_time', 'projection.CharacteristicFlow.caustic_time',
                             gap, 1e-2, {'caustic_time': t_star,
                                         'threshold': config.caustic_threshold})]


def _trajectories():
    grid = Grid.uniform(1, 8.0, 256)
    config = NumericsConfig(dt=1e-3)
    checks = []
    for name, H, t_star in (('free', FREE, 1.0), ('harmonic', HARMONIC, 0.25 * np.pi)):
        flow = flow_from_action(H, ConfigAction.from_profile(quadratic_action(-1.0), grid), config=config)
        trajectory = extract_trajectory(H, flow, [0.5], 0.85 * t_star, config)
        checks.append(CrossCheck.judge(f'trajectory_{name}', 'projection.trajectory_agreement',
                                       trajectory_agreement(H, trajectory, config), 1e-6,
                                       {'t_final': trajectory.times[-1]}))
    return checks


def _schrodinger():
    config = NumericsConfig(dt=1e-3)
    grid = Grid.uniform(1, 20.0, 256)
    psi0 = coherent_state(grid, HARMONIC, center=1.0)
    series, _ = expectation_series(HARMONIC, psi0, 2.0 * np.pi, config, every=50)
    tracking = float(np.max(np.abs(series['q1'] - np.cos(series['t']))))
    norm = float(np.max(np.abs(series['norm'] - 1.0)))
    energy = series['energy'].to_numpy()
    drift = float(abs(energy[-1] - energy[0]) / abs(energy[0]))

    wide = Grid.uniform(1, 40.0, 512)
    spread = width(evolve_schrodinger(FREE, gaussian_packet(wide, sigma=1.0), 2.0, config))
    return [CrossCheck.judge('coherent_state_tracking', 'quantum.expectation_series', tracking, 1e-6),
            CrossCheck.judge('coherent_state_norm', 'quantum.qt_norm_drift', norm, 1e-10),
            CrossCheck.judge('coherent_state_energy', 'quantum.qt_energy_drift', drift, 1e-8),
            CrossCheck.judge('free_packet_width', 'quantum.width', abs(spread - np.sqrt(2.0)), 1e-6,
                             {'width': spread})]


def _ehrenfest():
    config = NumericsConfig(dt=1e-3)
    harmonic = ehrenfest_residuals(HARMONIC, coherent_state(Grid.uniform(1, 20.0, 256), HARMONIC,
                                                            center=1.0), 1.0, config)
    quartic = Hamiltonian(mass=1.0, potential=Quartic(lam=1.0))
    anharmonic = ehrenfest_residuals(quartic, gaussian_packet(Grid.uniform(1, 16.0, 512), center=1.0),
                                     1.0, config)
    return [CrossCheck.judge(f'ehrenfest_{name}', 'quantum.ehrenfest_residuals',
                             max(residuals.position, residuals.momentum), 1e-5, residuals.to_dict())
            for name, residuals in (('harmonic', harmonic), ('quartic', anharmonic))]


def _classical_wave_toggle():
    config = NumericsConfig(dt=1e-3)
    psi0 = coherent_state(Grid.uniform(1, 20.0, 256), HARMONIC, center=1.0)
    wave = evolve_classical_wave(HARMONIC, psi0, 0.5, config, coefficient=0.0)
    reference = evolve_schrodinger(HARMONIC, psi0, 0.5, config)

    flat = plane_wave(Grid.uniform(1, 8.0 * np.pi, 64), mode=4)
    classical = evolve_classical_wave(FREE, flat, 0.5, config, coefficient=1.0)
    quantum = evolve_schrodinger(FREE, flat, 0.5, config)
    return [CrossCheck.judge('coefficient_zero_is_schrodinger', 'quantum.evolve_classical_wave',
                             float(np.max(np.abs(wave.values - reference.values))), 1e-12),
            CrossCheck.judge('plane_wave_unaffected', 'quantum.evolve_classical_wave',
                             float(np.max(np.abs(classical.values - quantum.values))), 1e-10)]


def _projected_vs_classical_wave():
    grid = Grid.uniform(1, 16.0, 256)
    config = NumericsConfig(dt=1e-3)
    S0 = ConfigAction.from_profile(zero_action(1), grid)
    rho0 = ConfigDensity.from_profile(GaussianDensity(center=[0.0], sigma=1.0), grid)
    action, density, _ = evolve_hj_continuity(FREE, S0, rho0, 0.5, config)
    psi = evolve_classical_wave(FREE, from_madelung(rho0, S0).normalized(), 0.5, config)
    density_gap, action_gap = madelung_field_gap(action, density, psi, config)
    return [CrossCheck.judge('qa_cwe_fields', 'quantum.evolve_classical_wave',
                             max(density_gap, action_gap), 5e-3,
                             {'density': density_gap, 'action': action_gap})]


def _modified_hj():
    config = NumericsConfig(dt=1e-3)
    flow = SchrodingerFlow(HARMONIC, coherent_state(Grid.uniform(1, 20.0, 256), HARMONIC, center=1.0),
                           config)
    psi_a = flow.advance_to(1.0)
    psi_b = flow.advance_to(1.0 + config.dt)
    residual = modified_hj_residual(psi_a, psi_b, HARMONIC, config)

    grid = Grid.uniform(1, 16.0, 256)
    rho = GaussianDensity(center=[0.0], sigma=1.0).value(grid.mesh)
    T_Q = quantum_potential_values(rho, grid)[grid.points[0] // 2]
    return [CrossCheck.judge('modified_hj', 'quantum.modified_hj_residual', residual, 1e-4),
            CrossCheck.judge('quantum_potential_origin', 'quantum.quantum_potential_values',
                             abs(T_Q + 0.25), 1e-8, {'value': T_Q})]


def _fisher():
    checks = []
    for sigma, extent in ((0.5, 16.0), (1.0, 16.0), (2.0, 32.0)):
        grid = Grid.uniform(1, extent, 256)
        rho = ConfigDensity.from_profile(GaussianDensity(center=[0.0], sigma=sigma), grid)
        checks.append(CrossCheck.judge(f'fisher_sigma_{sigma:g}', 'fisher.fisher_info',
                                       abs(fisher_info(rho) - sigma ** -2), 1e-6))

    grid = Grid.uniform(1, 16.0, 256)
    rho = ConfigDensity.from_profile(GaussianDensity(center=[0.0], sigma=1.0), grid)
    report = verify_l0_conditions(rho)
    delta = 1e-3
    ratio = kl_shift(rho, axis=0, delta=delta) / delta ** 2
    checks += [
        CrossCheck.judge('l0_identity', 'fisher.verify_l0_conditions', report.l0_identity_residual, 1e-8),
        CrossCheck.judge('l0_constraint', 'fisher.verify_l0_conditions',
                         max(report.constraint_residual), 1e-8),
        CrossCheck.judge('kl_shift_curvature', 'fisher.kl_shift', abs(ratio + 0.5) / 0.5, 1e-3,
                         {'ratio': ratio}),
        CrossCheck.judge('entropy_unit_gaussian', 'fisher.entropy',
                         abs(entropy(rho) - 0.5 * np.log(2.0 * np.pi * np.e)), 1e-6),
    ]
    return checks


EXPECTED_CLASSES = {1: {(0, 1)}, 2: {(1, 2), (3, 1)}, 3: {(0, 4), (2, 3), (4, 2), (6, 1)}}


def _clebsch():
    mismatched = [N for N, expected in EXPECTED_CLASSES.items()
                  if {s.as_tuple()[1:] for s in enumerate_class_solutions(N)} != expected]
    irregular = [N for N in range(1, 101) if regular_solution(N).as_tuple() != (N, N - 1, N)]
    sequence = variable_count_sequence('regular', 100)
    return [CrossCheck.judge('clebsch_small_classes', 'clebsch.enumerate_class_solutions',
                             float(len(mismatched)), 0.0, {'mismatched': mismatched}),
            CrossCheck.judge('clebsch_regular', 'clebsch.regular_solution',
                             float(len(irregular)), 0.0, {'irregular': irregular[:10]}),
            CrossCheck.judge('clebsch_increment', 'clebsch.is_regular_sequence',
                             0.0 if is_regular_sequence(sequence, increment=2) else 1.0, 0.0)]


def _circulation():
    C = Contour.circle(radius=1.0, n=256)
    bump = GaussianBumpAction(amplitude=1.0, width=1.0, center=[0.3, -0.2])
    gradient_loop = circulation(bump.momentum, C)

    def point_vortex(q):
        return np.stack([-q[1], q[0]]) / np.sum(q ** 2, axis=0)

    vortex_loop = circulation(point_vortex, C)
    windings = {k: measure_winding(lambda q, k=k: (q[0] + 1j * q[1]) ** k, C).winding for k in (0, 1, 2)}

    grid = Grid.uniform(2, 8.0, 64)
    config = NumericsConfig(dt=1e-2)
    flow = CharacteristicFlow(FREE, grid, RigidRotation(omega=1.0), config=config)
    trace = kelvin_trace_qa(flow, C, np.linspace(0.0, 1.0, 5), config)
    return [CrossCheck.judge('gradient_circulation', 'invariants.circulation', abs(gradient_loop), 1e-10),
            CrossCheck.judge('point_vortex_circulation', 'invariants.circulation',
                             abs(vortex_loop - 2.0 * np.pi), 1e-6),
            CrossCheck.judge('winding_powers', 'invariants.winding_number',
                             float(sum(w != k for k, w in windings.items())), 0.0, {'windings': windings}),
            CrossCheck.judge('kelvin_rigid_rotation', 'invariants.kelvin_trace_qa', trace.relative_drift,
                             1e-6, {'initial': trace.circulation[0]})]


def _liouville_monte_carlo():
    config = NumericsConfig(dt=0.05)
    profile = GaussianPhaseDensity(mean=[0.5, 0.5], cov=[[1.0, 0.0], [0.0, 1.0]])
    grid = PhaseGrid(q=Grid((32.0,), (256,)), p=Grid((16.0,), (256,)))
    on_grid = grid_expectations(FREE, evolve_liouville(FREE, PhaseDensity.from_profile(profile, grid),
                                                       2.0, config))
    sampled = monte_carlo_expectations(FREE, profile, 2.0, samples=10 ** 6, seed=0, config=config,
                                       antithetic=False)
    return [CrossCheck.judge(f'liouville_mc_{name}', 'phase_ensemble.monte_carlo_expectations',
                             abs(on_grid[name] - estimate.mean) / estimate.standard_error, 3.0,
                             {'grid': on_grid[name], 'monte_carlo': estimate.mean})
            for name, estimate in sampled.items()]


def _winding_trace():
    config = NumericsConfig(dt=1e-3)
    psi0 = vortex_2d(Grid.uniform(2, 16.0, 64), charge=1, sigma=1.0)
    flow = SchrodingerFlow(FREE, psi0, config)
    trace = kelvin_trace_qt(flow, Contour.circle(radius=1.0, n=128), np.linspace(0.0, 0.2, 5), config)
    residue = float(np.max(trace.residue)) if np.all(np.isfinite(trace.residue)) else None
    return [CrossCheck.judge('vortex_winding_residue', 'invariants.kelvin_trace_qt', residue, 0.05,
                             {'windings': trace.winding, 'jumps': trace.jump_records()}),
            CrossCheck.judge('vortex_winding', 'invariants.kelvin_trace_qt',
                             float(sum(w != 1 for w in trace.winding)), 0.0)]


CRITERIA = {
    1: Criterion('Poincare invariant of a harmonic circle', _poincare),
    2: Criterion('Burgers focusing field and caustic time', _burgers),
    3: Criterion('Projected trajectories are canonical characteristics', _trajectories),
    4: Criterion('Coherent state and free spreading', _schrodinger),
    5: Criterion('Ehrenfest relations', _ehrenfest),
    6: Criterion('Classical-wave coefficient toggle', _classical_wave_toggle),
    7: Criterion('Projected fields against the classical wave', _projected_vs_classical_wave),
    8: Criterion('Modified Hamilton-Jacobi and the quantum potential', _modified_hj),
    9: Criterion('Fisher information and L0 identities', _fisher),
    10: Criterion('Clebsch class solutions', _clebsch),
    11: Criterion('Circulation and winding', _circulation),
    12: Criterion('Liouville against Monte Carlo', _liouville_monte_carlo),
    13: Criterion('Vortex winding along a moving contour', _winding_trace),
}
## [END] CRITERIA =============================================================


## VERIFY =====================================================================
def run_criteria(criteria=None, caustic_threshold=None):
    '''
    Evaluate acceptance criteria.

    Arguments:
    - criteria (iterable of int): subset of CRITERIA keys, all when None
    - caustic_threshold (float): caustic threshold for the Burgers criterion

    Returns:
    - DataFrame with one row per measurement
    '''
    selected = sorted(CRITERIA) if not criteria else sorted(set(criteria))
    unknown = [c for c in selected if c not in CRITERIA]
    if unknown:
        raise KeyError(f'unknown criteria {unknown}; valid: {sorted(CRITERIA)}')
    rows = []
    for number in selected:
        criterion = CRITERIA[number]
        print(f'\tStarted criterion {number}: {criterion.title}', flush=True)
        options = {'caustic_threshold': caustic_threshold} if number == 2 else {}
        try:
            checks = criterion.run(**options)
        except QuasiquantalError as exc:
            checks = [CrossCheck(name=criterion.title, operation='', error=f'{type(exc).__name__}: {exc}')]
        for check in checks:
            rows.append({'criterion': number, 'check': check.name, 'measured': check.measured,
                         'tolerance': check.tolerance, 'verdict': check.status.upper()})
    return pd.DataFrame(rows, columns=['criterion', 'check', 'measured', 'tolerance', 'verdict'])


def verify(list_only=False, caustic_threshold=None, criteria=None):
    '''
    Print the acceptance table.

    Returns:
    - exit code: 0 when every measurement passes, 1 otherwise
    '''
    if list_only:
        for number, criterion in CRITERIA.items():
            print(f'{number:>3}  {criterion.title}')
        return 0
    print(f"{' ACCEPTANCE ':=^80}")
    table = run_criteria(criteria=criteria, caustic_threshold=caustic_threshold)
    with pd.option_context('display.max_rows', None, 'display.width', 120):
        print(table.to_string(index=False))
    failed = int((table['verdict'] != 'PASS').sum())
    print(f'{len(table) - failed}/{len(table)} measurements passed')
    return 0 if failed == 0 else 1
## [END] VERIFY ===============================================================
