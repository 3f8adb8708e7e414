import numpy as np
import pytest
from numpy.testing import assert_allclose

from quasiquantal.errors import AdvectionError, CirculationUndefinedError, ConfigurationError, UnreliableWindingError
from quasiquantal.grid import Grid, NumericsConfig
from quasiquantal.invariants import (Contour, advect_contour, circulation, phase_circulation,
                                     measure_winding, winding_number, SteadyMomentumProvider,
                                     CirculationTrace, poincare_invariant, kelvin_trace_qa,
                                     kelvin_trace_qt, symplectic_vorticity)
from quasiquantal.projection import (CharacteristicFlow, GaussianBumpAction, RigidRotation,
                                     quadratic_action)
from quasiquantal.quantum import SchrodingerFlow, vortex_2d


COARSE = NumericsConfig(dt=1e-2)


## CONTOURS ===================================================================
def test_contour_needs_enough_vertices():
    with pytest.raises(ConfigurationError):
        Contour(points=np.zeros((2, 10)))


def test_circle_orientation_and_area():
    assert_allclose(phase_circulation(Contour.circle(radius=0.5, clockwise=True)), np.pi * 0.25, atol=1e-12)
    assert_allclose(phase_circulation(Contour.circle(radius=0.5)), -np.pi * 0.25, atol=1e-12)
    assert_allclose(phase_circulation(Contour.phase_circle(radius=1.0)), np.pi, atol=1e-12)


def test_upsampling_stays_on_circle():
    contour = Contour.circle(center=(1.0, -1.0), radius=2.0, n=64).upsampled()
    assert contour.size == 128
    radii = np.linalg.norm(contour.points - np.array([[1.0], [-1.0]]), axis=0)
    assert_allclose(radii, 2.0, atol=1e-12)


def test_rigid_rotation_circulation():
    C = Contour.circle(radius=1.5)
    # M = omega (-q2, q1): loop integral = 2 omega * area
    assert_allclose(circulation(RigidRotation(omega=0.4), C), 2 * 0.4 * np.pi * 1.5 ** 2, atol=1e-12)
    bump = GaussianBumpAction(amplitude=2.0, width=1.0, center=[0.3, 0.0])
    assert abs(circulation(bump, C)) < 1e-12


def test_circulation_undefined_on_masked_field():
    C = Contour.circle(radius=1.0)
    with pytest.raises(CirculationUndefinedError):
        circulation(lambda q: np.where(q[0] > 0.9, np.nan, 0.0) * np.ones_like(q), C)


def test_advection_rotates_without_stretching():
    provider = SteadyMomentumProvider(RigidRotation(omega=1.0))
    C, frozen = advect_contour(provider, Contour.circle(radius=1.0, n=128), np.pi / 2, 1e-2)
    assert frozen == 0
    assert C.size == 128
    assert_allclose(C.t, np.pi / 2)
    # a quarter turn maps (1, 0) to (0, 1)
    assert_allclose(C.points[:, 0], [0.0, 1.0], atol=1e-8)


def test_advection_with_undefined_velocity():
    def velocity(points, t):
        v = np.ones_like(points)
        v[:, points[0] > 0.99] = np.nan
        return v

    with pytest.raises(AdvectionError):
        advect_contour(velocity, Contour.circle(radius=1.0), 0.1, 0.05)
    C, frozen = advect_contour(velocity, Contour.circle(radius=1.0), 0.1, 0.05, on_undefined='freeze')
    assert frozen > 0
    assert np.all(np.isfinite(C.points))
## [END] CONTOURS =============================================================


## WINDING ====================================================================
def test_winding_of_analytic_vortices():
    C = Contour.circle(radius=1.0)
    assert winding_number(lambda q: (q[0] - 1j * q[1]) ** 2, C) == -2
    measurement = measure_winding(lambda q: (q[0] + 1j * q[1]) * np.exp(-0.5 * (q ** 2).sum(axis=0)), C)
    assert measurement.winding == 1
    assert measurement.residue < 1e-10
    assert winding_number(lambda q: np.exp(1j * q[0]), C) == 0


def test_winding_needs_non_vanishing_wave():
    C = Contour.circle(radius=1.0)
    with pytest.raises(UnreliableWindingError):
        winding_number(lambda q: q[0] + 0j, C)


def test_winding_of_sampled_vortex(grid_2d):
    psi = vortex_2d(grid_2d, charge=-1, sigma=1.5)
    assert winding_number(psi, Contour.circle(radius=1.0)) == -1
    assert winding_number(psi, Contour.circle(center=(4.0, 0.0), radius=1.0)) == 0
## [END] WINDING ==============================================================


## TRACES =====================================================================
def test_poincare_invariant_harmonic(harmonic):
    trace = poincare_invariant(harmonic, Contour.phase_circle(center=(1.0, 0.0), radius=0.5),
                               [0.0, 1.0, 2.0], config=COARSE)
    assert_allclose(trace.circulation[0], np.pi * 0.25, atol=1e-12)
    assert trace.drift < 1e-8
    assert not trace.truncated


def test_poincare_invariant_quartic(quartic):
    trace = poincare_invariant(quartic, Contour.circle(center=(1.0, 0.0), radius=0.5, clockwise=True),
                               np.linspace(0.0, 1.0, 5), config=NumericsConfig(dt=1e-3))
    assert trace.relative_drift < 1e-6
    assert trace.contour.size >= 256


def test_poincare_times_must_increase(harmonic):
    with pytest.raises(ConfigurationError):
        poincare_invariant(harmonic, Contour.circle(), [1.0, 0.5])


def test_kelvin_qa_rigid_rotation(free):
    grid = Grid.uniform(2, 8.0, 32)
    flow = CharacteristicFlow(free, grid, RigidRotation(omega=0.5), config=COARSE)
    trace = kelvin_trace_qa(flow, Contour.circle(radius=1.0), [0.0, 0.5, 1.0])
    assert_allclose(trace.circulation[0], np.pi, atol=1e-8)
    assert trace.drift < 1e-7
    assert trace.flags == ['', '', '']
    assert trace.centroid.shape == (3, 2)


def test_kelvin_qa_stops_at_caustic(free):
    grid = Grid.uniform(2, 8.0, 32)
    flow = CharacteristicFlow(free, grid, quadratic_action(-1.0, dim=2), config=COARSE)
    trace = kelvin_trace_qa(flow, Contour.circle(radius=1.0), [0.0, 0.5, 1.5, 2.0])
    assert trace.truncated
    assert len(trace.times) == 3
    assert trace.flags[-1] == 'caustic'
    assert np.isnan(trace.circulation[-1])
    assert abs(trace.circulation[1]) < 1e-6


def test_kelvin_qa_needs_planar_contour(free, grid_1d):
    flow = CharacteristicFlow(free, grid_1d, quadratic_action(-1.0))
    with pytest.raises(ConfigurationError):
        kelvin_trace_qa(flow, Contour(points=np.zeros((1, 64))), [0.0])


def test_kelvin_qt_vortex(grid_2d, free):
    flow = SchrodingerFlow(free, vortex_2d(grid_2d, charge=1, sigma=1.5), config=COARSE)
    trace = kelvin_trace_qt(flow, Contour.circle(radius=1.0), [0.0, 0.05, 0.1])
    assert trace.winding == [1, 1, 1]
    assert_allclose(trace.circulation, 2 * np.pi, atol=1e-3)
    assert trace.jumps() == []
    assert np.all(trace.residue < 0.05)


def test_symplectic_vorticity():
    Z, deviation = symplectic_vorticity(np.random.default_rng(1).normal(size=(2, 10)))
    assert Z.shape == (10, 2, 2)
    assert deviation < 1e-10
## [END] TRACES ===============================================================


## TRACE RECORDS ==============================================================
def test_trace_jumps_and_frame(tmp_path):
    trace = CirculationTrace(times=[0.0, 1.0, 2.0, 3.0], circulation=[6.28, np.nan, 12.57, 12.57],
                             winding=[1, None, 2, 2], residue=np.array([0.0, np.nan, 0.01, 0.0]),
                             flags=['', 'unreliable_winding', '', ''],
                             centroid=np.array([[0.0, 0.0], [0.1, 0.0], [0.2, 0.0], [0.3, 0.0]]))
    assert trace.jumps() == [2]
    assert trace.jump_records() == [{'t': 2.0, 'winding_before': 1, 'winding_after': 2,
                                     'location': [0.2, 0.0]}]
    assert_allclose(trace.drift, 6.29)
    frame = trace.to_frame()
    assert list(frame.columns) == ['t', 'circulation', 'winding', 'residue', 'flags']
    assert frame['winding'].isna().sum() == 1
    path = trace.to_csv(tmp_path / 'trace.csv')
    assert path.exists()


def test_trace_defaults():
    trace = CirculationTrace(times=[0.0, 1.0], circulation=[np.nan, np.nan])
    assert trace.winding == [None, None]
    assert trace.flags == ['', '']
    assert np.isnan(trace.drift)
    assert trace.jumps() == []
## [END] TRACE RECORDS ========================================================
