from ._integrators import integrate, step_count, STEPPERS
from .states import (PhaseState, PhaseDensity, PhaseAction, GaussianPhaseDensity,
                     PolynomialPhaseAction, zero_phase_action, phase_field_from_csv)
from .liouville import (integrate_characteristic, energy_drift, evolve_liouville,
                        phase_action_at, evolve_phase_action, evolve_phase_wavefunction,
                        expectation, grid_expectations, monte_carlo_expectations,
                        MonteCarloEstimate)
