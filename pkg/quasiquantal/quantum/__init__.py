from .wavefunction import (WaveFunction, gaussian_packet, coherent_state, eigenstate, eigenvalue,
                           plane_wave, vortex_2d, from_madelung, wavefunction_from_spec, STATES)
from .madelung import (MadelungPair, madelung_decompose, madelung_compose, quantum_potential,
                       quantum_potential_values, phase_gradient, modified_hj_residual,
                       integrodifferential_residual, gradient_phase_residual)
from .propagator import (SplitStepPropagator, SchrodingerFlow, evolve_schrodinger,
                         evolve_classical_wave)
from .observables import (QTExpectations, qt_expectations, width, expectation_series,
                          EhrenfestResiduals, ehrenfest_residuals, qt_energy_drift, qt_norm_drift)
