from .contours import (Contour, advect_contour, circulation, phase_circulation, line_integral,
                       measure_winding, winding_number, WindingMeasurement, WINDING_RESIDUE)
from .traces import (SteadyMomentumProvider, PhaseFlowProvider, CirculationTrace,
                     poincare_invariant, kelvin_trace_qa, kelvin_trace_qt,
                     symplectic_vorticity, CANONICAL_SYMPLECTIC)
