from .profiles import (QuadraticAction, PolynomialAction, GaussianBumpAction, GaussianDensity,
                       RigidRotation, TabulatedProfile, zero_action, plane_wave_action,
                       quadratic_action, action_from_spec, density_from_spec, momentum_from_spec)
from .fields import MomentumField, ConfigAction, ConfigDensity, fit_affine, fit_quadratic
from .flow import CharacteristicFlow, CausticReport, FlowSnapshot
from .qa import (restrict_h, evolve_canonical_condition, evolve_hj_continuity, flow_from_action,
                 Trajectory, extract_trajectory, projected_action, lift_action,
                 consistency_s_minus_S, trajectory_agreement, vorticity,
                 continuity_residual, half_density_residual, hj_residual)
