from .functionals import (fisher_info, entropy, kl_divergence, kl_shift, l0_term, L0Forms,
                          default_b0, null_lagrangian_integral, verify_l0_conditions,
                          DensityFunctionalReport, retained_fraction)
