from ._assertions import assert_sweep_matrix
from ._combination_functions import find_combinations_from_dict, set_dotted
from ._apply_filters import apply_filters, valid_scenario, stable_time_step, DEFAULT_FILTERS
from ._make_summary import save_out_summary
from .sweep import sweep
