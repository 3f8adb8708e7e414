from .scenario import (Scenario, QAInitial, PhaseInitial, CheckSpec, CROSS_CHECKS, TIERS, WAVE_TIERS,
                       SCHEMA_VERSION, scenario_from_dict, load_scenario)
from .report import ensure_json_types, write_report, read_report, write_frame, snapshot_frame
from .pipeline import CrossCheck, TierResult, RunReport, run, evaluate_check, madelung_field_gap
from .acceptance import CRITERIA, Criterion, run_criteria, verify
