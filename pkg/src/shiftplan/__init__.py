"""Workforce shift scheduling: Erlang-C staffing, day/shift allocation,
penalty tuning, and mode comparison.

The solve entry points are :func:`solve_multi_phase` (day allocation first,
then shifts within the chosen days) and :func:`solve_single_phase` (one joint
assignment).  Everything is deterministic given a seed and a move cap.
"""

from .domain import (
    CostMatrix,
    DayAllocation,
    RequirementMatrix,
    Scenario,
    Schedule,
    ShiftCatalog,
    WeekPartition,
    build_week_partition,
    coverage_from_schedule,
    deviation_profiles,
    validate_day_allocation,
    validate_scenario,
    validate_schedule,
)
from .erlang import (
    SlaSpec,
    TrafficPoint,
    erlang_b_blocking,
    erlang_c_wait_probability,
    offered_load,
    required_agents,
    requirements_from_volumes,
    service_level,
)
from .metrics import (
    ComparisonResult,
    ComparisonRun,
    SolveReport,
    build_report,
    compare_modes,
    dvdi,
    ivdi,
)
from .model import (
    Deadline,
    IntegerModel,
    SearchSpaceError,
    Solution,
    SolveLimits,
    SolveStatus,
    check_feasible,
    count_variables,
    evaluate_objective,
)
from .phases import (
    DayPhaseResult,
    DayPhaseSpec,
    MultiPhaseResult,
    ShiftPhaseResult,
    ShiftPhaseSpec,
    SinglePhaseResult,
    build_day_model,
    build_shift_model,
    build_single_model,
    solve_day_allocation,
    solve_multi_phase,
    solve_shift_allocation,
    solve_single_phase,
)
from .scenario_io import (
    PRESETS,
    PeakPresetSpec,
    SchemaError,
    gen_peak_scenario,
    gen_preset_scenario,
    load_scenario,
    read_schedule,
    save_scenario,
    write_report,
    write_schedule,
    write_sweep_trace,
)
from .solvers import (
    SearchResult,
    get_backend,
    register_backend,
    solve_exact_day,
    solve_exact_shift,
    solve_exact_single,
    week_optimal_day_counts,
)
from .tuner import (
    DistributionPair,
    StopConfig,
    SweepTrace,
    TuneResult,
    day_distribution,
    kl_divergence,
    target_distribution,
    tune_penalty,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonResult",
    "ComparisonRun",
    "CostMatrix",
    "DayAllocation",
    "DayPhaseResult",
    "DayPhaseSpec",
    "Deadline",
    "DistributionPair",
    "IntegerModel",
    "MultiPhaseResult",
    "PRESETS",
    "PeakPresetSpec",
    "RequirementMatrix",
    "Scenario",
    "Schedule",
    "SchemaError",
    "SearchResult",
    "SearchSpaceError",
    "ShiftCatalog",
    "ShiftPhaseResult",
    "ShiftPhaseSpec",
    "SinglePhaseResult",
    "SlaSpec",
    "Solution",
    "SolveLimits",
    "SolveReport",
    "SolveStatus",
    "StopConfig",
    "SweepTrace",
    "TrafficPoint",
    "TuneResult",
    "WeekPartition",
    "build_day_model",
    "build_report",
    "build_shift_model",
    "build_single_model",
    "build_week_partition",
    "check_feasible",
    "compare_modes",
    "count_variables",
    "coverage_from_schedule",
    "day_distribution",
    "deviation_profiles",
    "dvdi",
    "erlang_b_blocking",
    "erlang_c_wait_probability",
    "evaluate_objective",
    "gen_peak_scenario",
    "gen_preset_scenario",
    "get_backend",
    "ivdi",
    "kl_divergence",
    "load_scenario",
    "offered_load",
    "read_schedule",
    "register_backend",
    "required_agents",
    "requirements_from_volumes",
    "save_scenario",
    "service_level",
    "solve_day_allocation",
    "solve_exact_day",
    "solve_exact_shift",
    "solve_exact_single",
    "solve_multi_phase",
    "solve_shift_allocation",
    "solve_single_phase",
    "target_distribution",
    "tune_penalty",
    "validate_day_allocation",
    "validate_scenario",
    "validate_schedule",
    "week_optimal_day_counts",
    "write_report",
    "write_schedule",
    "write_sweep_trace",
]
