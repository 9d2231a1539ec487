"""Evaluation indices and report assembly.

The two deviation indices are reporting-only measures (absolute deviations,
not the squared objectives the solvers minimize): the day-level index sums
|required - scheduled| over days, the interval-level one over every
(day, interval) cell.  ``build_report`` recomputes everything from the raw
schedule so no number in a report depends on solver bookkeeping.
"""

from dataclasses import dataclass

import numpy as np

from .domain import (
    CostMatrix,
    Scenario,
    Schedule,
    coverage_from_schedule,
    deviation_profiles,
    validate_scenario,
    validate_schedule,
)
from .model import SolveLimits, SolveStatus, count_variables
from .phases import interval_objective_value, solve_multi_phase, solve_single_phase
from .tuner import DistributionPair, day_distribution, kl_divergence, target_distribution


def dvdi(day_requirements, day_coverage) -> int:
    """Day-level absolute deviation: sum over days of |required - scheduled|."""
    r = np.asarray(day_requirements, dtype=np.int64)
    p = np.asarray(day_coverage, dtype=np.int64)
    if r.shape != p.shape:
        raise ValueError("requirement and coverage lengths differ")
    return int(np.abs(r - p).sum())


def ivdi(interval_requirements, interval_coverage) -> int:
    """Interval-level absolute deviation across every (day, interval) cell."""
    r = np.asarray(interval_requirements, dtype=np.int64)
    p = np.asarray(interval_coverage, dtype=np.int64)
    if r.shape != p.shape:
        raise ValueError("requirement and coverage shapes differ")
    return int(np.abs(r - p).sum())


@dataclass(frozen=True)
class SolveReport:
    """Everything recomputable about one solved schedule."""

    scenario_name: str
    mode: str  # "single" or "multi"
    status: str
    seed: int
    agent_count: int
    day_count: int
    intervals_per_day: int
    shift_count: int
    assigned_pairs: int
    variable_count: int
    objective_value: float
    cost_value: float
    dvdi: int
    ivdi: int
    kl_day_distribution: float | None
    per_day_required: tuple[int, ...]
    per_day_coverage: tuple[int, ...]
    evaluations: int
    runtime_seconds: float


def build_report(
    scenario: Scenario,
    schedule: Schedule,
    mode: str,
    *,
    seed: int,
    runtime_seconds: float,
    status: SolveStatus | str = SolveStatus.FEASIBLE,
    evaluations: int = 0,
    cost: CostMatrix | None = None,
) -> SolveReport:
    """Recompute coverage, objective, and indices for a finished schedule.

    Refuses schedules that break the hard constraints; every reported number
    is derived here from the scenario and schedule alone.
    """
    if mode not in ("single", "multi"):
        raise ValueError(f"unknown mode {mode!r}")
    problems = validate_scenario(scenario)
    if problems:
        raise ValueError("invalid scenario: " + "; ".join(problems))
    problems = validate_schedule(
        schedule,
        agent_count=scenario.agent_count,
        day_count=scenario.num_days,
        catalog=scenario.shift_catalog,
        weeks=scenario.week_partition(),
    )
    if problems:
        raise ValueError("infeasible schedule: " + "; ".join(problems))
    coverage = coverage_from_schedule(
        schedule, scenario.shift_catalog, scenario.num_days, scenario.agent_count
    )
    deviations = deviation_profiles(scenario.requirements, coverage)
    assigned_pairs = len(schedule.assignments)
    variable_count = count_variables(
        scenario.agent_count,
        scenario.num_days,
        len(scenario.shift_catalog),
        scenario.intervals_per_day,
        mode,
        assigned_pairs=assigned_pairs if mode == "multi" else None,
    )
    cost_value = cost.total(schedule) if cost is not None else 0.0
    objective = interval_objective_value(
        scenario.requirements.per_interval, coverage.per_interval
    )
    kl: float | None
    try:
        kl = kl_divergence(
            DistributionPair(
                day_distribution(coverage.per_day),
                target_distribution(scenario.requirements.per_day),
            )
        )
    except ValueError:
        kl = None  # nothing scheduled or nothing required
    return SolveReport(
        scenario_name=scenario.name,
        mode=mode,
        status=status.value if isinstance(status, SolveStatus) else str(status),
        seed=seed,
        agent_count=scenario.agent_count,
        day_count=scenario.num_days,
        intervals_per_day=scenario.intervals_per_day,
        shift_count=len(scenario.shift_catalog),
        assigned_pairs=assigned_pairs,
        variable_count=variable_count,
        objective_value=objective + cost_value,
        cost_value=cost_value,
        dvdi=int(np.abs(deviations.per_day).sum()),
        ivdi=int(np.abs(deviations.per_interval).sum()),
        kl_day_distribution=kl,
        per_day_required=tuple(int(x) for x in scenario.requirements.per_day),
        per_day_coverage=tuple(int(x) for x in coverage.per_day),
        evaluations=evaluations,
        runtime_seconds=runtime_seconds,
    )


@dataclass(frozen=True)
class ComparisonRun:
    seed: int
    single: SolveReport
    multi: SolveReport


@dataclass(frozen=True)
class ComparisonResult:
    scenario_name: str
    runs: tuple[ComparisonRun, ...]
    means: dict  # mode -> {metric: mean}

    def wins(self, metric: str) -> int:
        """Runs where multi-phase is no worse than single-phase on ``metric``."""
        return sum(
            1
            for run in self.runs
            if getattr(run.multi, metric) <= getattr(run.single, metric)
        )


_MEAN_FIELDS = ("objective_value", "dvdi", "ivdi", "variable_count", "runtime_seconds")


def compare_modes(
    scenario: Scenario,
    runs: int,
    limits: SolveLimits,
    *,
    day_share: float = 0.2,
    penalty_factor: int = 0,
    backend: str = "local",
) -> ComparisonResult:
    """Benchmark both modes over seeded repeat runs with equal budgets.

    Run ``i`` uses seed ``limits.seed + i`` for both modes.  The single-phase
    mode gets the whole budget; the multi-phase mode splits the same budget
    across its two phases.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    pairs: list[ComparisonRun] = []
    for i in range(runs):
        run_limits = SolveLimits(
            time_budget_seconds=limits.time_budget_seconds,
            seed=limits.seed + i,
            max_exact_nodes=limits.max_exact_nodes,
            move_cap=limits.move_cap,
        )
        single = solve_single_phase(scenario, run_limits, backend=backend)
        multi = solve_multi_phase(
            scenario,
            run_limits,
            penalty_factor=penalty_factor,
            day_share=day_share,
            backend=backend,
        )
        single_report = build_report(
            scenario,
            single.schedule,
            "single",
            seed=run_limits.seed,
            runtime_seconds=single.runtime_seconds,
            status=single.status,
            evaluations=single.evaluations,
        )
        multi_report = build_report(
            scenario,
            multi.schedule,
            "multi",
            seed=run_limits.seed,
            runtime_seconds=multi.runtime_seconds,
            status=multi.shift.status,
            evaluations=multi.evaluations,
        )
        pairs.append(ComparisonRun(run_limits.seed, single_report, multi_report))
    means = {
        mode: {
            metric: sum(getattr(getattr(run, mode), metric) for run in pairs) / len(pairs)
            for metric in _MEAN_FIELDS
        }
        for mode in ("single", "multi")
    }
    return ComparisonResult(scenario.name, tuple(pairs), means)
