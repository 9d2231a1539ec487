"""The three scheduling formulations and their orchestration.

``solve_single_phase`` assigns days and shifts jointly against the
interval-level objective.  ``solve_multi_phase`` splits the work: a day
allocation matched against per-day peak requirements (with an optional
idle-day penalty), then a shift allocation for the fixed working days,
with the time budget shared between the phases (20% / 80% by default).

Each solve also has an explicit integer-model builder so results can be
audited independently of the search path: rebuild the model, plug in the
returned assignment, and re-check feasibility and objective.
"""

from dataclasses import dataclass

import numpy as np

from .domain import (
    DAYS_PER_WEEK,
    WORKDAYS_PER_WEEK,
    CostMatrix,
    DayAllocation,
    RequirementMatrix,
    Scenario,
    Schedule,
    ShiftCatalog,
    WeekPartition,
    frozen_grid,
    validate_scenario,
)
from .model import (
    IntegerModel,
    LinearConstraint,
    LinExpr,
    QuadraticObjective,
    SolveLimits,
    SolveStatus,
)
from .solvers import (
    CountState,
    day_term,
    get_backend,
    materialize_day,
    materialize_shift,
    materialize_single,
)

DEFAULT_DAY_SHARE = 0.2


# ---------------------------------------------------------------------------
# phase specs and results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DayPhaseSpec:
    """Inputs of the day-allocation phase."""

    day_requirements: np.ndarray  # per-day peak head-counts R_D
    agent_count: int
    weeks: WeekPartition
    penalty_factor: int = 0

    def __post_init__(self):
        object.__setattr__(self, "day_requirements", frozen_grid(self.day_requirements))
        if self.day_requirements.ndim != 1:
            raise ValueError("day requirements must be one value per day")
        if self.agent_count < 0:
            raise ValueError("agent_count must be non-negative")
        if self.penalty_factor < 0:
            raise ValueError("penalty_factor must be non-negative")
        if self.day_requirements.shape[0] != self.weeks.count * DAYS_PER_WEEK:
            raise ValueError("day requirements do not match the week partition")


@dataclass(frozen=True)
class ShiftPhaseSpec:
    """Inputs of the shift-allocation phase: interval needs plus fixed days."""

    requirements: RequirementMatrix
    allocation: DayAllocation
    catalog: ShiftCatalog

    def __post_init__(self):
        if self.allocation.num_days != self.requirements.days:
            raise ValueError("allocation and requirements disagree on day count")
        if self.catalog.intervals_per_day != self.requirements.intervals:
            raise ValueError("catalog interval grid differs from requirements")
        if len(self.catalog) == 0:
            raise ValueError("shift catalog is empty")


@dataclass(frozen=True)
class PenaltyProfile:
    """Idle-agent penalty per day: factor * (agents - scheduled)."""

    per_day: np.ndarray
    factor: int


def penalty_profile(day_counts, agent_count: int, factor: int) -> PenaltyProfile:
    counts = np.asarray(day_counts, dtype=np.int64)
    per_day = factor * (agent_count - counts)
    per_day.setflags(write=False)
    return PenaltyProfile(per_day, factor)


@dataclass(frozen=True)
class DayPhaseResult:
    allocation: DayAllocation
    objective: int
    status: SolveStatus
    counts: CountState
    trace: tuple
    evaluations: int
    runtime_seconds: float
    penalty_factor: int

    @property
    def day_counts(self) -> np.ndarray:
        return self.allocation.day_counts


@dataclass(frozen=True)
class ShiftPhaseResult:
    schedule: Schedule
    objective: int
    status: SolveStatus
    counts: CountState
    trace: tuple
    evaluations: int
    runtime_seconds: float


@dataclass(frozen=True)
class SinglePhaseResult:
    schedule: Schedule
    objective: float  # deviation objective plus linear cost, when present
    deviation_objective: int
    cost_value: float
    status: SolveStatus
    counts: CountState
    trace: tuple
    evaluations: int
    runtime_seconds: float


@dataclass(frozen=True)
class MultiPhaseResult:
    schedule: Schedule
    day: DayPhaseResult
    shift: ShiftPhaseResult
    day_limits: SolveLimits
    shift_limits: SolveLimits

    @property
    def objective(self) -> int:
        return self.shift.objective

    @property
    def runtime_seconds(self) -> float:
        return self.day.runtime_seconds + self.shift.runtime_seconds

    @property
    def evaluations(self) -> int:
        return self.day.evaluations + self.shift.evaluations


# ---------------------------------------------------------------------------
# solves
# ---------------------------------------------------------------------------


def solve_day_allocation(
    spec: DayPhaseSpec, limits: SolveLimits, backend: str = "local"
) -> DayPhaseResult:
    solver = get_backend(backend).day
    result = solver(
        spec.day_requirements, spec.agent_count, spec.weeks, spec.penalty_factor, limits
    )
    allocation = materialize_day(result.counts, spec.agent_count, spec.weeks)
    return DayPhaseResult(
        allocation=allocation,
        objective=result.objective,
        status=result.status,
        counts=result.counts,
        trace=result.trace,
        evaluations=result.evaluations,
        runtime_seconds=result.wall_seconds,
        penalty_factor=spec.penalty_factor,
    )


def solve_shift_allocation(
    spec: ShiftPhaseSpec, limits: SolveLimits, backend: str = "local"
) -> ShiftPhaseResult:
    solver = get_backend(backend).shift
    result = solver(
        spec.requirements.per_interval,
        [int(n) for n in spec.allocation.day_counts],
        spec.catalog,
        limits,
    )
    schedule = materialize_shift(result.counts, spec.allocation)
    return ShiftPhaseResult(
        schedule=schedule,
        objective=result.objective,
        status=result.status,
        counts=result.counts,
        trace=result.trace,
        evaluations=result.evaluations,
        runtime_seconds=result.wall_seconds,
    )


def _require_valid(scenario: Scenario) -> None:
    problems = validate_scenario(scenario)
    if problems:
        raise ValueError("invalid scenario: " + "; ".join(problems))


def _uniform_cost_table(cost: CostMatrix | None, scenario: Scenario) -> dict | None:
    if cost is None:
        return None
    table = cost.agent_uniform_table(scenario.agent_count)
    if table is None:
        raise ValueError(
            "cost matrix prices agents differently; the bundled solvers treat"
            " agents as interchangeable and need agent-uniform costs"
        )
    return table


def solve_single_phase(
    scenario: Scenario,
    limits: SolveLimits,
    cost: CostMatrix | None = None,
    backend: str = "local",
) -> SinglePhaseResult:
    """Joint day-and-shift assignment against interval-level deviations."""
    _require_valid(scenario)
    weeks = scenario.week_partition()
    table = _uniform_cost_table(cost, scenario)
    solver = get_backend(backend).single
    result = solver(
        scenario.requirements.per_interval,
        scenario.agent_count,
        weeks,
        scenario.shift_catalog,
        limits,
        table,
    )
    schedule = materialize_single(result.counts, scenario.agent_count, weeks)
    cost_value = cost.total(schedule) if cost is not None else 0.0
    deviation = interval_objective_value(
        scenario.requirements.per_interval,
        _coverage_grid(schedule, scenario),
    )
    return SinglePhaseResult(
        schedule=schedule,
        objective=result.objective,
        deviation_objective=deviation,
        cost_value=cost_value,
        status=result.status,
        counts=result.counts,
        trace=result.trace,
        evaluations=result.evaluations,
        runtime_seconds=result.wall_seconds,
    )


def solve_multi_phase(
    scenario: Scenario,
    limits: SolveLimits,
    penalty_factor: int = 0,
    day_share: float = DEFAULT_DAY_SHARE,
    backend: str = "local",
) -> MultiPhaseResult:
    """Day allocation against daily peaks, then shift allocation within days."""
    _require_valid(scenario)
    if not 0.0 < day_share < 1.0:
        raise ValueError("day_share must lie strictly between 0 and 1")
    weeks = scenario.week_partition()
    day_limits = limits.scaled(day_share)
    shift_limits = limits.scaled(1.0 - day_share)
    day_result = solve_day_allocation(
        DayPhaseSpec(
            day_requirements=scenario.requirements.per_day,
            agent_count=scenario.agent_count,
            weeks=weeks,
            penalty_factor=penalty_factor,
        ),
        day_limits,
        backend=backend,
    )
    shift_result = solve_shift_allocation(
        ShiftPhaseSpec(
            requirements=scenario.requirements,
            allocation=day_result.allocation,
            catalog=scenario.shift_catalog,
        ),
        shift_limits,
        backend=backend,
    )
    return MultiPhaseResult(
        schedule=shift_result.schedule,
        day=day_result,
        shift=shift_result,
        day_limits=day_limits,
        shift_limits=shift_limits,
    )


# ---------------------------------------------------------------------------
# objective recomputation helpers
# ---------------------------------------------------------------------------


def day_objective_value(r_day, day_counts, agent_count: int, penalty_factor: int) -> int:
    """Day-phase objective recomputed from scratch."""
    r = [int(x) for x in r_day]
    p = [int(x) for x in day_counts]
    if len(r) != len(p):
        raise ValueError("requirement and head-count lengths differ")
    return sum(day_term(r[d], p[d], agent_count, penalty_factor) for d in range(len(r)))


def interval_objective_value(r_dt, p_dt) -> int:
    """Interval-phase objective recomputed from scratch."""
    r = np.asarray(r_dt, dtype=np.int64)
    p = np.asarray(p_dt, dtype=np.int64)
    if r.shape != p.shape:
        raise ValueError("requirement and coverage shapes differ")
    diff = (r - p).ravel()
    return int(diff @ diff)


def _coverage_grid(schedule: Schedule, scenario: Scenario) -> np.ndarray:
    grid = np.zeros((scenario.num_days, scenario.intervals_per_day), dtype=np.int64)
    for _, d, s in schedule.assignments:
        span = scenario.shift_catalog.covers(s)
        grid[d, span.start : span.stop] += 1
    return grid


# ---------------------------------------------------------------------------
# auditable integer models
# ---------------------------------------------------------------------------


def build_day_model(spec: DayPhaseSpec) -> IntegerModel:
    """Per-agent binary model of the day phase."""
    A, weeks = spec.agent_count, spec.weeks
    D = weeks.count * DAYS_PER_WEEK
    variables = tuple(
        (f"x[{a},{d}]", 0, 1) for a in range(A) for d in range(D)
    )
    constraints = []
    for a in range(A):
        for w in range(weeks.count):
            terms = {f"x[{a},{d}]": 1 for d in weeks.days_of(w)}
            constraints.append(
                LinearConstraint(
                    terms, "=", WORKDAYS_PER_WEEK, label=f"workdays a{a} w{w}"
                )
            )
    squared = []
    for d in range(D):
        squared.append(
            LinExpr({f"x[{a},{d}]": -1 for a in range(A)}, int(spec.day_requirements[d]))
        )
        if spec.penalty_factor:
            squared.append(
                LinExpr(
                    {f"x[{a},{d}]": -spec.penalty_factor for a in range(A)},
                    spec.penalty_factor * A,
                )
            )
    return IntegerModel(variables, tuple(constraints), QuadraticObjective(tuple(squared)))


def build_shift_model(spec: ShiftPhaseSpec) -> IntegerModel:
    """Per-agent binary model of the shift phase (working pairs only)."""
    pairs = spec.allocation.pairs()
    S = len(spec.catalog)
    variables = tuple(
        (f"x[{a},{d},{s}]", 0, 1) for a, d in pairs for s in range(S)
    )
    constraints = []
    for a, d in pairs:
        terms = {f"x[{a},{d},{s}]": 1 for s in range(S)}
        constraints.append(
            LinearConstraint(terms, "=", 1, label=f"one shift a{a} d{d}")
        )
    by_day: dict[int, list[int]] = {}
    for a, d in pairs:
        by_day.setdefault(d, []).append(a)
    for d in range(spec.requirements.days):
        agents = by_day.get(d, [])
        terms = {f"x[{a},{d},{s}]": 1 for a in agents for s in range(S)}
        constraints.append(
            LinearConstraint(
                terms, "=", int(spec.allocation.day_counts[d]), label=f"head-count d{d}"
            )
        )
    squared = []
    cov = spec.catalog.coverage
    for d in range(spec.requirements.days):
        agents = by_day.get(d, [])
        for t in range(spec.requirements.intervals):
            terms = {
                f"x[{a},{d},{s}]": -1
                for a in agents
                for s in range(S)
                if cov[s, t]
            }
            squared.append(LinExpr(terms, int(spec.requirements.per_interval[d, t])))
    return IntegerModel(variables, tuple(constraints), QuadraticObjective(tuple(squared)))


def build_single_model(scenario: Scenario, cost: CostMatrix | None = None) -> IntegerModel:
    """Per-agent binary model of the joint formulation."""
    A, D = scenario.agent_count, scenario.num_days
    S = len(scenario.shift_catalog)
    weeks = scenario.week_partition()
    variables = tuple(
        (f"x[{a},{d},{s}]", 0, 1)
        for a in range(A)
        for d in range(D)
        for s in range(S)
    )
    constraints = []
    for a in range(A):
        for w in range(weeks.count):
            terms = {
                f"x[{a},{d},{s}]": 1 for d in weeks.days_of(w) for s in range(S)
            }
            constraints.append(
                LinearConstraint(
                    terms, "=", WORKDAYS_PER_WEEK, label=f"workdays a{a} w{w}"
                )
            )
    for a in range(A):
        for d in range(D):
            terms = {f"x[{a},{d},{s}]": 1 for s in range(S)}
            constraints.append(
                LinearConstraint(terms, "<=", 1, label=f"one shift a{a} d{d}")
            )
    squared = []
    cov = scenario.shift_catalog.coverage
    for d in range(D):
        for t in range(scenario.intervals_per_day):
            terms = {
                f"x[{a},{d},{s}]": -1
                for a in range(A)
                for s in range(S)
                if cov[s, t]
            }
            squared.append(
                LinExpr(terms, int(scenario.requirements.per_interval[d, t]))
            )
    linear = None
    if cost is not None:
        cost_terms = {}
        for (a, d, s), c in cost.cost.items():
            if c:
                cost_terms[f"x[{a},{d},{s}]"] = c
        linear = LinExpr(cost_terms, 0.0)
    return IntegerModel(
        variables, tuple(constraints), QuadraticObjective(tuple(squared), linear)
    )


def allocation_values(allocation: DayAllocation) -> dict:
    """Variable assignment of a day allocation for ``build_day_model``."""
    return {
        f"x[{a},{d}]": int(allocation.works[a, d])
        for a in range(allocation.agent_count)
        for d in range(allocation.num_days)
    }


def schedule_values_shift(schedule: Schedule, spec: ShiftPhaseSpec) -> dict:
    """Variable assignment of a schedule for ``build_shift_model``."""
    S = len(spec.catalog)
    values = {
        f"x[{a},{d},{s}]": 0 for a, d in spec.allocation.pairs() for s in range(S)
    }
    for a, d, s in schedule.assignments:
        key = f"x[{a},{d},{s}]"
        if key not in values:
            raise ValueError(
                f"schedule assigns agent {a} on day {d} outside the day allocation"
            )
        values[key] = 1
    return values


def schedule_values_single(schedule: Schedule, scenario: Scenario) -> dict:
    """Variable assignment of a schedule for ``build_single_model``."""
    values = {
        f"x[{a},{d},{s}]": 0
        for a in range(scenario.agent_count)
        for d in range(scenario.num_days)
        for s in range(len(scenario.shift_catalog))
    }
    for a, d, s in schedule.assignments:
        key = f"x[{a},{d},{s}]"
        if key not in values:
            raise ValueError(f"assignment ({a}, {d}, {s}) is out of range")
        values[key] = 1
    return values
