"""Core problem-instance and solution types plus coverage accounting.

Time is discretized into equal intervals per day (hourly by default).  The
planning horizon is an exact number of 7-day weeks, every agent works exactly
five days in each week, and a working agent takes exactly one shift that day.
Agents are opaque indices 0..N-1 and are interchangeable: nothing in the
problem data distinguishes one agent from another.

Everything in this module is an immutable value; the functions are pure.
"""

from dataclasses import dataclass, field
from datetime import date

import numpy as np

DAYS_PER_WEEK = 7
WORKDAYS_PER_WEEK = 5


def frozen_grid(values, dtype=np.int64) -> np.ndarray:
    """Copy ``values`` into a read-only numpy array."""
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# problem-side types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftCatalog:
    """The set of daily shifts an agent can take.

    Each shift is a ``(start_interval, length_intervals)`` block that must fit
    inside a single day.  ``coverage[s, t]`` is 1 when shift ``s`` covers
    interval ``t``.
    """

    shifts: tuple[tuple[int, int], ...]
    intervals_per_day: int = 24
    coverage: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "shifts", tuple((int(s), int(l)) for s, l in self.shifts)
        )
        cov = np.zeros((len(self.shifts), self.intervals_per_day), dtype=np.int8)
        for idx, (start, length) in enumerate(self.shifts):
            if 0 <= start and length >= 1 and start + length <= self.intervals_per_day:
                cov[idx, start : start + length] = 1
        cov.setflags(write=False)
        object.__setattr__(self, "coverage", cov)

    def __len__(self) -> int:
        return len(self.shifts)

    def covers(self, shift: int) -> range:
        """Interval indices covered by ``shift``."""
        start, length = self.shifts[shift]
        return range(start, start + length)

    def validate(self) -> list[str]:
        problems: list[str] = []
        if self.intervals_per_day < 1:
            problems.append("intervals_per_day must be >= 1")
        if not self.shifts:
            problems.append("shift catalog is empty")
        seen: set[tuple[int, int]] = set()
        for idx, (start, length) in enumerate(self.shifts):
            if length < 1:
                problems.append(f"shift {idx} has non-positive length {length}")
            if start < 0:
                problems.append(f"shift {idx} has negative start {start}")
            elif start + length > self.intervals_per_day:
                problems.append(f"shift {idx} exceeds day boundary")
            if (start, length) in seen:
                problems.append(f"shift {idx} duplicates ({start}, {length})")
            seen.add((start, length))
        return problems


@dataclass(frozen=True)
class WeekPartition:
    """Grouping of day indices into consecutive 7-day weeks."""

    weeks: tuple[tuple[int, int], ...]  # (first_day, day_after_last) per week

    @property
    def count(self) -> int:
        return len(self.weeks)

    def days_of(self, week: int) -> range:
        start, stop = self.weeks[week]
        return range(start, stop)

    def week_of(self, day: int) -> int:
        return day // DAYS_PER_WEEK


def build_week_partition(day_count: int) -> WeekPartition:
    """Split ``day_count`` days into full weeks; partial weeks are rejected."""
    if day_count <= 0 or day_count % DAYS_PER_WEEK != 0:
        raise ValueError(
            f"horizon not a multiple of 7: got {day_count} days"
        )
    return WeekPartition(
        tuple(
            (w * DAYS_PER_WEEK, (w + 1) * DAYS_PER_WEEK)
            for w in range(day_count // DAYS_PER_WEEK)
        )
    )


@dataclass(frozen=True, eq=False)
class RequirementMatrix:
    """Required head-counts: per (day, interval) and the per-day peak."""

    per_interval: np.ndarray  # shape (days, intervals), int
    per_day: np.ndarray  # shape (days,), int: max over intervals of that day

    @classmethod
    def from_interval_grid(cls, grid) -> "RequirementMatrix":
        per_interval = frozen_grid(grid)
        if per_interval.ndim != 2:
            raise ValueError("requirements grid must be 2-dimensional")
        per_day = frozen_grid(per_interval.max(axis=1))
        return cls(per_interval, per_day)

    @property
    def days(self) -> int:
        return self.per_interval.shape[0]

    @property
    def intervals(self) -> int:
        return self.per_interval.shape[1]

    def validate(self) -> list[str]:
        problems: list[str] = []
        if self.per_interval.ndim != 2:
            problems.append("per_interval must be 2-dimensional")
            return problems
        if (self.per_interval < 0).any():
            problems.append("negative interval requirement")
        if self.per_day.shape != (self.days,):
            problems.append("per_day length does not match day count")
        elif not np.array_equal(self.per_day, self.per_interval.max(axis=1)):
            problems.append("per_day is not the per-interval row maximum")
        return problems

    def __eq__(self, other) -> bool:
        if not isinstance(other, RequirementMatrix):
            return NotImplemented
        return np.array_equal(self.per_interval, other.per_interval) and np.array_equal(
            self.per_day, other.per_day
        )


@dataclass(frozen=True)
class CostMatrix:
    """Optional linear assignment costs, keyed by (agent, day, shift).

    Missing entries cost zero.  The bundled optimizers treat agents as
    interchangeable, so they require a matrix whose cost depends on the
    (day, shift) pair only; arbitrary per-agent matrices are still accepted
    for evaluation and reporting.
    """

    cost: dict

    def __post_init__(self):
        for key, value in self.cost.items():
            if value < 0:
                raise ValueError(f"negative cost at {key}")

    def value(self, agent: int, day: int, shift: int) -> float:
        return self.cost.get((agent, day, shift), 0.0)

    def total(self, schedule: "Schedule") -> float:
        return sum(self.value(a, d, s) for a, d, s in schedule.assignments)

    def agent_uniform_table(self, agent_count: int) -> dict | None:
        """Return {(day, shift): cost} when every agent is priced alike, else None."""
        table: dict[tuple[int, int], float] = {}
        by_pair: dict[tuple[int, int], dict[int, float]] = {}
        for (a, d, s), c in self.cost.items():
            by_pair.setdefault((d, s), {})[a] = c
        for pair, per_agent in by_pair.items():
            values = {per_agent.get(a, 0.0) for a in range(agent_count)}
            if len(values) > 1:
                return None
            cost = values.pop() if values else 0.0
            if cost:
                table[pair] = cost
        return table


@dataclass(frozen=True)
class Scenario:
    """A complete scheduling problem instance."""

    name: str
    days: tuple[date, ...]
    intervals_per_day: int
    agent_count: int
    shift_catalog: ShiftCatalog
    requirements: RequirementMatrix
    sla_target: float = 0.8
    sla_threshold_seconds: float = 20.0
    aht_seconds: float = 300.0

    @property
    def num_days(self) -> int:
        return len(self.days)

    def week_partition(self) -> WeekPartition:
        return build_week_partition(self.num_days)


def validate_scenario(scenario: Scenario) -> list[str]:
    """Collect every contract violation in ``scenario`` (empty list = valid)."""
    problems: list[str] = []
    n_days = scenario.num_days
    if n_days == 0 or n_days % DAYS_PER_WEEK != 0:
        problems.append(f"horizon not a multiple of 7: got {n_days} days")
    if any(
        scenario.days[i] >= scenario.days[i + 1] for i in range(n_days - 1)
    ):
        problems.append("days are not strictly increasing")
    if scenario.intervals_per_day < 1:
        problems.append("intervals_per_day must be >= 1")
    if scenario.agent_count < 0:
        problems.append("agent_count must be >= 0")
    if scenario.shift_catalog.intervals_per_day != scenario.intervals_per_day:
        problems.append("shift catalog interval grid differs from scenario")
    problems.extend(scenario.shift_catalog.validate())
    problems.extend(scenario.requirements.validate())
    if scenario.requirements.per_interval.ndim == 2:
        if scenario.requirements.days != n_days:
            problems.append("requirements day count differs from scenario days")
        if scenario.requirements.intervals != scenario.intervals_per_day:
            problems.append("requirements interval count differs from scenario")
    if not 0.0 < scenario.sla_target <= 1.0:
        problems.append("sla target must lie in (0, 1]")
    if scenario.sla_threshold_seconds <= 0:
        problems.append("sla threshold must be positive")
    if scenario.aht_seconds <= 0:
        problems.append("average handling time must be positive")
    return problems


# ---------------------------------------------------------------------------
# solution-side types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DayAllocation:
    """Which days each agent works: ``works[a, d]`` is 0/1."""

    works: np.ndarray  # shape (agents, days), int8
    day_counts: np.ndarray  # shape (days,), int64 column sums

    @classmethod
    def from_works(cls, works) -> "DayAllocation":
        grid = frozen_grid(works, dtype=np.int8)
        if grid.ndim != 2:
            raise ValueError("works grid must be 2-dimensional")
        if not np.isin(grid, (0, 1)).all():
            raise ValueError("works grid must be 0/1")
        return cls(grid, frozen_grid(grid.sum(axis=0, dtype=np.int64)))

    @property
    def agent_count(self) -> int:
        return self.works.shape[0]

    @property
    def num_days(self) -> int:
        return self.works.shape[1]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Assigned (agent, day) pairs, sorted."""
        agents, days = np.nonzero(self.works)
        order = np.lexsort((days, agents))
        return tuple((int(agents[i]), int(days[i])) for i in order)

    def agents_on(self, day: int) -> list[int]:
        return [int(a) for a in np.nonzero(self.works[:, day])[0]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DayAllocation):
            return NotImplemented
        return np.array_equal(self.works, other.works)


@dataclass(frozen=True)
class Schedule:
    """Sparse set of (agent, day, shift) assignment triples."""

    assignments: frozenset[tuple[int, int, int]]

    @classmethod
    def from_triples(cls, triples) -> "Schedule":
        return cls(frozenset((int(a), int(d), int(s)) for a, d, s in triples))

    def sorted_triples(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(sorted(self.assignments))

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass(frozen=True, eq=False)
class CoverageProfile:
    """Scheduled head-counts: per (day, interval) and distinct agents per day."""

    per_interval: np.ndarray
    per_day: np.ndarray


@dataclass(frozen=True, eq=False)
class DeviationProfile:
    """Signed shortfall (required minus scheduled), interval and day level."""

    per_interval: np.ndarray
    per_day: np.ndarray


def coverage_from_schedule(
    schedule: Schedule,
    catalog: ShiftCatalog,
    day_count: int,
    agent_count: int,
) -> CoverageProfile:
    """Aggregate a schedule into interval-level and day-level head-counts."""
    per_interval = np.zeros((day_count, catalog.intervals_per_day), dtype=np.int64)
    day_agents: list[set[int]] = [set() for _ in range(day_count)]
    for agent, day, shift in schedule.assignments:
        if not 0 <= agent < agent_count:
            raise ValueError(f"agent index {agent} out of range")
        if not 0 <= day < day_count:
            raise ValueError(f"day index {day} out of range")
        if not 0 <= shift < len(catalog):
            raise ValueError(f"shift index {shift} out of range")
        start, length = catalog.shifts[shift]
        per_interval[day, start : start + length] += 1
        day_agents[day].add(agent)
    per_day = np.array([len(s) for s in day_agents], dtype=np.int64)
    per_interval.setflags(write=False)
    per_day.setflags(write=False)
    return CoverageProfile(per_interval, per_day)


def deviation_profiles(
    requirements: RequirementMatrix, coverage: CoverageProfile
) -> DeviationProfile:
    """Signed required-minus-scheduled deviations at both granularities."""
    if requirements.per_interval.shape != coverage.per_interval.shape:
        raise ValueError("requirement and coverage shapes differ")
    per_interval = requirements.per_interval - coverage.per_interval
    per_day = requirements.per_day - coverage.per_day
    per_interval.setflags(write=False)
    per_day.setflags(write=False)
    return DeviationProfile(per_interval, per_day)


def validate_day_allocation(
    allocation: DayAllocation, agent_count: int, weeks: WeekPartition
) -> list[str]:
    problems: list[str] = []
    if allocation.agent_count != agent_count:
        problems.append(
            f"allocation has {allocation.agent_count} agents, expected {agent_count}"
        )
    for w in range(weeks.count):
        days = weeks.days_of(w)
        week_days = allocation.works[:, days.start : days.stop].sum(axis=1)
        for agent in np.nonzero(week_days != WORKDAYS_PER_WEEK)[0]:
            problems.append(
                f"agent {int(agent)} works {int(week_days[agent])} days in week {w},"
                f" expected {WORKDAYS_PER_WEEK}"
            )
    return problems


def validate_schedule(
    schedule: Schedule,
    *,
    agent_count: int,
    day_count: int,
    catalog: ShiftCatalog,
    weeks: WeekPartition,
) -> list[str]:
    """Check index ranges, one-shift-per-day, and the weekly workday quota."""
    problems: list[str] = []
    seen_pairs: set[tuple[int, int]] = set()
    week_days = np.zeros((agent_count, weeks.count), dtype=np.int64)
    for agent, day, shift in sorted(schedule.assignments):
        if not 0 <= agent < agent_count:
            problems.append(f"agent index {agent} out of range")
            continue
        if not 0 <= day < day_count:
            problems.append(f"day index {day} out of range")
            continue
        if not 0 <= shift < len(catalog):
            problems.append(f"shift index {shift} out of range")
            continue
        if (agent, day) in seen_pairs:
            problems.append(f"agent {agent} has more than one shift on day {day}")
            continue
        seen_pairs.add((agent, day))
        week_days[agent, weeks.week_of(day)] += 1
    if not problems:
        for agent in range(agent_count):
            for w in range(weeks.count):
                if week_days[agent, w] != WORKDAYS_PER_WEEK:
                    problems.append(
                        f"agent {agent} works {int(week_days[agent, w])} days in"
                        f" week {w}, expected {WORKDAYS_PER_WEEK}"
                    )
    return problems
