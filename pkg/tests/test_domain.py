"""Core types: catalogs, partitions, requirements, schedules, coverage."""

from datetime import date, timedelta

import numpy as np
import pytest

from shiftplan.domain import (
    CostMatrix,
    DayAllocation,
    RequirementMatrix,
    Scenario,
    Schedule,
    ShiftCatalog,
    build_week_partition,
    coverage_from_schedule,
    deviation_profiles,
    validate_day_allocation,
    validate_scenario,
    validate_schedule,
)


def make_scenario(days=7, intervals=4, agents=3, shifts=((0, 2), (2, 2))):
    grid = np.ones((days, intervals), dtype=np.int64)
    return Scenario(
        name="t",
        days=tuple(date(2024, 1, 1) + timedelta(days=i) for i in range(days)),
        intervals_per_day=intervals,
        agent_count=agents,
        shift_catalog=ShiftCatalog(shifts, intervals),
        requirements=RequirementMatrix.from_interval_grid(grid),
    )


class TestShiftCatalog:
    def test_coverage_rows(self):
        cat = ShiftCatalog(((0, 3), (2, 2)), intervals_per_day=5)
        assert cat.coverage.tolist() == [[1, 1, 1, 0, 0], [0, 0, 1, 1, 0]]
        assert list(cat.covers(1)) == [2, 3]
        assert len(cat) == 2

    def test_valid_catalog_passes(self):
        assert ShiftCatalog(((0, 8), (8, 8)), 24).validate() == []

    def test_shift_past_day_boundary(self):
        problems = ShiftCatalog(((20, 8),), 24).validate()
        assert problems == ["shift 0 exceeds day boundary"]

    def test_duplicate_and_bad_length(self):
        problems = ShiftCatalog(((0, 2), (0, 2), (3, 0)), 8).validate()
        assert "shift 1 duplicates (0, 2)" in problems
        assert "shift 2 has non-positive length 0" in problems

    def test_empty_catalog(self):
        assert "shift catalog is empty" in ShiftCatalog((), 8).validate()

    def test_coverage_is_readonly(self):
        cat = ShiftCatalog(((0, 2),), 4)
        with pytest.raises(ValueError):
            cat.coverage[0, 0] = 0


class TestWeekPartition:
    def test_two_weeks(self):
        part = build_week_partition(14)
        assert part.count == 2
        assert list(part.days_of(0)) == list(range(7))
        assert list(part.days_of(1)) == list(range(7, 14))
        assert part.week_of(6) == 0
        assert part.week_of(7) == 1

    @pytest.mark.parametrize("n", [0, 1, 6, 8, 13])
    def test_partial_weeks_rejected(self, n):
        with pytest.raises(ValueError, match="not a multiple of 7"):
            build_week_partition(n)


class TestRequirementMatrix:
    def test_per_day_is_row_max(self):
        req = RequirementMatrix.from_interval_grid([[1, 5, 2], [0, 0, 3]])
        assert req.per_day.tolist() == [5, 3]
        assert req.days == 2 and req.intervals == 3

    def test_validate_catches_tampered_per_day(self):
        req = RequirementMatrix.from_interval_grid([[1, 2]])
        bad = RequirementMatrix(req.per_interval, np.array([9]))
        assert bad.validate() == ["per_day is not the per-interval row maximum"]

    def test_negative_entries_flagged(self):
        req = RequirementMatrix.from_interval_grid([[1, -1]])
        assert "negative interval requirement" in req.validate()

    def test_equality_by_value(self):
        a = RequirementMatrix.from_interval_grid([[1, 2]])
        b = RequirementMatrix.from_interval_grid([[1, 2]])
        c = RequirementMatrix.from_interval_grid([[2, 1]])
        assert a == b and a != c


class TestCostMatrix:
    def test_missing_entries_cost_zero(self):
        cost = CostMatrix({(0, 0, 0): 2.5})
        assert cost.value(1, 0, 0) == 0.0
        sched = Schedule.from_triples([(0, 0, 0), (1, 0, 0)])
        assert cost.total(sched) == 2.5

    def test_negative_cost_rejected(self):
        with pytest.raises(ValueError, match="negative cost"):
            CostMatrix({(0, 0, 0): -1.0})

    def test_agent_uniform_table(self):
        cost = CostMatrix({(0, 2, 1): 3.0, (1, 2, 1): 3.0})
        assert cost.agent_uniform_table(2) == {(2, 1): 3.0}
        # a third agent would get the implicit 0.0, breaking uniformity
        assert cost.agent_uniform_table(3) is None

    def test_nonuniform_returns_none(self):
        cost = CostMatrix({(0, 0, 0): 1.0, (1, 0, 0): 2.0})
        assert cost.agent_uniform_table(2) is None


class TestScenarioValidation:
    def test_valid(self):
        assert validate_scenario(make_scenario()) == []

    def test_bad_horizon(self):
        scn = make_scenario(days=6)
        assert any("multiple of 7" in p for p in validate_scenario(scn))

    def test_catalog_grid_mismatch(self):
        scn = make_scenario()
        bad = Scenario(
            name=scn.name,
            days=scn.days,
            intervals_per_day=scn.intervals_per_day,
            agent_count=scn.agent_count,
            shift_catalog=ShiftCatalog(((0, 2),), intervals_per_day=8),
            requirements=scn.requirements,
        )
        problems = validate_scenario(bad)
        assert "shift catalog interval grid differs from scenario" in problems

    def test_bad_sla(self):
        scn = make_scenario()
        bad = Scenario(
            name=scn.name,
            days=scn.days,
            intervals_per_day=scn.intervals_per_day,
            agent_count=scn.agent_count,
            shift_catalog=scn.shift_catalog,
            requirements=scn.requirements,
            sla_target=0.0,
        )
        assert "sla target must lie in (0, 1]" in validate_scenario(bad)


class TestDayAllocation:
    def test_counts_and_pairs(self):
        alloc = DayAllocation.from_works([[1, 0, 1], [0, 1, 1]])
        assert alloc.day_counts.tolist() == [1, 1, 2]
        assert alloc.pairs() == ((0, 0), (0, 2), (1, 1), (1, 2))
        assert alloc.agents_on(2) == [0, 1]

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError, match="0/1"):
            DayAllocation.from_works([[2, 0]])

    def test_weekly_quota_checked(self):
        works = np.zeros((1, 7), dtype=np.int8)
        works[0, :5] = 1
        alloc = DayAllocation.from_works(works)
        assert validate_day_allocation(alloc, 1, build_week_partition(7)) == []
        works4 = works.copy()
        works4[0, 4] = 0
        problems = validate_day_allocation(
            DayAllocation.from_works(works4), 1, build_week_partition(7)
        )
        assert problems == ["agent 0 works 4 days in week 0, expected 5"]


def five_day_schedule(agents=2, shift=0):
    """Every agent on days 0..4 with one shift: satisfies the weekly quota."""
    return Schedule.from_triples(
        [(a, d, shift) for a in range(agents) for d in range(5)]
    )


class TestSchedule:
    def test_coverage_counts_agents_once_per_day(self):
        cat = ShiftCatalog(((0, 2), (1, 2)), 4)
        sched = Schedule.from_triples([(0, 0, 0), (1, 0, 1)])
        cov = coverage_from_schedule(sched, cat, day_count=2, agent_count=2)
        assert cov.per_interval.tolist() == [[1, 2, 1, 0], [0, 0, 0, 0]]
        assert cov.per_day.tolist() == [2, 0]

    def test_deviation_signs(self):
        cat = ShiftCatalog(((0, 1),), 2)
        req = RequirementMatrix.from_interval_grid([[2, 1]])
        cov = coverage_from_schedule(
            Schedule.from_triples([(0, 0, 0)]), cat, 1, 1
        )
        dev = deviation_profiles(req, cov)
        assert dev.per_interval.tolist() == [[1, 1]]
        assert dev.per_day.tolist() == [1]

    def test_out_of_range_raises(self):
        cat = ShiftCatalog(((0, 1),), 2)
        with pytest.raises(ValueError, match="agent index"):
            coverage_from_schedule(
                Schedule.from_triples([(5, 0, 0)]), cat, 1, 2
            )

    def test_validate_schedule_accepts_quota(self):
        cat = ShiftCatalog(((0, 2),), 4)
        sched = five_day_schedule()
        assert (
            validate_schedule(
                sched,
                agent_count=2,
                day_count=7,
                catalog=cat,
                weeks=build_week_partition(7),
            )
            == []
        )

    def test_validate_schedule_rejects_double_booking(self):
        cat = ShiftCatalog(((0, 2), (2, 2)), 4)
        triples = list(five_day_schedule(agents=1).assignments) + [(0, 0, 1)]
        problems = validate_schedule(
            Schedule.from_triples(triples),
            agent_count=1,
            day_count=7,
            catalog=cat,
            weeks=build_week_partition(7),
        )
        assert any("more than one shift" in p for p in problems)

    def test_validate_schedule_rejects_short_week(self):
        cat = ShiftCatalog(((0, 2),), 4)
        sched = Schedule.from_triples([(0, d, 0) for d in range(4)])
        problems = validate_schedule(
            sched,
            agent_count=1,
            day_count=7,
            catalog=cat,
            weeks=build_week_partition(7),
        )
        assert problems == ["agent 0 works 4 days in week 0, expected 5"]

    def test_sorted_triples(self):
        sched = Schedule.from_triples([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert sched.sorted_triples() == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
        assert len(sched) == 3
