"""Search backends over homogeneous count structures.

Agents are interchangeable, so instead of per-agent binaries the solvers work
on counts: how many agents follow each weekly day pattern (the C(7,5) = 21
five-day subsets of a week), how many agents take each shift on a day, and for
the joint problem how many agents follow each (pattern, shifts) week plan.
Every count state satisfies the hard constraints by construction; materializing
counts back to per-agent assignments is a canonical, deterministic expansion.

Two backends share each formulation: an exhaustive enumerator that refuses
oversized spaces (the audit oracle) and a seeded first-improvement local
search with restart kicks, budgeted by wall clock or by an exact move cap.
"""

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .domain import (
    DAYS_PER_WEEK,
    WORKDAYS_PER_WEEK,
    DayAllocation,
    Schedule,
    ShiftCatalog,
    WeekPartition,
)
from .model import Deadline, SearchSpaceError, SolveLimits, SolveStatus

# All 5-day patterns of a week, in lexicographic order.
DAY_PATTERNS: tuple[tuple[int, ...], ...] = tuple(
    itertools.combinations(range(DAYS_PER_WEEK), WORKDAYS_PER_WEEK)
)


@dataclass(frozen=True)
class PatternSpace:
    """Catalog of discrete choices the count solvers range over."""

    day_patterns: tuple[tuple[int, ...], ...]
    shift_options: tuple[int, ...]

    @classmethod
    def build(cls, catalog: ShiftCatalog | None = None) -> "PatternSpace":
        options = tuple(range(len(catalog))) if catalog is not None else ()
        return cls(DAY_PATTERNS, options)


@dataclass(frozen=True)
class CountState:
    """Aggregate solution: counts keyed per phase.

    day:    (week, pattern) -> agents on that 5-day pattern
    shift:  (day, shift) -> agents taking that shift
    single: (week, plan) -> agents on that week plan, where a plan is a
            tuple of five (day_offset, shift) pairs sorted by day
    """

    phase: str
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class SearchResult:
    status: SolveStatus
    objective: float
    counts: CountState
    trace: tuple
    evaluations: int
    wall_seconds: float


# ---------------------------------------------------------------------------
# day-level objective helpers
# ---------------------------------------------------------------------------


def day_term(required: int, scheduled: int, agent_count: int, penalty_factor: int) -> int:
    """One day's objective: squared deviation plus squared idle penalty."""
    u = required - scheduled
    v = penalty_factor * (agent_count - scheduled)
    return u * u + v * v


def week_optimal_day_counts(
    r_week, agent_count: int, penalty_factor: int
) -> tuple[tuple[int, ...], int]:
    """Best per-day head-counts for one week, by greedy marginal allocation.

    The objective is separable and convex in the day counts, and any
    head-count vector with row sum 5*agents and per-day cap agents is
    realizable by 5-day patterns, so unit-by-unit greedy is exact.
    """
    r = [int(x) for x in r_week]
    counts = [0] * DAYS_PER_WEEK
    for _ in range(WORKDAYS_PER_WEEK * agent_count):
        best_day = -1
        best_delta = None
        for d in range(DAYS_PER_WEEK):
            if counts[d] >= agent_count:
                continue
            delta = day_term(r[d], counts[d] + 1, agent_count, penalty_factor) - day_term(
                r[d], counts[d], agent_count, penalty_factor
            )
            if best_delta is None or delta < best_delta:
                best_delta = delta
                best_day = d
        counts[best_day] += 1
    objective = sum(
        day_term(r[d], counts[d], agent_count, penalty_factor)
        for d in range(DAYS_PER_WEEK)
    )
    return tuple(counts), objective


def patterns_from_day_counts(day_counts, agent_count: int) -> dict[tuple, int]:
    """Realize per-day head-counts as counts over 5-day patterns.

    Constructive and canonical: each agent in turn takes the five days with
    the largest remaining demand (ties to the earliest day).  Raises if the
    head-counts are not realizable, so callers get a feasibility certificate
    rather than a silent approximation.
    """
    remaining = [int(x) for x in day_counts]
    if len(remaining) != DAYS_PER_WEEK:
        raise ValueError("expected one head-count per day of the week")
    if min(remaining) < 0 or max(remaining, default=0) > agent_count:
        raise ValueError("day head-counts outside [0, agent_count]")
    if sum(remaining) != WORKDAYS_PER_WEEK * agent_count:
        raise ValueError("day head-counts do not sum to 5 * agent_count")
    counts: dict[tuple, int] = {}
    for _ in range(agent_count):
        order = sorted(range(DAYS_PER_WEEK), key=lambda d: (-remaining[d], d))
        pattern = tuple(sorted(order[:WORKDAYS_PER_WEEK]))
        for d in pattern:
            remaining[d] -= 1
        counts[pattern] = counts.get(pattern, 0) + 1
    if any(remaining):
        raise ValueError("day head-counts are not realizable as 5-day patterns")
    return counts


def _count_bounded_vectors(bound: int, total: int, length: int) -> int:
    """Number of integer vectors in [0, bound]^length summing to total."""
    ways = [1] + [0] * total
    for _ in range(length):
        nxt = [0] * (total + 1)
        running = 0
        for s in range(total + 1):
            running += ways[s]
            if s - bound - 1 >= 0:
                running -= ways[s - bound - 1]
            nxt[s] = running
        ways = nxt
    return ways[total]


def _bounded_vectors(bound: int, total: int, length: int):
    """Yield all vectors in [0, bound]^length with the given sum, lexicographic."""
    vec = [0] * length

    def rec(pos: int, left: int):
        if pos == length - 1:
            vec[pos] = left
            yield tuple(vec)
            return
        tail = length - pos - 1
        lo = max(0, left - bound * tail)
        hi = min(bound, left)
        for v in range(lo, hi + 1):
            vec[pos] = v
            yield from rec(pos + 1, left - v)

    if 0 <= total <= bound * length:
        yield from rec(0, total)


# ---------------------------------------------------------------------------
# exact backend
# ---------------------------------------------------------------------------


def solve_exact_day(
    r_day, agent_count: int, weeks: WeekPartition, penalty_factor: int, limits: SolveLimits
) -> SearchResult:
    """Exhaustive day-allocation optimum, week by week.

    Enumerates every per-day head-count vector (the objective depends on
    nothing else) and certifies the winner by constructing actual pattern
    counts for it.  First-found minima make ties lexicographic.
    """
    r = np.asarray(r_day, dtype=np.int64)
    _check_day_inputs(r, agent_count, weeks, penalty_factor)
    per_week = _count_bounded_vectors(
        agent_count, WORKDAYS_PER_WEEK * agent_count, DAYS_PER_WEEK
    )
    nodes = per_week * weeks.count
    if nodes > limits.max_exact_nodes:
        raise SearchSpaceError(
            f"day search space has {nodes} states, cap is {limits.max_exact_nodes}"
        )
    deadline = Deadline(limits)
    counts: dict = {}
    objective = 0
    for w in range(weeks.count):
        base = weeks.days_of(w).start
        r_week = [int(r[base + d]) for d in range(DAYS_PER_WEEK)]
        best_vec = None
        best_obj = None
        for vec in _bounded_vectors(
            agent_count, WORKDAYS_PER_WEEK * agent_count, DAYS_PER_WEEK
        ):
            deadline.spend()
            obj = sum(
                day_term(r_week[d], vec[d], agent_count, penalty_factor)
                for d in range(DAYS_PER_WEEK)
            )
            if best_obj is None or obj < best_obj:
                best_obj = obj
                best_vec = vec
        for pattern, n in patterns_from_day_counts(best_vec, agent_count).items():
            counts[(w, pattern)] = n
        objective += best_obj
    return SearchResult(
        SolveStatus.OPTIMAL,
        objective,
        CountState("day", counts),
        (objective,),
        deadline.evaluations,
        deadline.elapsed(),
    )


def _compositions(total: int, parts: int):
    """All ways to split ``total`` over ``parts`` non-negative slots, lexicographic."""
    vec = [0] * parts

    def rec(pos: int, left: int):
        if pos == parts - 1:
            vec[pos] = left
            yield tuple(vec)
            return
        for v in range(left + 1):
            vec[pos] = v
            yield from rec(pos + 1, left - v)

    yield from rec(0, total)


def _best_day_composition(
    r_row: np.ndarray, n: int, catalog: ShiftCatalog, unit_cost_row, deadline: Deadline
):
    """Exhaustive best shift-count split of ``n`` agents on one day."""
    S = len(catalog)
    best_vec = None
    best_obj = None
    scheduled = np.zeros(len(r_row), dtype=np.int64)
    for vec in _compositions(n, S):
        deadline.spend()
        scheduled[:] = 0
        for s, y in enumerate(vec):
            if y:
                span = catalog.covers(s)
                scheduled[span.start : span.stop] += y
        diff = r_row - scheduled
        obj = int(diff @ diff)
        if unit_cost_row is not None:
            obj = obj + sum(vec[s] * unit_cost_row.get(s, 0.0) for s in range(S))
        if best_obj is None or obj < best_obj:
            best_obj = obj
            best_vec = vec
    return best_vec, best_obj


def solve_exact_shift(
    r_dt,
    day_counts,
    catalog: ShiftCatalog,
    limits: SolveLimits,
    unit_cost: dict | None = None,
) -> SearchResult:
    """Exhaustive shift-allocation optimum, day by day."""
    r = np.asarray(r_dt, dtype=np.int64)
    n_d = [int(x) for x in day_counts]
    _check_shift_inputs(r, n_d, catalog)
    S = len(catalog)
    nodes = sum(math.comb(n + S - 1, S - 1) for n in n_d)
    if nodes > limits.max_exact_nodes:
        raise SearchSpaceError(
            f"shift search space has {nodes} states, cap is {limits.max_exact_nodes}"
        )
    deadline = Deadline(limits)
    counts: dict = {}
    objective = 0
    for d in range(r.shape[0]):
        cost_row = _cost_row(unit_cost, d)
        vec, obj = _best_day_composition(r[d], n_d[d], catalog, cost_row, deadline)
        for s, y in enumerate(vec):
            if y:
                counts[(d, s)] = y
        objective = objective + obj
    return SearchResult(
        SolveStatus.OPTIMAL,
        objective,
        CountState("shift", counts),
        (objective,),
        deadline.evaluations,
        deadline.elapsed(),
    )


def solve_exact_single(
    r_dt,
    agent_count: int,
    weeks: WeekPartition,
    catalog: ShiftCatalog,
    limits: SolveLimits,
    unit_cost: dict | None = None,
) -> SearchResult:
    """Exhaustive joint optimum.

    Decomposes exactly: given per-day head-counts, the best shift split of a
    day is independent of every other day, so the search tabulates per-day
    optima for every possible head-count and then enumerates per-week
    head-count vectors.
    """
    r = np.asarray(r_dt, dtype=np.int64)
    if agent_count < 0:
        raise ValueError("agent_count must be non-negative")
    if r.shape[0] != weeks.count * DAYS_PER_WEEK:
        raise ValueError("requirement rows do not match the week partition")
    S = len(catalog)
    if S == 0:
        raise ValueError("shift catalog is empty")
    table_nodes = r.shape[0] * math.comb(agent_count + S, S)
    vec_nodes = weeks.count * _count_bounded_vectors(
        agent_count, WORKDAYS_PER_WEEK * agent_count, DAYS_PER_WEEK
    )
    if table_nodes + vec_nodes > limits.max_exact_nodes:
        raise SearchSpaceError(
            f"joint search space has {table_nodes + vec_nodes} states,"
            f" cap is {limits.max_exact_nodes}"
        )
    deadline = Deadline(limits)
    # per-day tables: best composition and value for each possible head-count
    best_comp: list[list[tuple]] = []
    best_val: list[list[float]] = []
    for d in range(r.shape[0]):
        cost_row = _cost_row(unit_cost, d)
        comps, vals = [], []
        for n in range(agent_count + 1):
            vec, obj = _best_day_composition(r[d], n, catalog, cost_row, deadline)
            comps.append(vec)
            vals.append(obj)
        best_comp.append(comps)
        best_val.append(vals)
    counts: dict = {}
    objective = 0
    for w in range(weeks.count):
        base = weeks.days_of(w).start
        best_vec = None
        best_obj = None
        for vec in _bounded_vectors(
            agent_count, WORKDAYS_PER_WEEK * agent_count, DAYS_PER_WEEK
        ):
            deadline.spend()
            obj = sum(best_val[base + d][vec[d]] for d in range(DAYS_PER_WEEK))
            if best_obj is None or obj < best_obj:
                best_obj = obj
                best_vec = vec
        objective = objective + best_obj
        for plan, n in _plans_from_week(
            best_vec, [best_comp[base + d][best_vec[d]] for d in range(DAYS_PER_WEEK)], agent_count
        ).items():
            counts[(w, plan)] = n
    return SearchResult(
        SolveStatus.OPTIMAL,
        objective,
        CountState("single", counts),
        (objective,),
        deadline.evaluations,
        deadline.elapsed(),
    )


def _plans_from_week(day_head_counts, day_compositions, agent_count: int) -> dict:
    """Combine per-day head-counts and shift splits into week-plan counts."""
    pattern_counts = patterns_from_day_counts(day_head_counts, agent_count)
    agent_patterns: list[tuple] = []
    for pattern in sorted(pattern_counts):
        agent_patterns.extend([pattern] * pattern_counts[pattern])
    agent_pairs: list[list[tuple[int, int]]] = [[] for _ in range(agent_count)]
    for d in range(DAYS_PER_WEEK):
        working = [a for a in range(agent_count) if d in agent_patterns[a]]
        units: list[int] = []
        for s, y in enumerate(day_compositions[d]):
            units.extend([s] * y)
        if len(units) != len(working):
            raise ValueError("shift split does not match the day head-count")
        for agent, shift in zip(working, units):
            agent_pairs[agent].append((d, shift))
    plans: dict = {}
    for pairs in agent_pairs:
        plan = tuple(sorted(pairs))
        plans[plan] = plans.get(plan, 0) + 1
    return plans


def _cost_row(unit_cost: dict | None, day: int) -> dict | None:
    if unit_cost is None:
        return None
    row = {s: c for (d, s), c in unit_cost.items() if d == day}
    return row


# ---------------------------------------------------------------------------
# local-search backend
# ---------------------------------------------------------------------------


def _check_day_inputs(r, agent_count, weeks, penalty_factor):
    if agent_count < 0:
        raise ValueError("agent_count must be non-negative")
    if penalty_factor < 0:
        raise ValueError("penalty_factor must be non-negative")
    if r.ndim != 1 or r.shape[0] != weeks.count * DAYS_PER_WEEK:
        raise ValueError("day requirements do not match the week partition")


def _check_shift_inputs(r, n_d, catalog):
    if r.ndim != 2:
        raise ValueError("interval requirements must be a (days, intervals) grid")
    if len(n_d) != r.shape[0]:
        raise ValueError("one head-count per day is required")
    if min(n_d, default=0) < 0:
        raise ValueError("day head-counts must be non-negative")
    if len(catalog) == 0:
        raise ValueError("shift catalog is empty")
    if catalog.intervals_per_day != r.shape[1]:
        raise ValueError("catalog interval grid differs from requirements")


def local_search_day(
    r_day, agent_count: int, weeks: WeekPartition, penalty_factor: int, limits: SolveLimits
) -> SearchResult:
    """Seeded descent over pattern counts, one unit move at a time.

    A move shifts one agent from one 5-day pattern to another inside the same
    week.  On stagnation the search compares each week against its exact
    head-count optimum (cheap, since the objective is separable and convex in
    the day counts) and re-encodes the week when that still improves; when no
    week improves the search has converged.
    """
    r = np.asarray(r_day, dtype=np.int64)
    _check_day_inputs(r, agent_count, weeks, penalty_factor)
    deadline = Deadline(limits)
    A, K, W = agent_count, penalty_factor, weeks.count
    if A == 0:
        obj = int(r @ r)
        return SearchResult(
            SolveStatus.OPTIMAL, obj, CountState("day", {}), (obj,), 0, deadline.elapsed()
        )

    scheduled = np.zeros(r.shape[0], dtype=np.int64)
    counts: list[dict[tuple, int]] = []
    # greedy start: each agent unit covers the five currently worst days
    for w in range(W):
        base = weeks.days_of(w).start
        week_counts: dict[tuple, int] = {}
        for _ in range(A):
            gains = []
            for d in range(DAYS_PER_WEEK):
                p = int(scheduled[base + d])
                gain = day_term(int(r[base + d]), p, A, K) - day_term(
                    int(r[base + d]), p + 1, A, K
                )
                gains.append((-gain, d))
            gains.sort()
            pattern = tuple(sorted(d for _, d in gains[:WORKDAYS_PER_WEEK]))
            for d in pattern:
                scheduled[base + d] += 1
            week_counts[pattern] = week_counts.get(pattern, 0) + 1
        counts.append(week_counts)

    def term(day_abs: int, p: int) -> int:
        return day_term(int(r[day_abs]), p, A, K)

    objective = sum(term(d, int(scheduled[d])) for d in range(r.shape[0]))
    trace = [objective]

    converged = False
    while not deadline.exhausted and not converged:
        improved = False
        for w in range(W):
            base = weeks.days_of(w).start
            for p_from in sorted(counts[w]):
                if counts[w].get(p_from, 0) == 0 or deadline.exhausted:
                    continue
                from_set = set(p_from)
                for p_to in DAY_PATTERNS:
                    if p_to == p_from:
                        continue
                    deadline.spend()
                    delta = 0
                    to_set = set(p_to)
                    for d in from_set - to_set:
                        p = int(scheduled[base + d])
                        delta += term(base + d, p - 1) - term(base + d, p)
                    for d in to_set - from_set:
                        p = int(scheduled[base + d])
                        delta += term(base + d, p + 1) - term(base + d, p)
                    if delta < 0:
                        counts[w][p_from] -= 1
                        if counts[w][p_from] == 0:
                            del counts[w][p_from]
                        counts[w][p_to] = counts[w].get(p_to, 0) + 1
                        for d in from_set - to_set:
                            scheduled[base + d] -= 1
                        for d in to_set - from_set:
                            scheduled[base + d] += 1
                        objective += delta
                        trace.append(objective)
                        improved = True
                        break
                    if deadline.exhausted:
                        break
        if not improved:
            # stagnation repair: exact per-week head-count optimum
            repaired = False
            for w in range(W):
                base = weeks.days_of(w).start
                deadline.spend(WORKDAYS_PER_WEEK * A * DAYS_PER_WEEK)
                opt_vec, opt_obj = week_optimal_day_counts(
                    r[base : base + DAYS_PER_WEEK], A, K
                )
                week_obj = sum(
                    term(base + d, int(scheduled[base + d])) for d in range(DAYS_PER_WEEK)
                )
                if opt_obj < week_obj:
                    counts[w] = patterns_from_day_counts(opt_vec, A)
                    for d in range(DAYS_PER_WEEK):
                        scheduled[base + d] = opt_vec[d]
                    objective += opt_obj - week_obj
                    trace.append(objective)
                    repaired = True
            converged = not repaired

    state = CountState(
        "day", {(w, p): n for w in range(W) for p, n in counts[w].items() if n > 0}
    )
    status = SolveStatus.OPTIMAL if objective == 0 else SolveStatus.FEASIBLE
    return SearchResult(
        status, objective, state, tuple(trace), deadline.evaluations, deadline.elapsed()
    )


class _IntervalBook:
    """Running required-minus-scheduled grid with O(shift length) move deltas."""

    def __init__(self, r_dt: np.ndarray):
        self.u = r_dt.astype(np.int64).copy()

    def objective(self) -> int:
        return int((self.u * self.u).sum())

    def day_objective(self, day: int) -> int:
        row = self.u[day]
        return int(row @ row)

    def delta_add(self, day: int, span: range) -> int:
        seg = self.u[day, span.start : span.stop]
        return int(len(seg) - 2 * seg.sum())

    def delta_remove(self, day: int, span: range) -> int:
        seg = self.u[day, span.start : span.stop]
        return int(len(seg) + 2 * seg.sum())

    def delta_swap(self, day: int, span_out: range, span_in: range) -> int:
        # overlapping parts cancel; evaluate on the set differences only
        delta = 0
        for a, b in _range_minus(span_out, span_in):
            seg = self.u[day, a:b]
            delta += int((b - a) + 2 * seg.sum())
        for a, b in _range_minus(span_in, span_out):
            seg = self.u[day, a:b]
            delta += int((b - a) - 2 * seg.sum())
        return delta

    def apply_add(self, day: int, span: range) -> None:
        self.u[day, span.start : span.stop] -= 1

    def apply_remove(self, day: int, span: range) -> None:
        self.u[day, span.start : span.stop] += 1


def _range_minus(a: range, b: range):
    """[a) minus [b) as up to two (start, stop) pieces."""
    p1 = (a.start, min(a.stop, max(a.start, b.start)))
    p2 = (max(a.start, min(a.stop, b.stop)), a.stop)
    return [p for p in (p1, p2) if p[0] < p[1]]


def local_search_shift(
    r_dt,
    day_counts,
    catalog: ShiftCatalog,
    limits: SolveLimits,
    unit_cost: dict | None = None,
) -> SearchResult:
    """Seeded descent over per-day shift counts with restart kicks.

    Moves swap one agent between two shifts of the same day.  When a full
    scan finds nothing, one day's split is re-randomized (seeded) and the
    descent resumes; the best state ever seen is returned.
    """
    r = np.asarray(r_dt, dtype=np.int64)
    n_d = [int(x) for x in day_counts]
    _check_shift_inputs(r, n_d, catalog)
    deadline = Deadline(limits)
    rng = random.Random(limits.seed)
    D, S = r.shape[0], len(catalog)
    book = _IntervalBook(r)
    counts = [[0] * S for _ in range(D)]
    costs = [{} if unit_cost is None else (_cost_row(unit_cost, d) or {}) for d in range(D)]

    def unit_c(d: int, s: int):
        return costs[d].get(s, 0.0) if unit_cost is not None else 0

    # marginal-gain greedy start, one agent unit at a time
    for d in range(D):
        for _ in range(n_d[d]):
            best_s, best_delta = 0, None
            for s in range(S):
                delta = book.delta_add(d, catalog.covers(s)) + unit_c(d, s)
                if best_delta is None or delta < best_delta:
                    best_s, best_delta = s, delta
            counts[d][best_s] += 1
            book.apply_add(d, catalog.covers(best_s))

    cost_total = sum(counts[d][s] * unit_c(d, s) for d in range(D) for s in range(S))
    objective = book.objective() + cost_total
    best_obj = objective
    best_counts = [row[:] for row in counts]
    trace = [best_obj]
    busy_days = [d for d in range(D) if n_d[d] > 0]

    if not busy_days or best_obj == 0:
        # nothing to place, or a perfect split: either way this is the optimum
        return SearchResult(
            SolveStatus.OPTIMAL,
            best_obj,
            _shift_state(best_counts),
            tuple(trace),
            deadline.evaluations,
            deadline.elapsed(),
        )

    while not deadline.exhausted and best_obj != 0:
        improved = False
        for d in busy_days:
            if deadline.exhausted:
                break
            for s_out in range(S):
                if counts[d][s_out] == 0 or deadline.exhausted:
                    continue
                for s_in in range(S):
                    if s_in == s_out:
                        continue
                    deadline.spend()
                    delta = book.delta_swap(d, catalog.covers(s_out), catalog.covers(s_in))
                    delta += unit_c(d, s_in) - unit_c(d, s_out)
                    if delta < 0:
                        counts[d][s_out] -= 1
                        counts[d][s_in] += 1
                        book.apply_remove(d, catalog.covers(s_out))
                        book.apply_add(d, catalog.covers(s_in))
                        objective += delta
                        improved = True
                        if objective < best_obj:
                            best_obj = objective
                            best_counts = [row[:] for row in counts]
                            trace.append(best_obj)
                        break
                    if deadline.exhausted:
                        break
        if not improved and not deadline.exhausted:
            # kick: re-randomize one day's split, keep the incumbent aside
            d = busy_days[rng.randrange(len(busy_days))]
            deadline.spend(n_d[d])
            before = book.day_objective(d) + sum(
                counts[d][s] * unit_c(d, s) for s in range(S)
            )
            for s in range(S):
                if counts[d][s]:
                    for _ in range(counts[d][s]):
                        book.apply_remove(d, catalog.covers(s))
                    counts[d][s] = 0
            for _ in range(n_d[d]):
                s = rng.randrange(S)
                counts[d][s] += 1
                book.apply_add(d, catalog.covers(s))
            after = book.day_objective(d) + sum(
                counts[d][s] * unit_c(d, s) for s in range(S)
            )
            objective += after - before

    status = SolveStatus.OPTIMAL if best_obj == 0 else SolveStatus.FEASIBLE
    return SearchResult(
        status,
        best_obj,
        _shift_state(best_counts),
        tuple(trace),
        deadline.evaluations,
        deadline.elapsed(),
    )


def _shift_state(count_rows: list[list[int]]) -> CountState:
    return CountState(
        "shift",
        {
            (d, s): n
            for d, row in enumerate(count_rows)
            for s, n in enumerate(row)
            if n > 0
        },
    )


def local_search_single(
    r_dt,
    agent_count: int,
    weeks: WeekPartition,
    catalog: ShiftCatalog,
    limits: SolveLimits,
    unit_cost: dict | None = None,
) -> SearchResult:
    """Seeded descent over week plans (joint day-and-shift choice).

    Moves either retarget one working day of one agent unit to a different
    shift, or swap one working day for a free day (keeping the shift).  Kicks
    re-randomize a whole agent-week plan.
    """
    r = np.asarray(r_dt, dtype=np.int64)
    if r.ndim != 2 or r.shape[0] != weeks.count * DAYS_PER_WEEK:
        raise ValueError("requirement rows do not match the week partition")
    if agent_count < 0:
        raise ValueError("agent_count must be non-negative")
    S = len(catalog)
    if S == 0:
        raise ValueError("shift catalog is empty")
    if catalog.intervals_per_day != r.shape[1]:
        raise ValueError("catalog interval grid differs from requirements")
    deadline = Deadline(limits)
    rng = random.Random(limits.seed)
    W = weeks.count
    book = _IntervalBook(r)

    def unit_c(day_abs: int, s: int):
        if unit_cost is None:
            return 0
        return unit_cost.get((day_abs, s), 0.0)

    if agent_count == 0:
        obj = book.objective()
        return SearchResult(
            SolveStatus.OPTIMAL,
            obj,
            CountState("single", {}),
            (obj,),
            0,
            deadline.elapsed(),
        )

    # joint greedy start: each unit takes the five best (day, best-shift) slots
    counts: list[dict[tuple, int]] = [dict() for _ in range(W)]
    for w in range(W):
        base = weeks.days_of(w).start
        for _ in range(agent_count):
            day_best: list[tuple[float, int, int]] = []
            for d in range(DAYS_PER_WEEK):
                best_s, best_delta = 0, None
                for s in range(S):
                    delta = book.delta_add(base + d, catalog.covers(s)) + unit_c(base + d, s)
                    if best_delta is None or delta < best_delta:
                        best_s, best_delta = s, delta
                day_best.append((best_delta, d, best_s))
            day_best.sort()
            plan = tuple(sorted((d, s) for _, d, s in day_best[:WORKDAYS_PER_WEEK]))
            for d, s in plan:
                book.apply_add(base + d, catalog.covers(s))
            counts[w][plan] = counts[w].get(plan, 0) + 1

    cost_total = sum(
        n * sum(unit_c(weeks.days_of(w).start + d, s) for d, s in plan)
        for w in range(W)
        for plan, n in counts[w].items()
    )
    objective = book.objective() + cost_total
    best_obj = objective
    best_counts = [dict(c) for c in counts]
    trace = [best_obj]

    def apply_plan_change(w: int, plan: tuple, new_plan: tuple) -> None:
        counts[w][plan] -= 1
        if counts[w][plan] == 0:
            del counts[w][plan]
        counts[w][new_plan] = counts[w].get(new_plan, 0) + 1

    while not deadline.exhausted and best_obj != 0:
        improved = False
        for w in range(W):
            base = weeks.days_of(w).start
            if deadline.exhausted:
                break
            for plan in sorted(counts[w]):
                if counts[w].get(plan, 0) == 0 or deadline.exhausted:
                    continue
                accepted = False
                used_days = {d for d, _ in plan}
                for pos in range(WORKDAYS_PER_WEEK):
                    d, s = plan[pos]
                    # retarget the shift on one working day
                    for s_new in range(S):
                        if s_new == s:
                            continue
                        deadline.spend()
                        delta = book.delta_swap(
                            base + d, catalog.covers(s), catalog.covers(s_new)
                        )
                        delta += unit_c(base + d, s_new) - unit_c(base + d, s)
                        if delta < 0:
                            book.apply_remove(base + d, catalog.covers(s))
                            book.apply_add(base + d, catalog.covers(s_new))
                            new_plan = tuple(
                                sorted(plan[:pos] + ((d, s_new),) + plan[pos + 1 :])
                            )
                            apply_plan_change(w, plan, new_plan)
                            objective += delta
                            accepted = True
                            break
                        if deadline.exhausted:
                            break
                    if accepted or deadline.exhausted:
                        break
                    # swap the working day, shift carried along
                    for d_new in range(DAYS_PER_WEEK):
                        if d_new in used_days:
                            continue
                        deadline.spend()
                        delta = book.delta_remove(base + d, catalog.covers(s)) + book.delta_add(
                            base + d_new, catalog.covers(s)
                        )
                        delta += unit_c(base + d_new, s) - unit_c(base + d, s)
                        if delta < 0:
                            book.apply_remove(base + d, catalog.covers(s))
                            book.apply_add(base + d_new, catalog.covers(s))
                            new_plan = tuple(
                                sorted(plan[:pos] + ((d_new, s),) + plan[pos + 1 :])
                            )
                            apply_plan_change(w, plan, new_plan)
                            objective += delta
                            accepted = True
                            break
                        if deadline.exhausted:
                            break
                    if accepted or deadline.exhausted:
                        break
                if accepted:
                    improved = True
                    if objective < best_obj:
                        best_obj = objective
                        best_counts = [dict(c) for c in counts]
                        trace.append(best_obj)
        if not improved and not deadline.exhausted:
            # kick: rebuild one agent-week plan at random
            w = rng.randrange(W)
            base = weeks.days_of(w).start
            plans = sorted(counts[w])
            plan = plans[rng.randrange(len(plans))]
            deadline.spend(WORKDAYS_PER_WEEK)
            days_new = sorted(rng.sample(range(DAYS_PER_WEEK), WORKDAYS_PER_WEEK))
            new_plan = tuple((d, rng.randrange(S)) for d in days_new)
            delta = 0
            for d, s in plan:
                delta += book.delta_remove(base + d, catalog.covers(s)) - unit_c(base + d, s)
                book.apply_remove(base + d, catalog.covers(s))
            for d, s in new_plan:
                delta += book.delta_add(base + d, catalog.covers(s)) + unit_c(base + d, s)
                book.apply_add(base + d, catalog.covers(s))
            apply_plan_change(w, plan, new_plan)
            objective += delta

    state = CountState(
        "single",
        {(w, plan): n for w in range(W) for plan, n in best_counts[w].items() if n > 0},
    )
    status = SolveStatus.OPTIMAL if best_obj == 0 else SolveStatus.FEASIBLE
    return SearchResult(
        status,
        best_obj,
        state,
        tuple(trace),
        deadline.evaluations,
        deadline.elapsed(),
    )


# ---------------------------------------------------------------------------
# canonical materialization and count extraction
# ---------------------------------------------------------------------------


def materialize_day(
    state: CountState, agent_count: int, weeks: WeekPartition
) -> DayAllocation:
    """Expand day-pattern counts to per-agent working days.

    Canonical: within each week, the lowest agent index takes the
    lexicographically smallest pattern.
    """
    if state.phase != "day":
        raise ValueError(f"expected a day count state, got {state.phase!r}")
    day_count = weeks.count * DAYS_PER_WEEK
    works = np.zeros((agent_count, day_count), dtype=np.int8)
    by_week: dict[int, dict] = {w: {} for w in range(weeks.count)}
    for (w, pattern), n in state.counts.items():
        if n < 0:
            raise ValueError("negative pattern count")
        if w not in by_week:
            raise ValueError(f"week index {w} out of range")
        if len(pattern) != WORKDAYS_PER_WEEK or sorted(set(pattern)) != sorted(pattern):
            raise ValueError(f"invalid day pattern {pattern}")
        by_week[w][tuple(pattern)] = by_week[w].get(tuple(pattern), 0) + n
    for w in range(weeks.count):
        total = sum(by_week[w].values())
        if total != agent_count:
            raise ValueError(
                f"week {w} pattern counts sum to {total}, expected {agent_count}"
            )
        base = weeks.days_of(w).start
        agent = 0
        for pattern in sorted(by_week[w]):
            for _ in range(by_week[w][pattern]):
                for d in pattern:
                    works[agent, base + d] = 1
                agent += 1
    return DayAllocation.from_works(works)


def materialize_shift(state: CountState, allocation: DayAllocation) -> Schedule:
    """Hand each working agent a shift: agents ascending, shifts in index order."""
    if state.phase != "shift":
        raise ValueError(f"expected a shift count state, got {state.phase!r}")
    per_day: dict[int, list[int]] = {}
    for (d, s), n in state.counts.items():
        if n < 0:
            raise ValueError("negative shift count")
        per_day.setdefault(d, []).extend([s] * n)
    triples: list[tuple[int, int, int]] = []
    for d in range(allocation.num_days):
        agents = allocation.agents_on(d)
        units = sorted(per_day.get(d, []))
        if len(units) != len(agents):
            raise ValueError(
                f"day {d} has {len(units)} shift units for {len(agents)} working agents"
            )
        triples.extend((a, d, s) for a, s in zip(agents, units))
    return Schedule.from_triples(triples)


def materialize_single(
    state: CountState, agent_count: int, weeks: WeekPartition
) -> Schedule:
    """Expand week-plan counts to agents: lowest index, lexicographically first plan."""
    if state.phase != "single":
        raise ValueError(f"expected a single count state, got {state.phase!r}")
    by_week: dict[int, dict] = {w: {} for w in range(weeks.count)}
    for (w, plan), n in state.counts.items():
        if w not in by_week:
            raise ValueError(f"week index {w} out of range")
        if n < 0:
            raise ValueError("negative plan count")
        by_week[w][plan] = by_week[w].get(plan, 0) + n
    triples: list[tuple[int, int, int]] = []
    for w in range(weeks.count):
        total = sum(by_week[w].values())
        if total != agent_count:
            raise ValueError(
                f"week {w} plan counts sum to {total}, expected {agent_count}"
            )
        base = weeks.days_of(w).start
        agent = 0
        for plan in sorted(by_week[w]):
            days = [d for d, _ in plan]
            if len(set(days)) != WORKDAYS_PER_WEEK:
                raise ValueError(f"invalid week plan {plan}")
            for _ in range(by_week[w][plan]):
                triples.extend((agent, base + d, s) for d, s in plan)
                agent += 1
    return Schedule.from_triples(triples)


def day_counts_of(allocation: DayAllocation, weeks: WeekPartition) -> CountState:
    """Tally an allocation back into (week, pattern) counts."""
    counts: dict = {}
    for agent in range(allocation.agent_count):
        for w in range(weeks.count):
            days = weeks.days_of(w)
            pattern = tuple(
                int(d) - days.start
                for d in np.nonzero(allocation.works[agent, days.start : days.stop])[0]
            )
            key = (w, pattern)
            counts[key] = counts.get(key, 0) + 1
    return CountState("day", counts)


def shift_counts_of(schedule: Schedule) -> CountState:
    counts: dict = {}
    for _, d, s in schedule.assignments:
        counts[(d, s)] = counts.get((d, s), 0) + 1
    return CountState("shift", counts)


def single_counts_of(schedule: Schedule, weeks: WeekPartition) -> CountState:
    per_agent_week: dict[tuple[int, int], list] = {}
    for a, d, s in schedule.assignments:
        w = weeks.week_of(d)
        base = weeks.days_of(w).start
        per_agent_week.setdefault((a, w), []).append((d - base, s))
    counts: dict = {}
    for (a, w), pairs in per_agent_week.items():
        key = (w, tuple(sorted(pairs)))
        counts[key] = counts.get(key, 0) + 1
    return CountState("single", counts)


# ---------------------------------------------------------------------------
# backend registry (plug-in seam for external solvers)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolverBackend:
    """A trio of solve callables sharing the bundled signatures."""

    name: str
    day: object
    shift: object
    single: object


_BACKENDS: dict[str, SolverBackend] = {}


def register_backend(backend: SolverBackend) -> None:
    _BACKENDS[backend.name] = backend


def get_backend(name: str) -> SolverBackend:
    if name not in _BACKENDS:
        known = ", ".join(sorted(_BACKENDS))
        raise ValueError(f"unknown solver backend {name!r} (known: {known})")
    return _BACKENDS[name]


register_backend(
    SolverBackend("local", local_search_day, local_search_shift, local_search_single)
)
register_backend(
    SolverBackend("exact", solve_exact_day, solve_exact_shift, solve_exact_single)
)
