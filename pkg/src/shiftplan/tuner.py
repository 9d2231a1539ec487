"""Sweeping the idle-day penalty factor and scoring it by KL divergence.

Raising the penalty factor pulls scheduled head-counts away from "everyone on
the busiest days" toward the shape of the demand itself.  The sweep solves the
day phase for K = 0, 1, 2, ... and keeps the K whose normalized scheduled
day profile sits closest (in KL divergence) to the normalized required
profile, stopping after a configurable run of non-improving steps.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import SolveLimits
from .phases import DayPhaseResult, DayPhaseSpec, solve_day_allocation
from .domain import WeekPartition

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class DistributionPair:
    """Workload distribution against its target, with the smoothing epsilon."""

    workload: tuple[float, ...]
    target: tuple[float, ...]
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if len(self.workload) != len(self.target) or not self.workload:
            raise ValueError("distributions must share a positive length")
        for name, dist in (("workload", self.workload), ("target", self.target)):
            if min(dist) < 0:
                raise ValueError(f"{name} has negative entries")
            if abs(sum(dist) - 1.0) > 1e-9:
                raise ValueError(f"{name} does not sum to 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")


def kl_divergence(pair: DistributionPair) -> float:
    """D(workload || target), natural log, 0*log(0) = 0.

    The epsilon only smooths the denominator.  A workload mass sitting where
    ``target + epsilon`` is zero yields ``inf`` rather than an exception.
    """
    total = 0.0
    for lam, alpha in zip(pair.workload, pair.target):
        if lam == 0.0:
            continue
        denom = alpha + pair.epsilon
        if denom == 0.0:
            return math.inf
        total += lam * math.log(lam / denom)
    return total


def day_distribution(day_counts) -> tuple[float, ...]:
    """Scheduled per-day head-counts, normalized to sum 1."""
    counts = np.asarray(day_counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("cannot normalize: total scheduled head-count is zero")
    return tuple(float(x) for x in counts / total)


def target_distribution(day_requirements) -> tuple[float, ...]:
    """Required per-day head-counts, normalized to sum 1."""
    req = np.asarray(day_requirements, dtype=np.float64)
    total = req.sum()
    if total <= 0:
        raise ValueError("cannot normalize: total required head-count is zero")
    return tuple(float(x) for x in req / total)


@dataclass(frozen=True)
class StopConfig:
    """Sweep stopping rule: give up after ``patience`` non-improving K values."""

    patience: int = 2
    k_max: int = 50

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError("patience must be at least 1")
        if self.k_max < 0:
            raise ValueError("k_max must be non-negative")


@dataclass(frozen=True)
class SweepEntry:
    penalty_factor: int
    kl: float
    day_counts: tuple[int, ...]


@dataclass(frozen=True)
class SweepTrace:
    entries: tuple[SweepEntry, ...]
    selected: int  # chosen penalty factor (smallest K on KL ties)


@dataclass(frozen=True)
class TuneResult:
    trace: SweepTrace
    best: DayPhaseResult


def tune_penalty(
    day_requirements,
    agent_count: int,
    weeks: WeekPartition,
    per_k_limits: SolveLimits,
    stop: StopConfig = StopConfig(),
    epsilon: float = DEFAULT_EPSILON,
    backend: str = "local",
) -> TuneResult:
    """Sweep K = 0..k_max day solves, each on its own budget slice and seed.

    The K-th solve uses seed ``per_k_limits.seed + K`` so runs stay
    reproducible but the solves stay independent.  Strict improvement resets
    the patience counter; ties keep the earlier K.
    """
    if agent_count < 1:
        raise ValueError("tuning needs at least one agent")
    target = target_distribution(day_requirements)
    entries: list[SweepEntry] = []
    best_kl: float | None = None
    best_result: DayPhaseResult | None = None
    selected = 0
    stagnant = 0
    for k in range(stop.k_max + 1):
        limits_k = SolveLimits(
            time_budget_seconds=per_k_limits.time_budget_seconds,
            seed=per_k_limits.seed + k,
            max_exact_nodes=per_k_limits.max_exact_nodes,
            move_cap=per_k_limits.move_cap,
        )
        result = solve_day_allocation(
            DayPhaseSpec(day_requirements, agent_count, weeks, k),
            limits_k,
            backend=backend,
        )
        kl = kl_divergence(
            DistributionPair(day_distribution(result.day_counts), target, epsilon)
        )
        entries.append(
            SweepEntry(k, kl, tuple(int(x) for x in result.day_counts))
        )
        if best_kl is None or kl < best_kl:
            best_kl = kl
            best_result = result
            selected = k
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= stop.patience:
                break
    return TuneResult(SweepTrace(tuple(entries), selected), best_result)
