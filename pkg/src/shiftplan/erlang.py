"""Erlang-C staffing: offered load, delay probability, and agent requirements.

The standard M/M/c pipeline for contact-center sizing:

    load      a = calls * AHT / interval_length        (erlangs)
    blocking  B(0, a) = 1,  B(k, a) = a B(k-1, a) / (k + a B(k-1, a))
    delay     C(n, a) = n B(n, a) / (n - a (1 - B(n, a)))
    service   SL(n, a) = 1 - C(n, a) * exp(-(n - a) * threshold / AHT)

A system with ``a >= n`` is saturated: the wait probability is pinned to 1.0
and the service level to 0.0 rather than evaluating the undefined formulas.
"""

import math
from dataclasses import dataclass

import numpy as np

from .domain import RequirementMatrix, frozen_grid


@dataclass(frozen=True)
class TrafficPoint:
    """Demand for one (day, interval) cell."""

    calls: float
    interval_seconds: float
    aht_seconds: float

    def __post_init__(self):
        if self.calls < 0:
            raise ValueError("calls must be non-negative")
        if self.interval_seconds <= 0:
            raise ValueError("interval_seconds must be positive")
        if self.aht_seconds <= 0:
            raise ValueError("aht_seconds must be positive")


@dataclass(frozen=True)
class SlaSpec:
    """Service-level goal: fraction of calls answered within the threshold."""

    target: float
    threshold_seconds: float

    def __post_init__(self):
        if not 0.0 < self.target <= 1.0:
            raise ValueError("target must lie in (0, 1]")
        if self.threshold_seconds < 0:
            raise ValueError("threshold_seconds must be non-negative")


def offered_load(point: TrafficPoint) -> float:
    """Offered load in erlangs for one traffic point."""
    return point.calls * point.aht_seconds / point.interval_seconds


def erlang_b_blocking(agents: int, load: float) -> float:
    """Erlang-B blocking probability via the stable recurrence."""
    if agents < 0:
        raise ValueError("agents must be non-negative")
    if load < 0:
        raise ValueError("load must be non-negative")
    b = 1.0
    for k in range(1, agents + 1):
        b = load * b / (k + load * b)
    return b


def erlang_c_wait_probability(agents: int, load: float) -> float:
    """Probability an arriving call has to wait (Erlang-C).

    Saturated systems (``load >= agents``) return 1.0.
    """
    if agents < 0:
        raise ValueError("agents must be non-negative")
    if load < 0:
        raise ValueError("load must be non-negative")
    if load >= agents:
        return 1.0
    b = erlang_b_blocking(agents, load)
    return agents * b / (agents - load * (1.0 - b))


def service_level(
    agents: int, load: float, aht_seconds: float, threshold_seconds: float
) -> float:
    """Fraction of calls answered within the threshold, clamped to [0, 1]."""
    if aht_seconds <= 0:
        raise ValueError("aht_seconds must be positive")
    if threshold_seconds < 0:
        raise ValueError("threshold_seconds must be non-negative")
    if load >= agents:
        return 0.0
    wait = erlang_c_wait_probability(agents, load)
    level = 1.0 - wait * math.exp(-(agents - load) * threshold_seconds / aht_seconds)
    return min(1.0, max(0.0, level))


def required_agents(load: float, aht_seconds: float, sla: SlaSpec) -> int:
    """Smallest integer head-count meeting the service-level goal.

    Zero load needs zero agents.  Otherwise the search starts just above the
    load (anything at or below it is saturated) and increments.
    """
    if load < 0:
        raise ValueError("load must be non-negative")
    if load == 0:
        return 0
    n = int(math.floor(load)) + 1
    while service_level(n, load, aht_seconds, sla.threshold_seconds) < sla.target:
        n += 1
    return n


def requirements_from_volumes(
    volumes, aht_seconds: float, sla: SlaSpec, interval_seconds: float
) -> RequirementMatrix:
    """Convert a (days x intervals) call-volume grid into head-count needs."""
    grid = np.asarray(volumes, dtype=np.float64)
    if grid.ndim != 2:
        raise ValueError("volumes grid must be 2-dimensional")
    if (grid < 0).any():
        raise ValueError("volumes must be non-negative")
    required = np.zeros(grid.shape, dtype=np.int64)
    for d in range(grid.shape[0]):
        for t in range(grid.shape[1]):
            point = TrafficPoint(float(grid[d, t]), interval_seconds, aht_seconds)
            required[d, t] = required_agents(offered_load(point), aht_seconds, sla)
    return RequirementMatrix.from_interval_grid(frozen_grid(required))
