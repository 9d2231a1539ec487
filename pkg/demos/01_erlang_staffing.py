"""
Erlang-C staffing for a call-center day
=======================================

How many agents does each half-hour need to hit an 80/20 service level?
"""

import numpy as np

from shiftplan import (
    SlaSpec,
    erlang_c_wait_probability,
    required_agents,
    requirements_from_volumes,
    service_level,
)

sla = SlaSpec(target=0.8, threshold_seconds=20.0)
AHT = 300.0  # average handle time, seconds

# a single load first: 2 erlangs of offered traffic
load = 2.0
n = required_agents(load, AHT, sla)
print(f"offered load {load} erlangs -> {n} agents")
for agents in range(int(load), n + 2):
    wait = erlang_c_wait_probability(agents, load)
    sl = service_level(agents, load, AHT, sla.threshold_seconds)
    marker = " <- first to meet the goal" if agents == n else ""
    print(f"  {agents} agents: P(wait)={wait:.4f}  SL={sl:.4f}{marker}")

# adding agents helps less and less; the wait probability is convex-ish in n
print()
print("diminishing returns at 12 erlangs:")
for agents in (13, 15, 18, 24):
    print(f"  {agents} agents: P(wait)={erlang_c_wait_probability(agents, 12.0):.4f}")

# now a whole day of half-hour call volumes, one row per day of the week
volumes = np.array(
    [
        [12, 30, 55, 60, 48, 20],
        [10, 28, 50, 58, 45, 18],
        [11, 29, 52, 59, 46, 19],
        [12, 31, 56, 61, 49, 21],
        [14, 35, 60, 66, 52, 24],
        [6, 12, 20, 22, 16, 8],
        [4, 8, 14, 15, 11, 5],
    ]
)
req = requirements_from_volumes(volumes, AHT, sla, interval_seconds=1800.0)
print()
print("per-interval head-count needs (rows Mon..Sun):")
print(req.per_interval)
print(f"daily peaks: {req.per_day.tolist()}")
