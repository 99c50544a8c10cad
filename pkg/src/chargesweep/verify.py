"""Continuous-time schedule checker, independent of how the schedule was built.

Every sensor moves at constant speed around its loop forever, so its visits
to any node are periodic with the loop's lap time.  Lengths are re-measured
from the distance matrix; the stored segment lengths are only checked for
consistency.

Visits from sensors whose loops have the same lap time are merged exactly
(their joint pattern has that period).  Sensors with different lap times are
not merged: a target's gap is then the smallest gap any one period group
achieves on its own, which can only overstate the true worst gap.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any

from .instance import EPS_LEN, Instance, InstanceError
from .routes import Schedule


@dataclass(frozen=True)
class CoverageReport:
    verified_covered: frozenset[int]
    per_target_gap: dict[int, float]
    per_sensor_charge_gap: dict[int, float]
    feasible: bool
    violations: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        def num(x):
            return None if math.isinf(x) else x
        return {
            "feasible": self.feasible,
            "objective": len(self.verified_covered),
            "verified_covered": sorted(self.verified_covered),
            "per_target_gap": {str(t): num(g) for t, g in sorted(self.per_target_gap.items())},
            "per_sensor_charge_gap": {str(s): num(g) for s, g in
                                      sorted(self.per_sensor_charge_gap.items())},
            "violations": list(self.violations),
        }


def objective(report: CoverageReport) -> int:
    return len(report.verified_covered)


def _cyclic_gap(times: list[float], period: float) -> float:
    if period <= 0.0:
        return 0.0
    if not times:
        return math.inf
    ts = sorted(times)
    gap = ts[0] + period - ts[-1]
    for a, b in zip(ts, ts[1:]):
        gap = max(gap, b - a)
    return gap


def _check_nodes(instance: Instance, schedule: Schedule):
    for it in schedule.itineraries:
        for seg in it.loop.segments:
            for c in (seg.start, seg.end):
                if not 0 <= c < instance.n_chargers:
                    raise InstanceError(f"sensor {it.sensor_id}: unknown charger {c}")
            for t in seg.via:
                if not 0 <= t < instance.n_targets:
                    raise InstanceError(f"sensor {it.sensor_id}: unknown target {t}")
    for t in schedule.covered:
        if not 0 <= t < instance.n_targets:
            raise InstanceError(f"covered set names unknown target {t}")


def verify(instance: Instance, schedule: Schedule) -> CoverageReport:
    _check_nodes(instance, schedule)
    rows = instance.rows
    v = instance.speed
    eps_t = instance.eps_time
    n_t = instance.n_targets
    violations: list[str] = []

    ids = [it.sensor_id for it in schedule.itineraries]
    if len(set(ids)) != len(ids):
        violations.append("duplicate sensor ids")
    if len(set(ids)) > instance.sensors:
        violations.append(f"{len(set(ids))} sensors used, only {instance.sensors} available")

    # nodes within EPS_LEN of each target count as visiting it
    near = [[u for u in range(instance.n_nodes) if rows[u][t] <= EPS_LEN]
            for t in range(n_t)]
    watchers: dict[int, list[int]] = defaultdict(list)
    for t in range(n_t):
        for u in near[t]:
            watchers[u].append(t)

    # period -> target -> visit times within one period
    groups: dict[float, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    charge_gap: dict[int, float] = {}
    for it in schedule.itineraries:
        sid = it.sensor_id
        if not math.isfinite(it.phase):
            violations.append(f"sensor {sid}: non-finite phase")
            charge_gap[sid] = math.inf
            continue
        for k, seg in enumerate(it.loop.segments):
            measured = seg.measure(instance)
            if abs(measured - seg.length) > EPS_LEN:
                violations.append(
                    f"sensor {sid} segment {k}: stored length {seg.length!r} "
                    f"!= measured {measured!r}")
        walk = it.loop.node_walk(instance)
        lap = it.loop.lap_length(instance)
        period = lap / v
        if schedule.variant.restricted:
            home = it.loop.start
            if it.loop.chargers != {home}:
                violations.append(f"sensor {sid}: visits a charger other than its home {home}")
            ok_chargers = {instance.charger_node(home)}
        else:
            ok_chargers = set(range(n_t, instance.n_nodes))
        charge_arcs = [arc for node, arc in walk if node in ok_chargers]
        charge_gap[sid] = _cyclic_gap(charge_arcs, lap) / v if lap > 0 else 0.0
        per_target = groups[period]
        for node, arc in walk:
            for t in watchers.get(node, ()):
                per_target[t].append((it.phase + arc / v) % period if period > 0 else 0.0)

    gaps: dict[int, float] = {t: math.inf for t in range(n_t)}
    for period, per_target in groups.items():
        for t, times in per_target.items():
            gaps[t] = min(gaps[t], _cyclic_gap(times, period))

    tt, tc = instance.sweep_period, instance.charge_period
    verified = frozenset(t for t, g in gaps.items() if g <= tt + eps_t)
    for sid, g in sorted(charge_gap.items()):
        if g > tc + eps_t:
            violations.append(f"sensor {sid}: charge gap {g:g} exceeds T_c={tc:g}")
    for t in sorted(schedule.covered):
        if gaps[t] > tt + eps_t:
            violations.append(f"target {t}: claimed covered but revisit gap {gaps[t]:g} "
                              f"exceeds T_t={tt:g}")
    return CoverageReport(verified, gaps, charge_gap, not violations, tuple(violations))
