"""Greedy solvers where every sensor recharges only at its home charger.

``solve_rcsc_tc_ge_tt`` handles T_c >= T_t: candidates are self-loops of
length k * L_t (k <= Q) swept by k sensors.  ``solve_rcsc_tt_gt_tc`` handles
T_t > T_c: each sensor runs Q_hat self-loops of length <= L_c per sweep
period at one charger.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .instance import Instance, induced_subgraph, require_valid
from .kernels import DEFAULT_CONFIG, KernelConfig, rooted_orienteering, rooted_team_orienteering
from .routes import (Itinerary, Schedule, Segment, Variant, VariantError,
                     place_sensors_on_loop)


@dataclass(frozen=True)
class TraceStep:
    segments: tuple[Segment, ...]
    cost: int
    gain: int
    remaining: int  # budget left before this step
    note: str = ""

    @property
    def unity(self) -> Fraction:
        return Fraction(self.gain, self.cost)


@dataclass
class GreedyTrace:
    budget: int
    steps: list[TraceStep] = field(default_factory=list)
    covered: frozenset[int] = frozenset()
    stop_reason: str = ""

    @property
    def spent(self) -> int:
        return sum(s.cost for s in self.steps)


def _schedule(its: list[Itinerary], variant: Variant) -> Schedule:
    covered = frozenset(t for it in its for t in it.loop.targets)
    return Schedule(tuple(its), covered, variant)


def solve_rcsc_tc_ge_tt(instance: Instance, kernels: KernelConfig = DEFAULT_CONFIG
                        ) -> tuple[Schedule, GreedyTrace]:
    p = require_valid(instance, allow_no_targets=True)
    if not p.charge_ge_sweep:
        raise VariantError("rcsc_tc_ge_tt needs T_c >= T_t")
    lt, q = p.sweep_length, p.q
    uncovered = set(instance.target_ids)
    left = instance.sensors
    trace = GreedyTrace(instance.sensors)
    its: list[Itinerary] = []
    while True:
        if left == 0:
            trace.stop_reason = "sensors exhausted"
            break
        if not uncovered:
            trace.stop_reason = "all targets covered"
            break
        view = induced_subgraph(instance, uncovered)
        best = None
        for c in instance.charger_ids:
            for k in range(1, min(q, left) + 1):
                res = rooted_orienteering(view, c, k * lt, kernels)
                key = (-Fraction(res.prize, k), k, c, res.route.segments[0].via)
                if best is None or key < best[0]:
                    best = (key, res, k)
        _, res, k = best
        if res.prize == 0:
            trace.stop_reason = "no candidate covers a new target"
            break
        trace.steps.append(TraceStep(res.segments, k, res.prize, left))
        its += place_sensors_on_loop(res.route, k, lt, instance.speed,
                                     first_sensor=len(its), segment_budget=k * lt)
        uncovered -= res.targets
        left -= k
    sched = _schedule(its, Variant.RCSC_TC_GE_TT)
    trace.covered = sched.covered
    return sched, trace


def solve_rcsc_tt_gt_tc(instance: Instance, kernels: KernelConfig = DEFAULT_CONFIG
                        ) -> tuple[Schedule, GreedyTrace]:
    p = require_valid(instance, allow_no_targets=True)
    if p.charge_ge_sweep:
        raise VariantError("rcsc_tt_gt_tc needs T_t > T_c")
    lc, q_hat = p.charge_length, p.q_hat
    uncovered = set(instance.target_ids)
    trace = GreedyTrace(instance.sensors)
    its: list[Itinerary] = []
    for used in range(instance.sensors):
        if not uncovered:
            trace.stop_reason = "all targets covered"
            break
        view = induced_subgraph(instance, uncovered)
        best = None
        for c in instance.charger_ids:
            res = rooted_team_orienteering(view, c, lc, q_hat, kernels)
            if best is None or res.prize > best.prize:
                best = res
        if best.prize == 0:
            trace.stop_reason = "no candidate covers a new target"
            break
        trace.steps.append(TraceStep(best.segments, 1, best.prize,
                                     instance.sensors - used))
        its.append(Itinerary(len(its), best.route, 0.0, lc))
        uncovered -= best.targets
    else:
        trace.stop_reason = "sensors exhausted"
    sched = _schedule(its, Variant.RCSC_TT_GT_TC)
    trace.covered = sched.covered
    return sched, trace
