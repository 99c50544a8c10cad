"""Greedy solvers for two chargers ``a`` (id 0) and ``b`` (id 1), free recharging.

``solve_2csc_tc_ge_tt`` (T_c >= T_t) adds mutual loops a->b->a to the
self-loop candidates; a mutual loop whose a->b and b->a walks are at most
j1 * L_t and j2 * L_t long costs j1 + j2 sensors.

``solve_2csc_tt_gt_tc`` (T_t > T_c) picks M * Q_hat walks of length <= L_c
one or two at a time, keeps the mix chainable, then assigns the walks to
sensors in groups of Q_hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .instance import EPS_LEN, Instance, View, induced_subgraph, require_valid
from .kernels import DEFAULT_CONFIG, KernelConfig, KernelResult, rooted_orienteering, st_loop
from .rcsc import GreedyTrace, TraceStep, _schedule
from .routes import (Itinerary, Segment, Variant, VariantError, chain_segments,
                     place_sensors_on_loop)

A, B = 0, 1


def _require_two(instance: Instance):
    if instance.n_chargers != 2:
        raise VariantError(f"requires exactly 2 chargers, got {instance.n_chargers}")


def is_reasonable(k1: int, k2: int, k3: int, q_hat: int) -> bool:
    """Can k1 a-loops, k2 b-loops and k3 mutual pairs be split into sensor periods?"""
    return k3 >= 1 or (k1 % q_hat == 0 and k2 % q_hat == 0)


@dataclass(frozen=True)
class CompositionState:
    k1: int
    k2: int
    k3: int
    remaining: int

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3, self.remaining) < 0:
            raise ValueError(f"negative count in {self}")

    def reasonable(self, q_hat: int) -> bool:
        return is_reasonable(self.k1, self.k2, self.k3, q_hat)


# -- T_c >= T_t -------------------------------------------------------------

def solve_2csc_tc_ge_tt(instance: Instance, kernels: KernelConfig = DEFAULT_CONFIG):
    _require_two(instance)
    p = require_valid(instance, allow_no_targets=True)
    if not p.charge_ge_sweep:
        raise VariantError("csc2_tc_ge_tt needs T_c >= T_t")
    lt, q = p.sweep_length, p.q
    d_ab = instance.rows[instance.charger_node(A)][instance.charger_node(B)]
    q_bar = max(1, math.ceil(d_ab / lt - EPS_LEN))
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

        def offer(res: KernelResult, cost: int, rank: tuple):
            nonlocal best
            key = (-Fraction(res.prize, cost), cost, rank,
                   tuple(s.via for s in res.segments))
            if best is None or key < best[0]:
                best = (key, res, cost, rank)

        for c in (A, B):
            for k in range(1, min(q, left) + 1):
                offer(rooted_orienteering(view, c, k * lt, kernels), k, (c, k, 0))
        for j1 in range(q_bar, q + 1):
            for j2 in range(q_bar, q + 1):
                if j1 + j2 <= min(left, 2 * q):
                    offer(st_loop(view, A, B, j1 * lt, j2 * lt, kernels), j1 + j2,
                          (2, j1, j2))
        _, res, cost, rank = best
        if res.prize == 0:
            trace.stop_reason = "no candidate covers a new target"
            break
        note = "mutual" if rank[0] == 2 else "self"
        trace.steps.append(TraceStep(res.segments, cost, res.prize, left, note))
        its += place_sensors_on_loop(res.route, cost, lt, instance.speed,
                                     first_sensor=len(its),
                                     segment_budget=max(rank[1:]) * lt if rank[0] == 2
                                     else cost * lt)
        uncovered -= res.targets
        left -= cost
    sched = _schedule(its, Variant.CSC2_TC_GE_TT)
    trace.covered = sched.covered
    return sched, trace


# -- T_t > T_c --------------------------------------------------------------

def _need(k: int, q_hat: int) -> int:
    return -k % q_hat


class _Round:
    """Candidate generation on one residual view."""

    def __init__(self, instance: Instance, uncovered: set[int], lc: float,
                 kernels: KernelConfig):
        self.instance = instance
        self.view = induced_subgraph(instance, uncovered)
        self.lc = lc
        self.kernels = kernels

    def self_loop(self, c: int, view: View | None = None) -> KernelResult:
        return rooted_orienteering(view or self.view, c, self.lc, self.kernels)

    def mutual(self) -> KernelResult:
        return st_loop(self.view, A, B, self.lc, self.lc, self.kernels)

    def pair(self, first: int, second: int) -> tuple[tuple[Segment, ...], int]:
        r1 = self.self_loop(first)
        r2 = self.self_loop(second, self.view.without(r1.targets))
        return r1.segments + r2.segments, r1.prize + r2.prize


def solve_2csc_tt_gt_tc(instance: Instance, kernels: KernelConfig = DEFAULT_CONFIG):
    _require_two(instance)
    p = require_valid(instance, allow_no_targets=True)
    if p.charge_ge_sweep:
        raise VariantError("csc2_tt_gt_tc needs T_t > T_c")
    lc, lt, q_hat = p.charge_length, p.sweep_length, p.q_hat
    slots = instance.sensors * q_hat
    d_ab = instance.rows[instance.charger_node(A)][instance.charger_node(B)]
    mutual_ok = d_ab <= lc + EPS_LEN
    uncovered = set(instance.target_ids)
    trace = GreedyTrace(slots)
    chosen: list[Segment] = []
    k1 = k2 = k3 = 0

    def take(segs, gain, cost, note):
        nonlocal k1, k2, k3
        trace.steps.append(TraceStep(tuple(segs), cost, gain, slots - len(chosen), note))
        chosen.extend(segs)
        for s in segs:
            uncovered.difference_update(s.via)
        if not segs[0].is_self:
            k3 += 1
        else:
            for s in segs:
                if s.start == A:
                    k1 += 1
                else:
                    k2 += 1

    while len(chosen) < slots:
        used = len(chosen)
        rnd = _Round(instance, uncovered, lc, kernels)
        if used == slots - 2 and k3 == 0:
            # last two walks with no mutual pair yet: keep the mix chainable
            ra, rb = k1 % q_hat, k2 % q_hat
            options = []
            if ra == 0 and rb == 0:
                case = "a"
                if q_hat == 2:
                    options += [("aa", A, A), ("bb", B, B)]
            elif ra == 0:
                case = "b"
                options.append(("bb", B, B))
            elif rb == 0:
                case = "c"
                options.append(("aa", A, A))
            else:
                case = "d"
                options += [("ab", A, B), ("ba", B, A)]
            best = None
            if mutual_ok:
                m = rnd.mutual()
                best = (m.prize, 0, m.segments, "mutual")
            for rank, (name, first, second) in enumerate(options, start=1):
                n1 = k1 + (first == A) + (second == A)
                n2 = k2 + (first == B) + (second == B)
                if not is_reasonable(n1, n2, 0, q_hat):
                    continue
                segs, gain = rnd.pair(first, second)
                cand = (gain, -rank, segs, name)
                if best is None or (cand[0], cand[1]) > (best[0], best[1]):
                    best = cand
            if best is None:
                raise VariantError("no chainable completion exists")
            gain, _, segs, name = best
            take(segs, gain, 2, f"fix-up {case}: {name}")
            continue

        cands = []
        for rank, c in enumerate((A, B)):
            if not mutual_ok and k3 == 0:
                n1, n2 = k1 + (c == A), k2 + (c == B)
                if _need(n1, q_hat) + _need(n2, q_hat) > slots - used - 1:
                    continue
            r = rnd.self_loop(c)
            cands.append(((-Fraction(r.prize, 1), 1, rank), r, 1, "ab"[rank]))
        if mutual_ok and used <= slots - 2:
            m = rnd.mutual()
            cands.append(((-Fraction(m.prize, 2), 2, 2), m, 2, "mutual"))
        key, res, cost, note = min(cands, key=lambda c: c[0])
        take(res.segments, res.prize, cost, note)

    # assign walks to sensors; a sensor whose walks visit nothing stays idle
    its: list[Itinerary] = []
    for chain in chain_segments(chosen, q_hat, A, B):
        if not chain.loop.targets:
            continue
        its += place_sensors_on_loop(chain.loop, chain.sensors, lt, instance.speed,
                                     first_sensor=len(its), segment_budget=lc)
    sched = _schedule(its, Variant.CSC2_TT_GT_TC)
    trace.covered = sched.covered
    trace.stop_reason = f"{slots} walks chosen: k1={k1} k2={k2} k3={k3}"
    return sched, trace
