"""Exhaustive reference optima for small instances.

Everything here is subset dynamic programming over bitmasks of targets and
shares no search code with :mod:`chargesweep.kernels`:

* Held-Karp tables give the shortest closed walk at each charger and the
  shortest a->b walk through every target subset;
* minimum-cost set partitions then combine those into sensor assignments.

``opt_restricted`` optimises over the candidate routes the greedy solvers
draw from.  ``opt_true`` optimises over a wider class: any partition of the
covered targets into groups, each group swept by g sensors spread evenly on
one closed walk of length <= g * L_t whose charger-to-charger pieces are all
<= L_c.  Witness schedules are built for both and checked with the verifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import EPS_LEN, Instance, require_valid
from .routes import (Itinerary, Loop, Schedule, Segment, Variant, chain_segments,
                     closed_walk, place_sensors_on_loop)
from .verify import verify

INF = math.inf
RESTRICTED_LIMITS = (12, 4, 2)  # N, M, K
TRUE_LIMITS = (8, 2, 2)


@dataclass(frozen=True)
class OracleResult:
    opt_value: int
    witness: Schedule
    search_space_size: int
    truncated: bool


class OracleError(RuntimeError):
    """A witness failed verification; the oracle itself is wrong."""


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


class HeldKarp:
    """Shortest start -> (all of S, any order) -> end walk for every target set S."""

    def __init__(self, dist: np.ndarray, start: int, end: int, n: int):
        full = 1 << n
        d = dist[:n, :n]
        dp = np.full((full, max(n, 1)), INF)
        for j in range(n):
            dp[1 << j, j] = dist[start, j]
        for m in range(1, full):
            if m & (m - 1) == 0:
                continue
            js = np.array(_bits(m))
            prev = m ^ (1 << js)
            dp[m, js] = (dp[prev] + d[:, js].T).min(axis=1)
        cost = np.empty(full)
        cost[0] = dist[start, end]
        if n:
            cost[1:] = (dp[1:, :n] + dist[:n, end]).min(axis=1)
        self.dp, self.cost, self.d = dp, cost.tolist(), d
        self.end_col = dist[:n, end] if n else np.zeros(1)

    def order(self, mask: int) -> tuple[int, ...]:
        seq = []
        j = int(np.argmin(self.dp[mask] + self.end_col))
        while True:
            seq.append(j)
            prev = mask ^ (1 << j)
            if not prev:
                return tuple(reversed(seq))
            j = int(np.argmin(self.dp[prev] + self.d[:, j]))
            mask = prev


class _Counter:
    def __init__(self):
        self.n = 0


def _partition(n: int, unit, counter: _Counter):
    """best[U] = min sum of unit[S] over partitions of U into nonempty blocks."""
    full = 1 << n
    best = [0.0] + [INF] * (full - 1)
    arg = [0] * full
    for u in range(1, full):
        low = u & -u
        rest = u ^ low
        sub = rest
        b, a = INF, 0
        while True:
            s = sub | low
            v = unit[s] + best[u ^ s]
            if v < b:
                b, a = v, s
            counter.n += 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[u], arg[u] = b, a
    return best, arg


def _blocks(arg: list[int], u: int) -> list[int]:
    out = []
    while u:
        out.append(arg[u])
        u ^= arg[u]
    return out


def _convolve(n: int, f, g, combine, counter: _Counter):
    """h[U] = min over S subset of U of combine(f[S], g[U \\ S]); also the argmin S."""
    full = 1 << n
    h, arg = [INF] * full, [0] * full
    for u in range(full):
        sub = u
        while True:
            v = combine(f[sub], g[u ^ sub])
            if v < h[u]:
                h[u], arg[u] = v, sub
            counter.n += 1
            if sub == 0:
                break
            sub = (sub - 1) & u
    return h, arg


def _units(length: float, unit: float) -> int:
    return max(1, math.ceil((length - EPS_LEN) / unit))


def _best_set(cost: list[float], budget: float) -> int:
    best = 0
    for u, c in enumerate(cost):
        if c <= budget + 1e-12 and _popcount(u) > _popcount(best):
            best = u
    return best


class _Tables:
    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = n = instance.n_targets
        d = np.asarray(instance.dist)
        self.tour = [HeldKarp(d, n + c, n + c, n) for c in instance.charger_ids]
        self.path = HeldKarp(d, n, n + 1, n) if instance.n_chargers == 2 else None
        p = instance.params
        self.lt, self.lc = p.sweep_length, p.charge_length
        self.d_ab = float(d[n, n + 1]) if instance.n_chargers == 2 else INF
        self.counter = _Counter()

    def fits(self, length: float, cap: float) -> bool:
        return length <= cap + EPS_LEN

    def self_seg(self, c: int, mask: int) -> Segment:
        return Segment.build(self.instance, c, c, self.tour[c].order(mask))

    def cross_seg(self, mask: int) -> Segment:
        return Segment.build(self.instance, 0, 1, self.path.order(mask))

    def lc_blocks(self, hk: HeldKarp, weight):
        """Partition into walks of length <= L_c, each weighted by weight(length)."""
        unit = [weight(c) if self.fits(c, self.lc) else INF for c in hk.cost]
        unit[0] = INF
        return _partition(self.n, unit, self.counter)


def _check(instance, variant, schedule: Schedule, value: int):
    rep = verify(instance, schedule)
    if not rep.feasible or len(rep.verified_covered) < value:
        raise OracleError(f"{variant.value} witness fails verification: {rep.violations[:3]}")


def _truncated(variant: Variant) -> OracleResult:
    return OracleResult(-1, Schedule((), frozenset(), variant), 0, True)


def _finish(instance, variant, its: list[Itinerary], value: int, tables) -> OracleResult:
    covered = frozenset(t for it in its for t in it.loop.targets)
    sched = Schedule(tuple(its), covered, variant)
    _check(instance, variant, sched, value)
    return OracleResult(value, sched, tables.counter.n, False)


def _in_limits(instance: Instance, variant: Variant, limits) -> bool:
    n, m, k = limits
    if instance.n_targets > n or instance.sensors > m or instance.n_chargers > k:
        return False
    return not (variant.family == "csc2" and instance.n_chargers != 2)


# -- restricted-family optimum ----------------------------------------------

def opt_restricted(instance: Instance, variant: Variant | str) -> OracleResult:
    variant = Variant(variant)
    p = require_valid(instance, allow_no_targets=True)
    if not _in_limits(instance, variant, RESTRICTED_LIMITS):
        return _truncated(variant)
    tb = _Tables(instance)
    n, full, m = tb.n, 1 << tb.n, instance.sensors
    lt, v = tb.lt, instance.speed
    its: list[Itinerary] = []

    def add(loop, count, budget):
        its.extend(place_sensors_on_loop(loop, count, lt, v, first_sensor=len(its),
                                         segment_budget=budget))

    if variant in (Variant.RCSC_TC_GE_TT, Variant.CSC2_TC_GE_TT):
        q = p.q
        kcap = min(q, m)
        unit, how = [INF] * full, [None] * full
        chargers = instance.charger_ids if variant.restricted else (0, 1)
        for s in range(1, full):
            for c in chargers:
                k = _units(tb.tour[c].cost[s], lt)
                if k <= kcap and k < unit[s]:
                    unit[s], how[s] = k, ("self", c, k)
        if variant is Variant.CSC2_TC_GE_TT:
            q_bar = max(1, math.ceil(tb.d_ab / lt - EPS_LEN))
            jcap = min(m, 2 * q)
            jmin = [max(q_bar, _units(c, lt)) for c in tb.path.cost]
            for s in range(1, full):
                sub = s
                while True:
                    j1, j2 = jmin[sub], jmin[s ^ sub]
                    tb.counter.n += 1
                    if j1 <= q and j2 <= q and j1 + j2 <= jcap and j1 + j2 < unit[s]:
                        unit[s], how[s] = j1 + j2, ("mutual", sub, (j1, j2))
                    if sub == 0:
                        break
                    sub = (sub - 1) & s
        best, arg = _partition(n, unit, tb.counter)
        u = _best_set(best, m)
        for s in _blocks(arg, u):
            kind, c, k = how[s]
            if kind == "self":
                add(Loop((tb.self_seg(c, s),)), k, k * lt)
            else:
                j1, j2 = k
                first = tb.cross_seg(c)
                second = tb.cross_seg(s ^ c).reversed()
                add(Loop((first, second)), j1 + j2, max(j1, j2) * lt)
        return _finish(instance, variant, its, _popcount(u), tb)

    q_hat = p.q_hat
    lc = tb.lc
    if variant is Variant.RCSC_TT_GT_TC:
        per_charger = [tb.lc_blocks(hk, lambda c: 1) for hk in tb.tour]
        unit, home = [INF] * full, [0] * full
        for s in range(1, full):
            for c, (cnt, _) in enumerate(per_charger):
                if cnt[s] <= q_hat and unit[s] == INF:
                    unit[s], home[s] = 1, c
        best, arg = _partition(n, unit, tb.counter)
        u = _best_set(best, m)
        for s in _blocks(arg, u):
            c = home[s]
            segs = [tb.self_seg(c, b) for b in _blocks(per_charger[c][1], s)]
            segs += [Segment.build(instance, c, c, ())] * (q_hat - len(segs))
            its.append(Itinerary(len(its), Loop(tuple(segs)), 0.0, lc))
        return _finish(instance, variant, its, _popcount(u), tb)

    # CSC2, T_t > T_c: M * Q_hat walks of length <= L_c in a chainable mix
    a_cnt, a_arg = tb.lc_blocks(tb.tour[0], lambda c: 1)
    b_cnt, b_arg = tb.lc_blocks(tb.tour[1], lambda c: 1)
    mutual_ok = tb.fits(tb.d_ab, lc)
    x_unit = [1 if mutual_ok and tb.fits(c, lc) else INF for c in tb.path.cost]
    x_unit[0] = INF
    x_cnt, x_arg = _partition(n, x_unit, tb.counter)
    ab_sum, ab_sum_arg = _convolve(n, a_cnt, b_cnt, lambda x, y: x + y, tb.counter)
    ab_rnd, ab_rnd_arg = _convolve(
        n, a_cnt, b_cnt,
        lambda x, y: (math.ceil(x / q_hat) + math.ceil(y / q_hat)) * q_hat
        if x < INF and y < INF else INF, tb.counter)
    pairs = [2 * max(1, math.ceil(c / 2)) if c < INF and mutual_ok else INF for c in x_cnt]
    mixed, mixed_arg = _convolve(n, pairs, ab_sum, lambda x, y: x + y, tb.counter)
    slots = [min(r, x) for r, x in zip(ab_rnd, mixed)]
    u = _best_set(slots, m * q_hat)
    segs: list[Segment] = []
    if ab_rnd[u] <= mixed[u]:
        ua = ab_rnd_arg[u]
        sa = [tb.self_seg(0, b) for b in _blocks(a_arg, ua)]
        sb = [tb.self_seg(1, b) for b in _blocks(b_arg, u ^ ua)]
        sa += [Segment.build(instance, 0, 0, ())] * (-len(sa) % q_hat)
        sb += [Segment.build(instance, 1, 1, ())] * (-len(sb) % q_hat)
        segs = sa + sb
    else:
        ux = mixed_arg[u]
        rest = u ^ ux
        ua = ab_sum_arg[rest]
        segs += [tb.self_seg(0, b) for b in _blocks(a_arg, ua)]
        segs += [tb.self_seg(1, b) for b in _blocks(b_arg, rest ^ ua)]
        cross = [tb.cross_seg(b) for b in _blocks(x_arg, ux)]
        while len(cross) < 2 or len(cross) % 2:
            cross.append(Segment.build(instance, 0, 1, ()))
        segs += cross
        segs += [Segment.build(instance, 0, 0, ())] * (-len(segs) % q_hat)
    for chain in chain_segments(segs, q_hat):
        if chain.loop.targets:
            its += place_sensors_on_loop(chain.loop, chain.sensors, lt, v,
                                         first_sensor=len(its), segment_budget=lc)
    return _finish(instance, variant, its, _popcount(u), tb)


# -- wider-class optimum ----------------------------------------------------

def opt_true(instance: Instance, variant: Variant | str) -> OracleResult:
    variant = Variant(variant)
    require_valid(instance, allow_no_targets=True)
    if not _in_limits(instance, variant, TRUE_LIMITS):
        return _truncated(variant)
    tb = _Tables(instance)
    n, full, m = tb.n, 1 << tb.n, instance.sensors
    lt, lc, v = tb.lt, tb.lc, instance.speed
    walks = [tb.lc_blocks(hk, lambda c: c) for hk in tb.tour]

    def self_walk(c, s):
        return [tb.self_seg(c, b) for b in _blocks(walks[c][1], s)]

    g, build = [INF] * full, [None] * full
    if variant.restricted:
        for s in range(1, full):
            for c in instance.charger_ids:
                w = walks[c][0][s]
                if w < INF and _units(w, lt) < g[s]:
                    g[s], build[s] = _units(w, lt), ("self", c)
    else:
        # closed walks mixing a-loops, b-loops and a<->b crossings
        mutual_ok = tb.fits(tb.d_ab, lc)
        even, odd = [0.0] + [INF] * (full - 1), [INF] * full
        even_arg, odd_arg = [0] * full, [0] * full
        for u in range(1, full):
            low = u & -u
            rest = u ^ low
            sub = rest
            while mutual_ok:
                s = sub | low
                c = tb.path.cost[s]
                if tb.fits(c, lc):
                    if c + odd[u ^ s] < even[u]:
                        even[u], even_arg[u] = c + odd[u ^ s], s
                    if c + even[u ^ s] < odd[u]:
                        odd[u], odd_arg[u] = c + even[u ^ s], s
                tb.counter.n += 1
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        x = [INF] * full
        if mutual_ok:
            x = [min(even[s] if s else INF, odd[s] + tb.d_ab) for s in range(full)]
            x[0] = 2 * tb.d_ab
        ab, ab_arg = _convolve(n, walks[0][0], walks[1][0], lambda p, q: p + q, tb.counter)
        w2, w2_arg = _convolve(n, x, ab, lambda p, q: p + q, tb.counter)
        for s in range(1, full):
            opts = [(walks[0][0][s], ("self", 0)), (walks[1][0][s], ("self", 1)),
                    (w2[s], ("mixed",))]
            w, how = min(opts, key=lambda o: o[0])
            if w < INF:
                g[s], build[s] = _units(w, lt), how

        def mixed_walk(s):
            sx = w2_arg[s]
            rest = s ^ sx
            sa = ab_arg[rest]
            segs = self_walk(0, sa) + self_walk(1, rest ^ sa)
            cross, u = [], sx
            parity_even = even[sx] <= odd[sx] + tb.d_ab if sx else False
            table = even_arg if parity_even else odd_arg
            while u:
                blk = table[u]
                cross.append(tb.cross_seg(blk))
                u ^= blk
                table = odd_arg if table is even_arg else even_arg
            while len(cross) < 2 or len(cross) % 2:
                cross.append(Segment.build(instance, 0, 1, ()))
            return closed_walk(segs + cross, 0, 1)

    sensors, arg = _partition(n, g, tb.counter)
    u = _best_set(sensors, m)
    its: list[Itinerary] = []
    for s in _blocks(arg, u):
        how = build[s]
        loop = Loop(tuple(self_walk(how[1], s))) if how[0] == "self" else mixed_walk(s)
        its += place_sensors_on_loop(loop, g[s], lt, v, first_sensor=len(its),
                                     segment_budget=lc)
    return _finish(instance, variant, its, _popcount(u), tb)
