"""Budgeted-path subroutines used by the greedy solvers.

Every kernel maximises the number of distinct (uncovered) targets visited by
walks of bounded length:

* :func:`rooted_orienteering` -- one closed walk at a charger;
* :func:`st_orienteering` -- one walk between two chargers;
* :func:`rooted_team_orienteering` -- several closed walks at one charger;
* :func:`st_loop` -- two successive s-t walks forming a mutual loop.

Exact mode searches exhaustively; heuristic mode uses cheapest insertion with
randomized restarts.  Exact searches only consider simple sequences of
distinct targets, which loses nothing in a metric space.  Among equally good
walks the lexicographically smallest target sequence wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .instance import EPS_LEN, InstanceError, View
from .routes import Loop, Segment

EXACT = "exact"
HEURISTIC = "heuristic"


class KernelLimitError(RuntimeError):
    """Exact mode asked to search more targets than ``exact_node_limit``."""


class InfeasibleError(ValueError):
    """Budget too small for even the direct walk."""


@dataclass(frozen=True)
class KernelConfig:
    mode: str = EXACT
    exact_node_limit: int = 14
    heuristic_restarts: int = 16
    rng_seed: int = 0

    def __post_init__(self):
        if self.mode not in (EXACT, HEURISTIC):
            raise ValueError(f"unknown kernel mode {self.mode!r}")
        if self.exact_node_limit < 2:
            raise ValueError("exact_node_limit must be >= 2")
        if self.heuristic_restarts < 1:
            raise ValueError("heuristic_restarts must be >= 1")

    @property
    def exact(self) -> bool:
        return self.mode == EXACT


DEFAULT_CONFIG = KernelConfig()


@dataclass(frozen=True)
class KernelResult:
    route: Segment | Loop
    prize: int
    optimal: bool

    @property
    def targets(self) -> frozenset[int]:
        return self.route.targets

    @property
    def segments(self) -> tuple[Segment, ...]:
        if isinstance(self.route, Segment):
            return (self.route,)
        return self.route.segments


# -- exact search -----------------------------------------------------------

def _candidates(view: View, s: int, t: int, budget: float) -> list[int]:
    rows = view.instance.rows
    limit = budget + EPS_LEN
    return [u for u in view.targets if rows[s][u] + rows[u][t] <= limit]


def _bnb_walk(rows, s: int, t: int, cands: Sequence[int], budget: float) -> tuple[int, ...]:
    """Best simple s->t target sequence of length <= budget.

    Depth-first in increasing target order, so the first sequence reaching a
    new best prize is the lexicographically smallest one with that prize.
    Pruning: a target is reachable only if going there and then straight to
    ``t`` fits the residual budget; the count of reachable targets bounds what
    a prefix can still gain.  A prefix is also dropped when the same visited
    set was already reached at the same last target with no more length.
    """
    limit = budget + EPS_LEN
    n = len(cands)
    back = [rows[c][t] for c in cands]
    seen: dict[int, float] = {}
    best_seq: tuple[int, ...] = ()
    best = 0

    class _Done(Exception):
        pass

    def dfs(cur: int, mask: int, plen: float, seq: tuple[int, ...]):
        nonlocal best, best_seq
        if len(seq) > best:
            best, best_seq = len(seq), seq
            if best == n:
                raise _Done
        row = rows[cur]
        nxt = [i for i in range(n)
               if not mask >> i & 1 and plen + row[cands[i]] + back[i] <= limit]
        depth = len(seq)
        for i in nxt:
            if depth + len(nxt) <= best:
                return
            nl = plen + row[cands[i]]
            m = mask | 1 << i
            key = m * n + i
            prev = seen.get(key)
            if prev is not None and prev <= nl:
                continue
            seen[key] = nl
            dfs(cands[i], m, nl, seq + (cands[i],))

    try:
        dfs(s, 0, 0.0, ())
    except _Done:
        pass
    return best_seq


def _feasible_closed_sets(rows, root: int, cands: Sequence[int], budget: float
                          ) -> dict[int, tuple[float, tuple[int, ...]]]:
    """Every target subset (bitmask over ``cands``) that fits one closed walk.

    Maps mask -> (shortest closing length, visiting order).  Built forward
    layer by layer over (visited set, last target).
    """
    limit = budget + EPS_LEN
    n = len(cands)
    back = [rows[c][root] for c in cands]
    feasible: dict[int, tuple[float, tuple[int, ...]]] = {0: (0.0, ())}
    frontier: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}
    for i, c in enumerate(cands):
        plen = rows[root][c]
        if plen + back[i] <= limit:
            frontier[(1 << i, i)] = (plen, (c,))
    while frontier:
        nxt: dict[tuple[int, int], tuple[float, tuple[int, ...]]] = {}
        for (mask, i), (plen, seq) in sorted(frontier.items()):
            closed = plen + back[i]
            old = feasible.get(mask)
            if old is None or closed < old[0]:
                feasible[mask] = (closed, seq)
            row = rows[cands[i]]
            for j in range(n):
                if mask >> j & 1:
                    continue
                nl = plen + row[cands[j]]
                if nl + back[j] > limit:
                    continue
                key = (mask | 1 << j, j)
                cur = nxt.get(key)
                if cur is None or nl < cur[0]:
                    nxt[key] = (nl, seq + (cands[j],))
        frontier = nxt
    return feasible


# -- heuristic search -------------------------------------------------------

def _two_opt(rows, path: list[int]) -> list[int]:
    improved = True
    while improved:
        improved = False
        for i in range(1, len(path) - 2):
            for j in range(i + 1, len(path) - 1):
                a, b, c, d = path[i - 1], path[i], path[j], path[j + 1]
                if rows[a][c] + rows[b][d] < rows[a][b] + rows[c][d] - 1e-12:
                    path[i:j + 1] = path[i:j + 1][::-1]
                    improved = True
    return path


def _grow(rows, path: list[int], pool: Sequence[int], limit: float,
          rng: np.random.Generator | None) -> list[int]:
    length = sum(rows[u][v] for u, v in zip(path, path[1:]))
    while True:
        on = set(path)
        moves = []
        for u in pool:
            if u in on:
                continue
            best = None
            for k in range(len(path) - 1):
                a, b = path[k], path[k + 1]
                delta = rows[a][u] + rows[u][b] - rows[a][b]
                if best is None or delta < best[0]:
                    best = (delta, u, k)
            if best is not None and length + best[0] <= limit:
                moves.append(best)
        if not moves:
            path = _two_opt(rows, path)
            new_len = sum(rows[u][v] for u, v in zip(path, path[1:]))
            if new_len < length - 1e-12:
                length = new_len
                continue
            return path
        moves.sort()
        pick = moves[0] if rng is None else moves[int(rng.integers(min(3, len(moves))))]
        delta, u, k = pick
        path.insert(k + 1, u)
        length += delta


def _heuristic_walk(rows, s: int, t: int, cands: Sequence[int], budget: float,
                    config: KernelConfig) -> tuple[int, ...]:
    limit = budget + EPS_LEN
    best: tuple[int, ...] = ()

    def consider(path):
        nonlocal best
        seq = tuple(path[1:-1])
        if len(seq) > len(best) or (len(seq) == len(best) and seq < best):
            best = seq

    for u in cands:
        consider(_grow(rows, [s, u, t], cands, limit, None))
    rng = np.random.default_rng(config.rng_seed)
    if cands:
        for _ in range(config.heuristic_restarts):
            seed = cands[int(rng.integers(len(cands)))]
            consider(_grow(rows, [s, seed, t], cands, limit, rng))
    return best


# -- public kernels ---------------------------------------------------------

def _check_budget(budget: float):
    if budget < 0:
        raise InstanceError(f"budget must be >= 0, got {budget}")


def _walk(view: View, s_node: int, t_node: int, budget: float,
          config: KernelConfig) -> tuple[tuple[int, ...], bool]:
    rows = view.instance.rows
    cands = _candidates(view, s_node, t_node, budget)
    if config.exact:
        if len(cands) > config.exact_node_limit:
            raise KernelLimitError(
                f"{len(cands)} reachable targets exceed exact_node_limit="
                f"{config.exact_node_limit}")
        return _bnb_walk(rows, s_node, t_node, cands, budget), True
    return _heuristic_walk(rows, s_node, t_node, cands, budget, config), False


def rooted_orienteering(view: View, root: int, budget: float,
                        config: KernelConfig = DEFAULT_CONFIG) -> KernelResult:
    _check_budget(budget)
    inst = view.instance
    node = inst.charger_node(root)
    seq, optimal = _walk(view, node, node, budget, config)
    seg = Segment.build(inst, root, root, seq)
    return KernelResult(Loop((seg,)), len(seq), optimal)


def st_orienteering(view: View, s: int, t: int, budget: float,
                    config: KernelConfig = DEFAULT_CONFIG) -> KernelResult:
    if s == t:
        raise InstanceError("s-t orienteering needs two distinct chargers")
    _check_budget(budget)
    inst = view.instance
    s_node, t_node = inst.charger_node(s), inst.charger_node(t)
    direct = inst.rows[s_node][t_node]
    if budget < direct - EPS_LEN:
        raise InfeasibleError(f"budget {budget:g} < dist(s,t) = {direct:g}")
    seq, optimal = _walk(view, s_node, t_node, budget, config)
    return KernelResult(Segment.build(inst, s, t, seq), len(seq), optimal)


def _pack(masks: list[int], count: int) -> tuple[int, ...]:
    """Choose up to ``count`` masks maximising the size of their union."""
    sizes = [bin(m).count("1") for m in masks]
    best_u, best_pick = 0, ()

    def rec(start, depth, union, pick):
        nonlocal best_u, best_pick
        u = bin(union).count("1")
        if u > best_u:
            best_u, best_pick = u, pick
        if depth == count:
            return
        for k in range(start, len(masks)):
            if u + (count - depth) * sizes[k] <= best_u:
                break
            rec(k + 1, depth + 1, union | masks[k], pick + (k,))

    rec(0, 0, 0, ())
    return tuple(masks[k] for k in best_pick)


def rooted_team_orienteering(view: View, root: int, budget: float, count: int,
                             config: KernelConfig = DEFAULT_CONFIG) -> KernelResult:
    """``count`` closed walks at ``root``, each within ``budget``, disjoint targets.

    The route is a :class:`Loop` chaining the walks at ``root``; walks that
    found nothing appear as zero-length segments so there are always
    ``count`` of them.
    """
    if count < 1:
        raise InstanceError("count must be >= 1")
    _check_budget(budget)
    if count == 1:
        return rooted_orienteering(view, root, budget, config)
    inst = view.instance
    node = inst.charger_node(root)
    if not config.exact:
        segs, cur = [], view
        for _ in range(count):
            res = rooted_orienteering(cur, root, budget, config)
            segs.append(res.route.segments[0])
            cur = cur.without(res.targets)
        return KernelResult(Loop(tuple(segs)), sum(len(s.via) for s in segs), False)

    cands = _candidates(view, node, node, budget)
    if len(cands) > config.exact_node_limit:
        raise KernelLimitError(
            f"{len(cands)} reachable targets exceed exact_node_limit="
            f"{config.exact_node_limit}")
    feasible = _feasible_closed_sets(inst.rows, node, cands, budget)
    n = len(cands)
    maximal = [m for m in feasible
               if not any(not m >> j & 1 and (m | 1 << j) in feasible for j in range(n))]
    maximal.sort(key=lambda m: (-bin(m).count("1"),
                                [cands[j] for j in range(n) if m >> j & 1]))
    chosen = _pack(maximal, count)
    segs, taken = [], 0
    for m in chosen:
        own = m & ~taken
        taken |= m
        order = feasible[own][1]
        segs.append(Segment.build(inst, root, root, order))
    segs.sort(key=lambda s: s.via)
    segs.sort(key=lambda s: -len(s.via))
    while len(segs) < count:
        segs.append(Segment.build(inst, root, root, ()))
    return KernelResult(Loop(tuple(segs)), bin(taken).count("1"), True)


def st_loop(view: View, s: int, t: int, budget1: float, budget2: float,
            config: KernelConfig = DEFAULT_CONFIG) -> KernelResult:
    """Mutual loop s->t->s: best s-t walk, then best s-t walk on what is left."""
    first = st_orienteering(view, s, t, budget1, config)
    second = st_orienteering(view.without(first.targets), s, t, budget2, config)
    loop = Loop((first.route, second.route.reversed()))
    return KernelResult(loop, first.prize + second.prize, False)
