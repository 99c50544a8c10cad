import itertools
import math

import numpy as np
import pytest

from chargesweep.bounds import mutual_loop_ratio
from chargesweep.instance import EPS_LEN, Instance, InstanceError, full_view
from chargesweep.kernels import (InfeasibleError, KernelConfig, KernelLimitError,
                                 rooted_orienteering, rooted_team_orienteering, st_loop,
                                 st_orienteering)

HEUR = KernelConfig(mode="heuristic", rng_seed=3)


def inst(targets, chargers):
    return Instance.from_coordinates(targets, chargers, speed=1.0, sweep_period=1.0,
                                     charge_period=1.0, sensors=1)


def test_line_rooted():
    view = full_view(inst([(1, 0), (2, 0), (3, 0)], [(0, 0)]))
    assert rooted_orienteering(view, 0, 6.0).prize == 3
    res = rooted_orienteering(view, 0, 2.0)
    assert res.prize == 1 and res.targets == {0} and res.optimal
    assert rooted_orienteering(view, 0, 0.0).prize == 0


def test_unit_square_st():
    view = full_view(inst([(0, 1), (1, 1)], [(0, 0), (1, 0)]))
    assert st_orienteering(view, 0, 1, 3.0).prize == 2
    assert st_orienteering(view, 0, 1, 2.5).prize == 1
    with pytest.raises(InfeasibleError):
        st_orienteering(view, 0, 1, 0.5)
    with pytest.raises(InstanceError):
        st_orienteering(view, 0, 0, 5.0)


def test_team_spreads_over_walks():
    view = full_view(inst([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 0)]))
    res = rooted_team_orienteering(view, 0, 2.0, 2)
    assert res.prize == 2 and len(res.segments) == 2
    assert all(s.length <= 2.0 + EPS_LEN for s in res.segments)
    # padding keeps exactly `count` walks even when targets run out
    res = rooted_team_orienteering(full_view(inst([(1, 0)], [(0, 0)])), 0, 2.0, 3)
    assert res.prize == 1 and len(res.segments) == 3


def test_config_validation_and_limit():
    for bad in (dict(mode="fast"), dict(exact_node_limit=1), dict(heuristic_restarts=0)):
        with pytest.raises(ValueError):
            KernelConfig(**bad)
    view = full_view(inst([(1, 0), (2, 0), (3, 0)], [(0, 0)]))
    with pytest.raises(KernelLimitError):
        rooted_orienteering(view, 0, 10.0, KernelConfig(exact_node_limit=2))
    with pytest.raises(InstanceError):
        rooted_orienteering(view, 0, -1.0)


def brute_rooted(instance, root, budget):
    rows = instance.rows
    node = instance.charger_node(root)
    best = 0
    for r in range(instance.n_targets, 0, -1):
        for perm in itertools.permutations(range(instance.n_targets), r):
            path = [node, *perm, node]
            if sum(rows[u][v] for u, v in zip(path, path[1:])) <= budget + EPS_LEN:
                return r
    return best


def brute_st(instance, s, t, budget):
    rows = instance.rows
    a, b = instance.charger_node(s), instance.charger_node(t)
    for r in range(instance.n_targets, 0, -1):
        for perm in itertools.permutations(range(instance.n_targets), r):
            path = [a, *perm, b]
            if sum(rows[u][v] for u, v in zip(path, path[1:])) <= budget + EPS_LEN:
                return r
    return 0


@pytest.mark.parametrize("seed", range(25))
def test_exact_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    instance = inst(rng.uniform(0, 10, (n, 2)), rng.uniform(0, 10, (2, 2)))
    view = full_view(instance)
    d = instance.rows[n][n + 1]
    for budget in (5.0, 12.0, 25.0):
        res = rooted_orienteering(view, 0, budget)
        assert res.prize == brute_rooted(instance, 0, budget)
        assert res.route.segments[0].length <= budget + EPS_LEN
        if budget >= d:
            res = st_orienteering(view, 0, 1, budget)
            assert res.prize == brute_st(instance, 0, 1, budget)
            assert res.route.length <= budget + EPS_LEN


@pytest.mark.parametrize("seed", range(10))
def test_budget_monotone_and_feasible(seed):
    rng = np.random.default_rng(100 + seed)
    instance = inst(rng.uniform(0, 10, (9, 2)), rng.uniform(0, 10, (1, 2)))
    view = full_view(instance)
    for config in (KernelConfig(), HEUR):
        prev = 0
        for budget in np.linspace(0, 40, 9):
            res = rooted_orienteering(view, 0, float(budget), config)
            seg = res.route.segments[0]
            assert seg.measure(instance) <= budget + EPS_LEN
            assert res.prize == len(set(seg.via))
            if config.exact:
                assert res.prize >= prev
                prev = res.prize


def test_heuristic_is_deterministic_per_seed():
    rng = np.random.default_rng(7)
    view = full_view(inst(rng.uniform(0, 10, (12, 2)), [(5, 5)]))
    a = rooted_orienteering(view, 0, 20.0, HEUR)
    b = rooted_orienteering(view, 0, 20.0, HEUR)
    assert a == b and not a.optimal


def test_st_loop_two_phases():
    view = full_view(inst([(2, 1), (8, 1), (5, -3)], [(0, 0), (10, 0)]))
    res = st_loop(view, 0, 1, 11.0, 11.0)
    first, back = res.segments
    assert (first.start, first.end, back.start, back.end) == (0, 1, 1, 0)
    assert first.targets.isdisjoint(back.targets)
    assert res.prize == len(res.targets)


def test_mutual_loop_ratio_value():
    assert mutual_loop_ratio(0.4) == pytest.approx(0.36)
    assert mutual_loop_ratio(1.0) == pytest.approx(0.75)


def test_st_loop_with_unequal_budgets_can_halve():
    # The long first walk may take either the roadside pair {0, 1} or the far
    # pair {2, 3}; it takes the roadside pair, leaving nothing the short
    # second walk can reach.  The best loop covers all four.
    instance = inst([(2, 0), (8, 0), (4, 8), (6, 8)], [(0, 0), (10, 0)])
    view = full_view(instance)
    res = st_loop(view, 0, 1, 20.0, 10.5)
    assert res.prize == 2
    best = st_orienteering(view, 0, 1, 20.0).prize
    far_first = st_orienteering(view.without([0, 1]), 0, 1, 20.0).prize
    near_second = st_orienteering(view.without([2, 3]), 0, 1, 10.5).prize
    assert best == 2 and far_first + near_second == 4
    assert res.prize / 4 == 0.5 < mutual_loop_ratio(1.0)
