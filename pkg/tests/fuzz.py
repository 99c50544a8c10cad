"""Shared random instance suites and independent reference computations for tests."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from chargesweep.instance import Instance
from chargesweep.oracle import HeldKarp

# lines printed in the terminal summary, one per acceptance criterion
LINES: list[str] = []


def report(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} -- {detail}"
    LINES.append(line)
    print(line)
    return line


def random_instance(rng: np.random.Generator, n: int, k: int, m: int, tt: float, tc: float,
                    side: float = 10.0) -> Instance:
    return Instance.from_coordinates(rng.uniform(0, side, (n, 2)), rng.uniform(0, side, (k, 2)),
                                     speed=1.0, sweep_period=tt, charge_period=tc, sensors=m)


def clustered_instance(rng: np.random.Generator, n: int, k: int, m: int, tt: float,
                       tc: float, radius: float, side: float = 15.0) -> Instance:
    """Targets scattered within ``radius`` of randomly chosen chargers."""
    chargers = rng.uniform(0, side, (k, 2))
    ang = rng.uniform(0, 2 * np.pi, n)
    r = rng.uniform(0, radius, n)
    home = rng.integers(0, k, n)
    targets = chargers[home] + np.c_[r * np.cos(ang), r * np.sin(ang)]
    return Instance.from_coordinates(targets, chargers, speed=1.0, sweep_period=tt,
                                     charge_period=tc, sensors=m)


@lru_cache(maxsize=None)
def rcsc_ge_suite(count: int = 200, seed: int = 2024) -> tuple[Instance, ...]:
    """N <= 10, K <= 2, M <= 3, Q in {1, 2, 3}."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        q = int(rng.integers(1, 4))
        out.append(random_instance(rng, int(rng.integers(1, 11)), int(rng.integers(1, 3)),
                                   int(rng.integers(1, 4)), 10.0, 10.0 * q))
    return tuple(out)


@lru_cache(maxsize=None)
def rcsc_gt_suite(count: int = 300, seed: int = 2025) -> tuple[Instance, ...]:
    """N <= 8, M <= 2, Q_hat in {2, 3}; every other instance clustered around chargers."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        qh = int(rng.integers(2, 4))
        args = (rng, int(rng.integers(1, 9)), int(rng.integers(1, 3)),
                int(rng.integers(1, 3)), 10.0 * qh, 10.0)
        out.append(random_instance(*args, side=15.0) if i % 2 == 0
                   else clustered_instance(*args, radius=6.0))
    return tuple(out)


@lru_cache(maxsize=None)
def csc2_suite(count: int = 300, seed: int = 2026) -> tuple[Instance, ...]:
    """Two chargers, N <= 8, M <= 2; alternates T_c >= T_t (Q <= 3) and T_t > T_c (Q_hat <= 3)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        if i % 2 == 0:
            tt, tc = 10.0, 10.0 * int(rng.integers(1, 4))
        else:
            tt, tc = 10.0 * int(rng.integers(2, 4)), 10.0
        out.append(random_instance(rng, int(rng.integers(1, 9)), 2, int(rng.integers(1, 3)),
                                   tt, tc, side=15.0))
    return tuple(out)


def _fit_table(hk: HeldKarp, budget: float) -> list[int]:
    """best[m] = size of the largest subset of m whose walk fits the budget."""
    n = len(hk.cost).bit_length() - 1
    best = [bin(m).count("1") if c <= budget + 1e-9 else 0 for m, c in enumerate(hk.cost)]
    for i in range(n):
        bit = 1 << i
        for m in range(len(best)):
            if m & bit and best[m ^ bit] > best[m]:
                best[m] = best[m ^ bit]
    return best


def best_within(hk: HeldKarp, budget: float) -> int:
    """Largest target set whose Held-Karp walk fits the budget."""
    return _fit_table(hk, budget)[-1]


def best_two_walks(hk: HeldKarp, b1: float, b2: float) -> int:
    """Most targets on two disjoint walks with budgets b1 and b2 (exhaustive)."""
    full = len(hk.cost) - 1
    second = _fit_table(hk, b2)
    return max(bin(m).count("1") + second[full & ~m]
               for m, c in enumerate(hk.cost) if c <= b1 + 1e-9)


def best_team(hk: HeldKarp, budget: float, count: int) -> int:
    """Most targets on ``count`` disjoint closed walks of one budget (exhaustive)."""
    if count == 1:
        return best_within(hk, budget)
    return best_two_walks(hk, budget, budget) if count == 2 else _team(hk, budget, count)


def _team(hk: HeldKarp, budget: float, count: int) -> int:
    full = len(hk.cost) - 1
    fits = [m for m, c in enumerate(hk.cost) if c <= budget + 1e-9]
    value = _fit_table(hk, budget)
    for _ in range(count - 1):
        value = [max(bin(m).count("1") + value[r & ~m] for m in fits if m & ~r == 0)
                 for r in range(full + 1)]
    return value[full]
