"""Random instance batches for experiments and certification."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .instance import Instance, InstanceError, save, validate


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    n_range: tuple[int, int] = (4, 8)
    chargers: int = 2
    m_range: tuple[int, int] = (1, 2)
    side: float = 10.0
    speed: float = 1.0
    sweep_period: float = 10.0
    charge_period: float = 20.0
    seeds: int = 10
    base_seed: int = 0
    variant: str = "rcsc"
    kernel: str = "exact"
    exact_limit: int = 14
    kernel_seed: int = 0
    out: str = "."

    def __post_init__(self):
        lo, hi = self.n_range
        if not 1 <= lo <= hi:
            raise SpecError(f"bad n_range {self.n_range}")
        lo, hi = self.m_range
        if not 1 <= lo <= hi:
            raise SpecError(f"bad m_range {self.m_range}")
        if self.chargers not in (1, 2):
            raise SpecError("chargers must be 1 or 2")
        if self.seeds < 0:
            raise SpecError("seeds must be >= 0")
        if min(self.side, self.speed, self.sweep_period, self.charge_period) <= 0:
            raise SpecError("side, speed and periods must be positive")
        if self.variant not in ("rcsc", "csc2"):
            raise SpecError(f"unknown variant {self.variant!r}")
        if self.variant == "csc2" and self.chargers != 2:
            raise SpecError("csc2 requires exactly 2 chargers")
        probe = Instance.from_coordinates([], [(0, 0)], speed=self.speed,
                                          sweep_period=self.sweep_period,
                                          charge_period=self.charge_period, sensors=1)
        try:
            probe.params
        except InstanceError as exc:
            raise SpecError(str(exc)) from None

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ExperimentSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise SpecError(f"unknown spec fields: {sorted(unknown)}")
        kw = dict(doc)
        for key in ("n_range", "m_range"):
            if key in kw:
                kw[key] = tuple(kw[key])
        return cls(**kw)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def generate(spec: ExperimentSpec) -> list[tuple[str, Instance]]:
    """Deterministic (instance id, instance) pairs, one per seed."""
    out = []
    for i in range(spec.seeds):
        rng = np.random.default_rng([spec.base_seed, i])
        n = int(rng.integers(spec.n_range[0], spec.n_range[1] + 1))
        m = int(rng.integers(spec.m_range[0], spec.m_range[1] + 1))
        targets = rng.uniform(0, spec.side, (n, 2))
        chargers = rng.uniform(0, spec.side, (spec.chargers, 2))
        inst = Instance.from_coordinates(targets, chargers, speed=spec.speed,
                                         sweep_period=spec.sweep_period,
                                         charge_period=spec.charge_period, sensors=m)
        out.append((f"inst_{spec.base_seed}_{i:04d}", inst))
    return out


def write_atomic(path: Path, data: bytes):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def gen(spec: ExperimentSpec) -> list[Path]:
    out_dir = Path(spec.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, inst in generate(spec):
        report = validate(inst)
        if not report.ok:
            raise SpecError(f"{name}: generated instance is invalid: {report.codes()}")
        path = out_dir / f"{name}.json"
        write_atomic(path, save(inst))
        paths.append(path)
    return paths
