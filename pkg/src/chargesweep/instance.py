"""Problem instances: targets, charging stations, a metric, and the sensor fleet.

Node indexing used throughout the package: targets occupy matrix rows
``0..N-1`` and chargers occupy rows ``N..N+K-1``.  Public APIs take target
ids and charger ids (both zero based); :meth:`Instance.charger_node` maps a
charger id to its matrix row.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

# Global slack for every length comparison.
EPS_LEN = 1e-9


class InstanceError(ValueError):
    """Malformed or inconsistent input."""


class ParseError(InstanceError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class NodeKind(str, Enum):
    TARGET = "target"
    CHARGER = "charger"


@dataclass(frozen=True, order=True)
class NodeId:
    kind: NodeKind
    index: int


@dataclass(frozen=True)
class DerivedParams:
    sweep_length: float
    charge_length: float
    q: int | None
    q_hat: int | None
    hyperperiod: float

    @property
    def charge_ge_sweep(self) -> bool:
        return self.q is not None


def _integer_ratio(x: float) -> int | None:
    r = round(x)
    if r >= 1 and abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return None


@dataclass(frozen=True, eq=False)
class Instance:
    n_targets: int
    n_chargers: int
    dist: np.ndarray
    speed: float
    sweep_period: float
    charge_period: float
    sensors: int
    coords: np.ndarray | None = None

    def __post_init__(self):
        d = np.array(self.dist, dtype=float, copy=True)
        n = self.n_targets + self.n_chargers
        if d.shape != (n, n):
            raise InstanceError(f"dist must be {n}x{n}, got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if self.coords is not None:
            c = np.array(self.coords, dtype=float, copy=True)
            if c.shape != (n, 2):
                raise InstanceError(f"coords must be {n}x2, got {c.shape}")
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

    @classmethod
    def from_coordinates(cls, targets: Sequence[Sequence[float]],
                         chargers: Sequence[Sequence[float]], *, speed: float,
                         sweep_period: float, charge_period: float,
                         sensors: int) -> "Instance":
        pts = np.array(list(targets) + list(chargers), dtype=float).reshape(-1, 2)
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=-1))
        return cls(len(targets), len(chargers), dist, speed, sweep_period,
                   charge_period, sensors, coords=pts)

    @classmethod
    def from_matrix(cls, dist, n_targets: int, *, speed: float,
                    sweep_period: float, charge_period: float,
                    sensors: int) -> "Instance":
        d = np.asarray(dist, dtype=float)
        return cls(n_targets, d.shape[0] - n_targets, d, speed, sweep_period,
                   charge_period, sensors)

    # -- node helpers -------------------------------------------------------
    @property
    def n_nodes(self) -> int:
        return self.n_targets + self.n_chargers

    @property
    def target_ids(self) -> range:
        return range(self.n_targets)

    @property
    def charger_ids(self) -> range:
        return range(self.n_chargers)

    def charger_node(self, c: int) -> int:
        if not 0 <= c < self.n_chargers:
            raise InstanceError(f"unknown charger {c}")
        return self.n_targets + c

    def node_id(self, node: int) -> NodeId:
        if node < self.n_targets:
            return NodeId(NodeKind.TARGET, node)
        return NodeId(NodeKind.CHARGER, node - self.n_targets)

    @cached_property
    def rows(self) -> list[list[float]]:
        """Distance matrix as nested lists; much faster to index in tight loops."""
        return self.dist.tolist()

    @property
    def has_coordinates(self) -> bool:
        return self.coords is not None

    @cached_property
    def params(self) -> DerivedParams:
        lt = self.speed * self.sweep_period
        lc = self.speed * self.charge_period
        q = q_hat = None
        if self.charge_period >= self.sweep_period:
            q = _integer_ratio(self.charge_period / self.sweep_period)
        else:
            q_hat = _integer_ratio(self.sweep_period / self.charge_period)
            if q_hat is not None and q_hat < 2:
                q_hat = None
        if q is None and q_hat is None:
            raise InstanceError(
                f"periods are not integer multiples: T_t={self.sweep_period}, "
                f"T_c={self.charge_period}")
        return DerivedParams(lt, lc, q, q_hat,
                             max(self.sweep_period, self.charge_period))

    @property
    def eps_time(self) -> float:
        return EPS_LEN / self.speed

    def with_sensors(self, sensors: int) -> "Instance":
        return Instance(self.n_targets, self.n_chargers, self.dist, self.speed,
                        self.sweep_period, self.charge_period, sensors,
                        self.coords)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        same_coords = (self.coords is None and other.coords is None) or (
            self.coords is not None and other.coords is not None
            and np.array_equal(self.coords, other.coords))
        return (self.n_targets == other.n_targets
                and self.n_chargers == other.n_chargers
                and np.array_equal(self.dist, other.dist)
                and self.speed == other.speed
                and self.sweep_period == other.sweep_period
                and self.charge_period == other.charge_period
                and self.sensors == other.sensors and same_coords)

    __hash__ = None


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    nodes: tuple[int, ...]
    message: str


@dataclass
class ValidationReport:
    """Violations make an instance unusable; notes are informational only."""
    violations: list[Violation] = field(default_factory=list)
    notes: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        def enc(vs):
            return [{"code": v.code, "nodes": list(v.nodes), "message": v.message}
                    for v in vs]
        return {"ok": self.ok, "violations": enc(self.violations),
                "notes": enc(self.notes)}


def validate(instance: Instance) -> ValidationReport:
    report = ValidationReport()
    bad = report.violations.append
    n, k = instance.n_targets, instance.n_chargers
    if n < 1:
        bad(Violation("count", (), "need at least one target"))
    if k < 1:
        bad(Violation("count", (), "need at least one charger"))
    if instance.sensors < 1:
        bad(Violation("count", (), "need at least one sensor"))
    for name in ("speed", "sweep_period", "charge_period"):
        value = getattr(instance, name)
        if not (math.isfinite(value) and value > 0):
            bad(Violation("nonpositive", (), f"{name} must be > 0, got {value}"))

    d = instance.dist
    if not np.all(np.isfinite(d)):
        bad(Violation("nonfinite", (), "distance matrix has non-finite entries"))
        return report
    for i, j in zip(*np.nonzero(d < 0)):
        if i < j or d[j, i] >= 0:
            bad(Violation("negative", (int(i), int(j)), f"dist({i},{j}) < 0"))
    for i in np.nonzero(np.abs(np.diag(d)) > EPS_LEN)[0]:
        bad(Violation("diagonal", (int(i),), f"dist({i},{i}) != 0"))
    asym = np.abs(d - d.T) > EPS_LEN
    for i, j in zip(*np.nonzero(np.triu(asym))):
        bad(Violation("asymmetric", (int(i), int(j)), f"dist({i},{j}) != dist({j},{i})"))
    # d[i, j] > d[i, m] + d[m, j]; reported as (i, j, m) with i < j
    for m in range(d.shape[0]):
        through = d[:, m][:, None] + d[m, :][None, :]
        for i, j in zip(*np.nonzero(np.triu(d > through + EPS_LEN, 1))):
            bad(Violation("triangle", (int(i), int(j), m),
                          f"dist({i},{j})={d[i, j]:g} > dist({i},{m})+dist({m},{j})"))

    if all(getattr(instance, a) > 0 for a in ("sweep_period", "charge_period")):
        try:
            instance.params
        except InstanceError as exc:
            bad(Violation("multiplicity", (), str(exc)))

    for c in range(k):
        node = n + c
        for t in np.nonzero(np.abs(d[node, :n]) <= EPS_LEN)[0]:
            report.notes.append(Violation(
                "colocated", (int(t), node), f"target {t} coincides with charger {c}"))
    return report


def require_valid(instance: Instance, allow_no_targets: bool = False) -> DerivedParams:
    report = validate(instance)
    problems = [v for v in report.violations
                if not (allow_no_targets and v.message == "need at least one target")]
    if problems:
        raise InstanceError("; ".join(v.message for v in problems[:5]))
    return instance.params


# -- induced views ----------------------------------------------------------

@dataclass(frozen=True)
class View:
    """The chargers plus a subset of still-uncovered targets.

    Distances are read straight from the parent instance; nothing is copied.
    """
    instance: Instance
    targets: tuple[int, ...]

    def without(self, removed: Iterable[int]) -> "View":
        gone = set(removed)
        return View(self.instance, tuple(t for t in self.targets if t not in gone))

    @property
    def chargers(self) -> range:
        return self.instance.charger_ids

    def dist(self, u: int, v: int) -> float:
        return self.instance.rows[u][v]

    def __len__(self):
        return len(self.targets)


def induced_subgraph(instance: Instance, uncovered: Iterable[int]) -> View:
    ids = sorted(set(uncovered))
    for t in ids:
        if not (isinstance(t, (int, np.integer)) and 0 <= t < instance.n_targets):
            raise InstanceError(f"unknown target id {t!r}")
    return View(instance, tuple(int(t) for t in ids))


def full_view(instance: Instance) -> View:
    return View(instance, tuple(instance.target_ids))


# -- serialization ----------------------------------------------------------

_REQUIRED = ("targets", "chargers", "speed", "sweep_period", "charge_period", "sensors")


def _number(doc: dict, key: str) -> float:
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(key, f"expected a number, got {type(v).__name__}")
    return float(v)


def _nodes(doc: dict, key: str) -> list[dict]:
    nodes = doc[key]
    if not isinstance(nodes, list):
        raise ParseError(key, "expected a list")
    for i, node in enumerate(nodes):
        if not isinstance(node, dict) or "id" not in node:
            raise ParseError(f"{key}[{i}]", "expected an object with an 'id'")
    ids = sorted(node["id"] for node in nodes)
    if ids != list(range(len(nodes))):
        raise ParseError(key, "ids must be 0..n-1")
    return sorted(nodes, key=lambda node: node["id"])


def from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("$", "expected a JSON object")
    for key in _REQUIRED:
        if key not in doc:
            raise ParseError(key, "missing field")
    targets, chargers = _nodes(doc, "targets"), _nodes(doc, "chargers")
    sensors = doc["sensors"]
    if isinstance(sensors, bool) or not isinstance(sensors, int):
        raise ParseError("sensors", "expected an integer")
    common = dict(speed=_number(doc, "speed"),
                  sweep_period=_number(doc, "sweep_period"),
                  charge_period=_number(doc, "charge_period"), sensors=sensors)
    nodes = targets + chargers
    with_xy = ["x" in node and "y" in node for node in nodes]
    coords = None
    if all(with_xy) and nodes:
        for key, group in (("targets", targets), ("chargers", chargers)):
            for node in group:
                for axis in ("x", "y"):
                    v = node[axis]
                    if isinstance(v, bool) or not isinstance(v, (int, float)):
                        raise ParseError(f"{key}[{node['id']}].{axis}", "expected a number")
        coords = [(float(p["x"]), float(p["y"])) for p in nodes]
    elif any(with_xy):
        raise ParseError("targets", "either every node has x/y or none does")

    if "dist" in doc:
        raw = doc["dist"]
        n = len(nodes)
        if not isinstance(raw, list) or len(raw) != n:
            raise ParseError("dist", f"expected {n} rows")
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"dist[{i}]", f"expected {n} entries")
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ParseError(f"dist[{i}][{j}]", "expected a number")
                if v < 0:
                    raise ParseError(f"dist[{i}][{j}]", "negative distance")
        inst = Instance.from_matrix(raw, len(targets), **common)
        if coords is not None:
            inst = Instance(inst.n_targets, inst.n_chargers, inst.dist, inst.speed,
                            inst.sweep_period, inst.charge_period, inst.sensors,
                            coords=coords)
        return inst
    if coords is None:
        raise ParseError("dist", "missing field (required when nodes have no coordinates)")
    return Instance.from_coordinates(coords[:len(targets)], coords[len(targets):], **common)


def to_dict(instance: Instance) -> dict[str, Any]:
    def nodes(rng, offset):
        out = []
        for i in rng:
            node: dict[str, Any] = {"id": i}
            if instance.coords is not None:
                x, y = instance.coords[offset + i]
                node["x"], node["y"] = float(x), float(y)
            out.append(node)
        return out

    doc: dict[str, Any] = {
        "targets": nodes(instance.target_ids, 0),
        "chargers": nodes(instance.charger_ids, instance.n_targets),
    }
    if instance.coords is None or not np.array_equal(
            instance.dist, Instance.from_coordinates(
                instance.coords[:instance.n_targets], instance.coords[instance.n_targets:],
                speed=1, sweep_period=1, charge_period=1, sensors=1).dist):
        doc["dist"] = instance.dist.tolist()
    doc.update(speed=instance.speed, sweep_period=instance.sweep_period,
               charge_period=instance.charge_period, sensors=instance.sensors)
    return doc


def load(data: bytes | str) -> Instance:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"malformed JSON: {exc}") from None
    return from_dict(doc)


def save(instance: Instance) -> bytes:
    return json.dumps(to_dict(instance), indent=1).encode("utf-8")
