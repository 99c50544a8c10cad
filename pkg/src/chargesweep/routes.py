"""Routes and schedules: segments, loops, per-sensor itineraries.

A :class:`Segment` is a charger-to-charger walk through targets.  A
:class:`Loop` chains segments cyclically.  Several sensors may share one loop;
they are spread evenly along it in time, which is how one loop of length
``k * L_t`` is swept by ``k`` sensors.

Phase convention: an itinerary's ``phase`` is the time at which its sensor is
at the start charger of the loop's first segment.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Sequence

from .instance import EPS_LEN, Instance, InstanceError, ParseError


class ContractError(ValueError):
    """A routine was called outside its documented precondition."""


class VariantError(ContractError):
    """Instance does not satisfy the preconditions of the requested solver."""


class Variant(str, Enum):
    RCSC_TC_GE_TT = "rcsc_tc_ge_tt"
    RCSC_TT_GT_TC = "rcsc_tt_gt_tc"
    CSC2_TC_GE_TT = "csc2_tc_ge_tt"
    CSC2_TT_GT_TC = "csc2_tt_gt_tc"

    @property
    def family(self) -> str:
        return self.value.split("_", 1)[0]

    @property
    def restricted(self) -> bool:
        return self.family == "rcsc"

    @classmethod
    def for_instance(cls, family: str, instance: Instance) -> "Variant":
        if family not in ("rcsc", "csc2"):
            raise ValueError(f"unknown variant family {family!r}")
        suffix = "tc_ge_tt" if instance.params.charge_ge_sweep else "tt_gt_tc"
        return cls(f"{family}_{suffix}")


def walk_length(instance: Instance, nodes: Sequence[int]) -> float:
    rows = instance.rows
    return sum(rows[u][v] for u, v in zip(nodes, nodes[1:]))


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    via: tuple[int, ...]
    length: float

    @classmethod
    def build(cls, instance: Instance, start: int, end: int,
              via: Iterable[int] = ()) -> "Segment":
        via = tuple(int(t) for t in via)
        for t in via:
            if not 0 <= t < instance.n_targets:
                raise InstanceError(f"unknown target {t}")
        seg = cls(int(start), int(end), via, 0.0)
        return cls(seg.start, seg.end, via, walk_length(instance, seg.nodes(instance)))

    def nodes(self, instance: Instance) -> list[int]:
        return [instance.charger_node(self.start), *self.via,
                instance.charger_node(self.end)]

    def measure(self, instance: Instance) -> float:
        return walk_length(instance, self.nodes(instance))

    def reversed(self) -> "Segment":
        return Segment(self.end, self.start, self.via[::-1], self.length)

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(self.via)

    @property
    def is_self(self) -> bool:
        return self.start == self.end

    def to_dict(self) -> dict[str, Any]:
        return {"start": self.start, "end": self.end, "via": list(self.via),
                "length": self.length}


@dataclass(frozen=True)
class Loop:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ContractError("a loop needs at least one segment")
        for cur, nxt in zip(segs, segs[1:] + segs[:1]):
            if cur.end != nxt.start:
                raise ContractError(
                    f"segments do not chain: ...->{cur.end} then {nxt.start}->...")
        object.__setattr__(self, "segments", segs)

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(t for s in self.segments for t in s.via)

    @property
    def start(self) -> int:
        return self.segments[0].start

    @property
    def chargers(self) -> frozenset[int]:
        return frozenset(c for s in self.segments for c in (s.start, s.end))

    @property
    def is_self_loop(self) -> bool:
        return len(self.segments) == 1 and self.segments[0].is_self

    @property
    def is_mutual(self) -> bool:
        return (len(self.segments) == 2
                and self.segments[0].start != self.segments[0].end)

    def node_walk(self, instance: Instance) -> list[tuple[int, float]]:
        """(node, arc position) for every node visit in one lap.

        The closing charger of the last segment is not repeated; the walk wraps
        at ``total_length`` measured from the instance.
        """
        out: list[tuple[int, float]] = []
        rows = instance.rows
        arc = 0.0
        for seg in self.segments:
            nodes = seg.nodes(instance)
            if not out:
                out.append((nodes[0], 0.0))
            for u, v in zip(nodes, nodes[1:]):
                arc += rows[u][v]
                out.append((v, arc))
        out.pop()
        return out

    def lap_length(self, instance: Instance) -> float:
        return sum(s.measure(instance) for s in self.segments)


@dataclass(frozen=True)
class Itinerary:
    sensor_id: int
    loop: Loop
    phase: float
    segment_budget: float

    def period(self, speed: float) -> float:
        return self.loop.total_length / speed


@dataclass(frozen=True)
class Schedule:
    itineraries: tuple[Itinerary, ...]
    covered: frozenset[int]
    variant: Variant

    @property
    def sensor_ids(self) -> set[int]:
        return {it.sensor_id for it in self.itineraries}

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "covered": sorted(self.covered),
            "itineraries": [
                {"sensor": it.sensor_id, "phase": it.phase,
                 "segment_budget": it.segment_budget,
                 "segments": [s.to_dict() for s in it.loop.segments]}
                for it in self.itineraries],
        }

    @classmethod
    def from_dict(cls, doc: Any) -> "Schedule":
        if not isinstance(doc, dict):
            raise ParseError("$", "expected a JSON object")
        for key in ("variant", "covered", "itineraries"):
            if key not in doc:
                raise ParseError(key, "missing field")
        try:
            variant = Variant(doc["variant"])
        except ValueError:
            raise ParseError("variant", f"unknown variant {doc['variant']!r}") from None
        its = []
        for i, raw in enumerate(doc["itineraries"]):
            path = f"itineraries[{i}]"
            try:
                segs = tuple(Segment(int(s["start"]), int(s["end"]),
                                     tuple(int(t) for t in s["via"]),
                                     float(s["length"]))
                             for s in raw["segments"])
                its.append(Itinerary(int(raw["sensor"]), Loop(segs),
                                     float(raw["phase"]),
                                     float(raw.get("segment_budget", math.inf))))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(path, f"bad itinerary: {exc}") from None
        return cls(tuple(its), frozenset(int(t) for t in doc["covered"]), variant)

    def dumps(self) -> bytes:
        return json.dumps(self.to_dict(), indent=1).encode("utf-8")

    @classmethod
    def loads(cls, data: bytes | str) -> "Schedule":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError("$", f"malformed JSON: {exc}") from None
        return cls.from_dict(doc)


def targets_on(schedule: Schedule) -> frozenset[int]:
    return frozenset(t for it in schedule.itineraries for t in it.loop.targets)


def place_sensors_on_loop(loop: Loop, count: int, sweep_length: float, speed: float,
                          *, first_sensor: int = 0,
                          segment_budget: float | None = None) -> list[Itinerary]:
    """Spread ``count`` sensors evenly (in time) around ``loop``.

    The loop may be shorter than ``count * sweep_length``; then the spacing is
    ``total_length / count`` instead of exactly one sweep length.
    """
    if count < 1:
        raise ContractError("need at least one sensor")
    total = loop.total_length
    if total > count * sweep_length + EPS_LEN * max(1.0, count * sweep_length):
        raise ContractError(
            f"loop of length {total:g} cannot be swept by {count} sensors "
            f"spaced at most {sweep_length:g} apart")
    step = total / count / speed
    budget = count * sweep_length if segment_budget is None else segment_budget
    return [Itinerary(first_sensor + i, loop, i * step, budget) for i in range(count)]


# -- chaining segments into sensor itineraries ------------------------------

@dataclass(frozen=True)
class Chain:
    """A closed walk plus the number of sensors spread evenly along it."""
    loop: Loop
    sensors: int


def closed_walk(segments: Sequence[Segment], a: int, b: int) -> Loop:
    """Order a multiset of a-self, b-self and a<->b segments into one closed walk."""
    a_self = [s for s in segments if s.is_self and s.start == a]
    b_self = [s for s in segments if s.is_self and s.start == b]
    cross = [s for s in segments if not s.is_self]
    if len(a_self) + len(b_self) + len(cross) != len(segments):
        raise ContractError("segments must be self-loops at a or b, or a-b crossings")
    if any({s.start, s.end} != {a, b} for s in cross):
        raise ContractError("crossing segment does not join a and b")
    if len(cross) % 2:
        raise ContractError("an odd number of a-b crossings cannot close")
    if a_self and b_self and not cross:
        raise ContractError("a-loops and b-loops cannot chain without a crossing")

    def oriented(seg: Segment, frm: int) -> Segment:
        return seg if seg.start == frm else seg.reversed()

    if not cross:
        return Loop(tuple(a_self or b_self))
    walk = list(a_self)
    walk.append(oriented(cross[0], a))
    walk.extend(b_self)
    walk.append(oriented(cross[1], b))
    for i, seg in enumerate(cross[2:]):
        walk.append(oriented(seg, a if i % 2 == 0 else b))
    return Loop(tuple(walk))


def chain_segments(segments: Sequence[Segment], q_hat: int, a: int = 0,
                   b: int = 1) -> list[Chain]:
    """Assign ``q_hat``-segment sensor periods to a two-charger segment multiset.

    Groups: whole blocks of ``q_hat`` a-loops, then b-loops, then crossings
    (pairs of sensors share ``2 * q_hat`` crossings when ``q_hat`` is odd),
    and finally everything left over on one shared closed walk.
    """
    if q_hat < 1:
        raise ContractError("q_hat must be >= 1")
    a_self = [s for s in segments if s.is_self and s.start == a]
    b_self = [s for s in segments if s.is_self and s.start == b]
    cross = [s for s in segments if not s.is_self]
    if len(a_self) + len(b_self) + len(cross) != len(segments):
        raise ContractError("segments must be self-loops at a or b, or a-b crossings")
    if len(cross) % 2:
        raise ContractError("an odd number of a-b crossings cannot close")

    chains: list[Chain] = []
    for pool in (a_self, b_self):
        whole = len(pool) // q_hat * q_hat
        for i in range(0, whole, q_hat):
            chains.append(Chain(Loop(tuple(pool[i:i + q_hat])), 1))
        del pool[:whole]

    block, per = (q_hat, 1) if q_hat % 2 == 0 else (2 * q_hat, 2)
    cross_chains = []
    while len(cross) >= block:
        part, cross = cross[:block], cross[block:]
        cross_chains.append(Chain(closed_walk(part, a, b), per))

    if a_self and b_self and not cross:
        if not cross_chains:
            raise ContractError(
                f"{len(a_self)} a-loops and {len(b_self)} b-loops left over "
                f"with no crossing to join them")
        dissolved = cross_chains.pop()
        cross = list(dissolved.loop.segments)
    chains.extend(cross_chains)
    rest = a_self + b_self + cross
    if rest:
        chains.append(Chain(closed_walk(rest, a, b), -(-len(rest) // q_hat)))
    return chains
