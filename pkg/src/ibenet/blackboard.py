"""Blackboard node kernel.

A node owns a fixed set of abstraction levels. Knowledge sources are
packages of production rules (internal behaviours) that read the levels and
create, modify or retract solution elements. Behaviours flagged ``uses_reac``
first register an activation (a REAC) for every matching rule; the control
mechanism then executes only the strongest one. Nodes talk to each other
through channels that copy elements written on a source level into a
destination level of the receiving node, one cycle later.

    >>> cog = NodeState(NodeId.COGNITIVE)
    >>> mot = NodeState(NodeId.MOTIVATIONAL)
    >>> ch = connect(cog, mot, {"perceptual-persistents": "external-perceptions"})
    >>> lvl = LevelId("cognitive", "perceptual-persistents")
    >>> _ = post_element(cog, lvl, SolutionElement("food", lvl, 0.7))
    >>> _, out = run_cycle(cog)
    >>> _, _ = run_cycle(mot, out[ch])
    >>> [e.certainty for e in read_elements(mot, LevelId("motivational", "external-perceptions"))]
    [0.7]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import StructuralError

__all__ = [
    "NodeId",
    "LEVEL_NAMES",
    "LevelId",
    "SolutionElement",
    "Firing",
    "ElementaryBehaviour",
    "InternalBehaviour",
    "Reac",
    "Channel",
    "NodeState",
    "post_element",
    "retract_element",
    "clear_level",
    "read_elements",
    "connect",
    "run_cycle",
]


class NodeId(str, Enum):
    COGNITIVE = "cognitive"
    MOTIVATIONAL = "motivational"


LEVEL_NAMES: dict[NodeId, tuple[str, ...]] = {
    NodeId.COGNITIVE: (
        "external-perceptions",
        "perceptual-persistents",
        "consummatory-preferents",
        "drive/perception-congruents",
        "potential-actions",
        "actions",
    ),
    NodeId.MOTIVATIONAL: (
        "internal-perceptions",
        "external-perceptions",
        "propio/extero/drive-congruents",
        "drive",
    ),
}


@dataclass(frozen=True, order=True)
class LevelId:
    """One abstraction level of one node. Only the declared names construct."""

    node: NodeId
    name: str

    def __post_init__(self) -> None:
        try:
            node = NodeId(self.node)
        except ValueError:
            raise StructuralError(f"unknown node {self.node!r}") from None
        object.__setattr__(self, "node", node)
        if self.name not in LEVEL_NAMES[node]:
            raise StructuralError(f"{node.value} node has no level {self.name!r}")

    def __str__(self) -> str:
        return f"{self.node.value}:{self.name}"

    @classmethod
    def parse(cls, text: str) -> "LevelId":
        node, sep, name = text.partition(":")
        if not sep:
            raise StructuralError(f"level must be written node:name, got {text!r}")
        return cls(node, name)


def _as_level(node: NodeId, level: "LevelId | str") -> LevelId:
    if isinstance(level, LevelId):
        return level
    if ":" in level:
        return LevelId.parse(level)
    return LevelId(node, level)


@dataclass(frozen=True)
class SolutionElement:
    """A certainty-tagged assertion living on one level."""

    id: str
    level: LevelId
    certainty: float
    tick: int = 0
    attrs: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        c = self.certainty
        if not (isinstance(c, (int, float)) and math.isfinite(c) and 0.0 <= c <= 1.0):
            raise ValueError(f"certainty of {self.id!r} must lie in [0, 1], got {c!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "level": str(self.level),
            "certainty": float(self.certainty),
            "tick": self.tick,
            "attrs": dict(self.attrs),
        }


@dataclass(frozen=True)
class Firing:
    """What a rule would do if executed.

    ``activation`` is the certainty the action writes; it becomes the REAC
    activation for behaviours that go through the control mechanism.
    """

    activation: float
    writes: tuple[SolutionElement, ...] = ()
    retracts: tuple[tuple[LevelId, str], ...] = ()
    bound: tuple[str, ...] = ()


@dataclass(frozen=True)
class ElementaryBehaviour:
    """A production rule.

    ``evaluate`` inspects the node and returns the Firing its action would
    perform, or None when the condition does not hold.
    """

    id: str
    evaluate: Callable[["NodeState"], Firing | None]


@dataclass(frozen=True)
class InternalBehaviour:
    id: str
    rules: tuple[ElementaryBehaviour, ...]
    uses_reac: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.rules:
            raise StructuralError(f"internal behaviour {self.id!r} has no rules")
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise StructuralError(f"duplicate rule ids in {self.id!r}: {ids}")


@dataclass(frozen=True)
class Reac:
    behaviour_id: str
    rule_id: str
    activation: float
    bound_elements: tuple[str, ...]
    tick: int

    def to_dict(self) -> dict:
        return {
            "behaviour": self.behaviour_id,
            "rule": self.rule_id,
            "activation": float(self.activation),
            "bound": list(self.bound_elements),
            "tick": self.tick,
        }


@dataclass(frozen=True)
class Channel:
    id: str
    sender: NodeId
    receiver: NodeId
    level_map: Mapping[LevelId, LevelId]


@dataclass
class NodeState:
    node_id: NodeId
    behaviours: list[InternalBehaviour] = field(default_factory=list)
    tick: int = 0
    elements: dict[LevelId, dict[str, SolutionElement]] = field(default_factory=dict)
    reacs: list[Reac] = field(default_factory=list)
    transmitters: list[Channel] = field(default_factory=list)
    receptors: list[Channel] = field(default_factory=list)
    # (level, id) pairs written since the last emission
    _written: list[tuple[LevelId, str]] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self.node_id = NodeId(self.node_id)
        for name in LEVEL_NAMES[self.node_id]:
            self.elements.setdefault(LevelId(self.node_id, name), {})

    @property
    def levels(self) -> tuple[LevelId, ...]:
        return tuple(LevelId(self.node_id, n) for n in LEVEL_NAMES[self.node_id])

    def level(self, name: str) -> LevelId:
        return _as_level(self.node_id, name)

    def get(self, level: LevelId | str, element_id: str) -> SolutionElement | None:
        lvl = self._own(level)
        return self.elements[lvl].get(element_id)

    def certainty(self, level: LevelId | str, element_id: str, default: float = 0.0) -> float:
        elem = self.get(level, element_id)
        return default if elem is None else elem.certainty

    def _own(self, level: LevelId | str) -> LevelId:
        lvl = _as_level(self.node_id, level)
        if lvl.node != self.node_id:
            raise StructuralError(f"level {lvl} does not belong to the {self.node_id.value} node")
        return lvl

    def to_dict(self) -> dict:
        """Deterministic, JSON-ready snapshot."""
        return {
            "node": self.node_id.value,
            "tick": self.tick,
            "levels": {
                str(lvl): [self.elements[lvl][k].to_dict() for k in sorted(self.elements[lvl])]
                for lvl in self.levels
            },
            "reacs": [r.to_dict() for r in self.reacs],
            "behaviours": [b.id for b in self.behaviours],
            "links": sorted(c.id for c in self.transmitters + self.receptors),
        }


def post_element(node: NodeState, level: LevelId | str, elem: SolutionElement) -> NodeState:
    """Create or replace ``elem`` on ``level``; the tick is stamped from the node."""
    lvl = node._own(level)
    stored = replace(elem, level=lvl, tick=node.tick)
    node.elements[lvl][stored.id] = stored
    node._written.append((lvl, stored.id))
    return node


def retract_element(node: NodeState, level: LevelId | str, element_id: str) -> NodeState:
    lvl = node._own(level)
    node.elements[lvl].pop(element_id, None)
    return node


def clear_level(node: NodeState, level: LevelId | str) -> NodeState:
    node.elements[node._own(level)].clear()
    return node


def read_elements(
    node: NodeState, level: LevelId | str, id_filter: str | None = None
) -> list[SolutionElement]:
    lvl = node._own(level)
    elems = node.elements[lvl]
    if id_filter is not None:
        return [elems[id_filter]] if id_filter in elems else []
    return [elems[k] for k in sorted(elems)]


def connect(
    sender: NodeState,
    receiver: NodeState,
    level_map: Mapping[LevelId | str, LevelId | str],
) -> str:
    """Wire a transmitter on ``sender`` to a receptor on ``receiver``.

    Keys of ``level_map`` are sender levels, values receiver levels; bare
    names are resolved against the respective node.
    """
    resolved: dict[LevelId, LevelId] = {}
    for src, dst in level_map.items():
        s = _as_level(sender.node_id, src)
        d = _as_level(receiver.node_id, dst)
        if s.node != sender.node_id:
            raise StructuralError(f"source level {s} is not on the sender")
        if d.node != receiver.node_id:
            raise StructuralError(f"destination level {d} is not on the receiver")
        resolved[s] = d
    n = len(sender.transmitters)
    ch = Channel(
        id=f"{sender.node_id.value}->{receiver.node_id.value}#{n}",
        sender=sender.node_id,
        receiver=receiver.node_id,
        level_map=resolved,
    )
    sender.transmitters.append(ch)
    receiver.receptors.append(ch)
    return ch.id


def _execute(node: NodeState, firing: Firing) -> None:
    for elem in firing.writes:
        post_element(node, elem.level, elem)
    for lvl, eid in firing.retracts:
        retract_element(node, lvl, eid)


def _collect_emissions(node: NodeState) -> dict[str, list[SolutionElement]]:
    written = sorted(set(node._written))
    node._written.clear()
    out: dict[str, list[SolutionElement]] = {}
    for ch in node.transmitters:
        batch = []
        for lvl, eid in written:
            dst = ch.level_map.get(lvl)
            if dst is None:
                continue
            elem = node.elements[lvl].get(eid)
            if elem is not None:
                batch.append(replace(elem, level=dst))
        out[ch.id] = batch
    return out


def run_cycle(
    node: NodeState,
    inputs: Iterable[SolutionElement] = (),
    only: Sequence[str] | None = None,
) -> tuple[NodeState, dict[str, list[SolutionElement]]]:
    """One control cycle.

    Receptor deliveries are posted first. Behaviours then run in declared
    order (restricted to ``only`` when given). Non-REAC behaviours fire every
    matching rule in rule order. REAC behaviours register every match and the
    control mechanism fires the highest activation, ties going to the
    lexicographically smallest rule id. Returns the node and the emissions
    per transmitter channel, already re-addressed to receiver levels.
    """
    node.reacs = []
    for elem in inputs:
        post_element(node, elem.level, elem)
    for beh in node.behaviours:
        if only is not None and beh.id not in only:
            continue
        if not beh.uses_reac:
            for rule in beh.rules:
                firing = rule.evaluate(node)
                if firing is not None:
                    _execute(node, firing)
            continue
        registered: list[tuple[Reac, Firing]] = []
        for rule in beh.rules:
            firing = rule.evaluate(node)
            if firing is None:
                continue
            reac = Reac(beh.id, rule.id, float(firing.activation), tuple(firing.bound), node.tick)
            registered.append((reac, firing))
        node.reacs.extend(r for r, _ in registered)
        if registered:
            _, winner = min(registered, key=lambda rf: (-rf[0].activation, rf[0].rule_id))
            _execute(node, winner)
    return node, _collect_emissions(node)
