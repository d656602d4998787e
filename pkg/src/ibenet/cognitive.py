"""Cognitive node behaviours.

Four knowledge sources run here, in this order within a tick:

* perceptual persistence keeps a decaying memory of what was seen,
* attention to preferences turns the motivational winner into one
  appetitive or consummatory action (or plain wandering),
* reflex response inhibition lets aversive/obstacle reflexes through only
  when they are at least as strong as every motivated candidate,
* the external behaviours selector picks the single action to execute.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import StructuralError
from .motivational import CongruenceBehaviour

ACTION_IDS = (
    "wander",
    "explore-for",
    "approach",
    "avoid-obstacles",
    "rest",
    "eat",
    "drink",
    "runaway",
)
PARAMETERIZED = frozenset({"explore-for", "approach"})
SOURCE_RANK = {"reflex": 0, "motivated": 1, "default": 2}

DROP_BELOW = 0.01
WANDER_PRIORITY = 0.05


@dataclass(frozen=True)
class Percept:
    """One perceived stimulus. ``source`` names the world object, if any."""

    stimulus_id: str
    certainty: float
    bearing: float = 0.0
    distance: float = 0.0
    source: str = ""

    def __post_init__(self) -> None:
        c = self.certainty
        if not (math.isfinite(c) and 0.0 <= c <= 1.0):
            raise ValueError(f"percept certainty must lie in [0, 1], got {c!r}")

    @property
    def key(self) -> str:
        return f"{self.stimulus_id}:{self.source}" if self.source else self.stimulus_id


@dataclass(frozen=True)
class PersistentPercept(Percept):
    age: int = 0


@dataclass(frozen=True)
class PotentialAction:
    action_id: str
    priority: float
    source: str = "motivated"
    kind: str | None = None
    target: str | None = None

    def __post_init__(self) -> None:
        if self.action_id not in ACTION_IDS:
            raise ValueError(f"unknown action {self.action_id!r}")
        if self.action_id in PARAMETERIZED and not self.kind:
            raise ValueError(f"{self.action_id} needs a stimulus kind")
        if self.source not in SOURCE_RANK:
            raise ValueError(f"unknown action source {self.source!r}")
        if not (math.isfinite(self.priority) and 0.0 <= self.priority <= 1.0):
            raise ValueError(f"priority must lie in [0, 1], got {self.priority!r}")

    @property
    def label(self) -> str:
        if self.action_id in PARAMETERIZED:
            return f"{self.action_id}({self.kind})"
        return self.action_id

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "action": self.action_id,
            "kind": self.kind,
            "target": self.target,
            "priority": float(self.priority),
            "source": self.source,
        }


def persist_percepts(
    direct: Iterable[Percept],
    previous: Iterable[PersistentPercept],
    rho: float,
    drop_below: float = DROP_BELOW,
) -> list[PersistentPercept]:
    """Refresh what is seen now, decay what is only remembered.

    Returned in key order.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"persistence decay must lie in (0, 1), got {rho!r}")
    out: dict[str, PersistentPercept] = {}
    for p in direct:
        out[p.key] = PersistentPercept(
            p.stimulus_id, p.certainty, p.bearing, p.distance, p.source, age=0
        )
    for p in previous:
        if p.key in out:
            continue
        c = p.certainty * rho
        if c < drop_below:
            continue
        out[p.key] = PersistentPercept(
            p.stimulus_id, c, p.bearing, p.distance, p.source, age=p.age + 1
        )
    return [out[k] for k in sorted(out)]


def attend_to_preferences(
    preference: str | None,
    persistents: Sequence[PersistentPercept],
    congruent_certainty: float,
    contact_range: float,
    drives: Mapping[str, CongruenceBehaviour],
    wander_priority: float = WANDER_PRIORITY,
) -> list[PotentialAction]:
    """Exactly one motivated or default action for this cycle.

    A preferred drive with a remembered coupled stimulus yields an approach,
    or the consummatory act once the stimulus is directly perceived within
    ``contact_range``. A preferred drive with nothing to go for yields a
    directed exploration for its best-coupled stimulus. No preference means
    wandering.
    """
    if preference is None:
        return [PotentialAction("wander", wander_priority, source="default")]
    beh = drives[preference]
    priority = min(1.0, max(0.0, congruent_certainty))
    matching = [
        p for p in persistents if beh.couplings.get(p.stimulus_id, 0.0) > 0.0 and p.certainty > 0.0
    ]
    if not matching:
        sought = min(beh.couplings, key=lambda k: (-beh.couplings[k], k))
        return [PotentialAction("explore-for", priority, kind=sought)]
    best = min(
        matching,
        key=lambda p: (-beh.couplings[p.stimulus_id] * p.certainty, p.distance, p.key),
    )
    target = best.source or None
    if best.age == 0 and best.distance <= contact_range:
        return [PotentialAction(beh.consummatory, priority, kind=best.stimulus_id, target=target)]
    return [PotentialAction("approach", priority, kind=best.stimulus_id, target=target)]


def reflex_actions(
    percepts: Iterable[Percept], g_r: float = 1.0, g_o: float = 0.8
) -> list[PotentialAction]:
    """Runaway from the strongest blob and avoidance of the strongest obstacle."""
    percepts = list(percepts)
    out = []
    for action, kind, gain in (("runaway", "blob", g_r), ("avoid-obstacles", "obstacle", g_o)):
        seen = percepts_of(percepts, kind)
        if not seen:
            continue
        strongest = min(seen, key=lambda p: (-p.certainty, p.key))
        priority = min(1.0, gain * strongest.certainty)
        if priority > 0.0:
            out.append(
                PotentialAction(action, priority, source="reflex", kind=kind,
                                target=strongest.source or None)
            )
    return out


def percepts_of(percepts: Iterable[Percept], kind: str) -> list[Percept]:
    return [p for p in percepts if p.stimulus_id == kind]


def inhibit_reflexes(
    motivated: Sequence[PotentialAction], reflex: Sequence[PotentialAction]
) -> list[PotentialAction]:
    """Keep every motivated action, and each reflex at least as strong as all of them."""
    ceiling = max((a.priority for a in motivated), default=0.0)
    return list(motivated) + [r for r in reflex if r.priority >= ceiling]


def _rank(a: PotentialAction) -> tuple:
    return (-a.priority, SOURCE_RANK[a.source], a.label)


def select_external_behaviour(candidates: Sequence[PotentialAction]) -> PotentialAction:
    if not candidates:
        raise StructuralError("no candidate actions reached the selector")
    return min(candidates, key=_rank)
