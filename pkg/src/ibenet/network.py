"""The two-node internal behaviour network.

``step`` runs one full decision tick:

1. exteroceptor percepts land on the cognitive external-perceptions level,
2. perceptual persistence updates the persistents,
3. the persistents are transmitted to the motivational external-perceptions,
4. proprioceptor needs land on the motivational internal-perceptions,
5. the congruence rules write one congruent per active drive,
6. the preference selector picks a winner, drive feedback is updated, and
   both are transmitted to the cognitive consummatory-preferents,
7. attention to preferences proposes the motivated action,
8. reflexes are generated and filtered by inhibition,
9. the external behaviours selector posts the chosen action.

The cognitive node therefore runs two control cycles per tick (stages 1-2
and 7-9) around one motivational cycle, so a percept can change the action
chosen in the same tick. The only one-tick delay is the drive feedback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from . import cognitive as cog
from .blackboard import (
    ElementaryBehaviour,
    Firing,
    InternalBehaviour,
    LevelId,
    NodeId,
    NodeState,
    SolutionElement,
    clear_level,
    connect,
    read_elements,
    run_cycle,
)
from .cognitive import Percept, PersistentPercept, PotentialAction
from .errors import ConfigError, InputError
from .motivational import (
    CongruenceBehaviour,
    DriveState,
    clamp01,
    congruence_condition,
    evaluate_congruence,
    update_drive,
)

# cognitive levels
EXT = LevelId(NodeId.COGNITIVE, "external-perceptions")
PERSIST = LevelId(NodeId.COGNITIVE, "perceptual-persistents")
PREFS = LevelId(NodeId.COGNITIVE, "consummatory-preferents")
DPCONG = LevelId(NodeId.COGNITIVE, "drive/perception-congruents")
POTENTIAL = LevelId(NodeId.COGNITIVE, "potential-actions")
ACTIONS = LevelId(NodeId.COGNITIVE, "actions")
# motivational levels
M_INT = LevelId(NodeId.MOTIVATIONAL, "internal-perceptions")
M_EXT = LevelId(NodeId.MOTIVATIONAL, "external-perceptions")
M_CONG = LevelId(NodeId.MOTIVATIONAL, "propio/extero/drive-congruents")
M_DRIVE = LevelId(NodeId.MOTIVATIONAL, "drive")

# levels refilled from scratch every tick; persistents and drive carry over
TRANSIENT = (EXT, PREFS, DPCONG, POTENTIAL, ACTIONS, M_INT, M_EXT, M_CONG)

PREFERENCE_ID = "preference"

B_PERSISTENCE = "perceptual-persistence"
B_ATTENTION = "attention-to-preferences"
B_INHIBITION = "reflex-response-inhibition"
B_SELECTOR = "external-behaviours-selector"
B_CONGRUENCE = "propio/extero/drive-congruence"
B_PREFERENCE = "consummatory-preferences-selector"
B_FEEDBACK = "drive-feedback"


@dataclass(frozen=True)
class SensorFrame:
    external: Sequence[Percept]
    internal: Mapping[str, float]


@dataclass(frozen=True)
class NetworkConfig:
    drives: Sequence[CongruenceBehaviour]
    alpha: float = 0.0
    lam: float = 0.3
    rho: float = 0.9
    contact_range: float = 1.0
    g_r: float = 1.0
    g_o: float = 0.8
    wander_priority: float = cog.WANDER_PRIORITY
    # congruents at or below this never win the preference competition
    activation_threshold: float = 0.0

    def validate(self) -> "NetworkConfig":
        if not self.drives:
            raise ConfigError("at least one drive is required")
        ids = [d.drive_id for d in self.drives]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate drive ids: {ids}")
        checks = [
            ("alpha", 0.0 <= self.alpha <= 1.0),
            ("lam", 0.0 <= self.lam < 1.0),
            ("rho", 0.0 < self.rho < 1.0),
            ("contact_range", self.contact_range > 0.0),
            ("g_r", self.g_r >= 0.0),
            ("g_o", self.g_o >= 0.0),
            ("wander_priority", 0.0 <= self.wander_priority <= 1.0),
            ("activation_threshold", 0.0 <= self.activation_threshold < 1.0),
        ]
        for name, ok in checks:
            if not ok:
                raise ConfigError(f"{name} out of range: {getattr(self, name)!r}")
        return self

    def resolved_drives(self) -> list[CongruenceBehaviour]:
        return [d if d.alpha is not None else d.with_alpha(self.alpha) for d in self.drives]

    def with_alpha(self, alpha: float) -> "NetworkConfig":
        """Same network with ``alpha`` applied to every drive, overrides included."""
        return replace(
            self, alpha=alpha, drives=[replace(d, alpha=None) for d in self.drives]
        ).validate()


@dataclass
class CycleReport:
    tick: int
    o_e: dict[str, float]
    o_s: dict[str, dict[str, float]]
    o_d: dict[str, float]
    alpha: dict[str, float]
    raw: dict[str, float]
    congruent: dict[str, float]
    active: dict[str, bool]
    preference: str | None
    preference_certainty: float
    drives_next: dict[str, float]
    persistents: list[PersistentPercept]
    candidates: list[PotentialAction]
    selected: PotentialAction
    reacs: list[dict] = field(default_factory=list)


# --- element <-> domain conversions -------------------------------------------------


def _percept_element(p: Percept, level: LevelId) -> SolutionElement:
    return SolutionElement(
        p.key,
        level,
        p.certainty,
        attrs={
            "kind": p.stimulus_id,
            "bearing": p.bearing,
            "distance": p.distance,
            "source": p.source,
            "age": getattr(p, "age", 0),
        },
    )


def _element_percept(e: SolutionElement) -> PersistentPercept:
    a = e.attrs
    return PersistentPercept(
        a["kind"], e.certainty, a["bearing"], a["distance"], a["source"], age=a["age"]
    )


def _action_element(a: PotentialAction, level: LevelId) -> SolutionElement:
    attrs = a.to_dict()
    del attrs["priority"]
    return SolutionElement(a.label, level, a.priority, attrs=attrs)


def _element_action(e: SolutionElement) -> PotentialAction:
    a = e.attrs
    return PotentialAction(a["action"], e.certainty, a["source"], a["kind"], a["target"])


def _stimuli(node: NodeState, level: LevelId, beh: CongruenceBehaviour) -> dict[str, float]:
    """Strongest certainty per coupled stimulus kind."""
    o_s = {k: 0.0 for k in beh.associated_stimuli}
    for e in read_elements(node, level):
        kind = e.attrs.get("kind", e.id)
        if kind in o_s and e.certainty > o_s[kind]:
            o_s[kind] = e.certainty
    return o_s


# --- motivational behaviours -----------------------------------------------------------


def _congruence_rule(beh: CongruenceBehaviour) -> ElementaryBehaviour:
    def evaluate(node: NodeState) -> Firing | None:
        o_e = node.certainty(M_INT, beh.drive_id)
        o_s = _stimuli(node, M_EXT, beh)
        if not congruence_condition(beh, o_e, o_s):
            return None
        o_d = node.certainty(M_DRIVE, beh.drive_id)
        raw = evaluate_congruence(beh, o_e, o_s, o_d)
        c = clamp01(raw)
        elem = SolutionElement(beh.drive_id, M_CONG, c, attrs={"raw": raw})
        return Firing(c, writes=(elem,), bound=(beh.drive_id, *sorted(o_s)))

    return ElementaryBehaviour(beh.drive_id, evaluate)


def _preference_rule(drive_id: str, threshold: float) -> ElementaryBehaviour:
    def evaluate(node: NodeState) -> Firing | None:
        c = node.certainty(M_CONG, drive_id)
        if c <= threshold:
            return None
        elem = SolutionElement(PREFERENCE_ID, M_DRIVE, c, attrs={"drive": drive_id})
        return Firing(c, writes=(elem,), bound=(drive_id,))

    return ElementaryBehaviour(drive_id, evaluate)


def _feedback_rule(drive_id: str, lam: float) -> ElementaryBehaviour:
    def evaluate(node: NodeState) -> Firing | None:
        d = DriveState(drive_id, node.certainty(M_DRIVE, drive_id), lam)
        d = update_drive(d, node.certainty(M_CONG, drive_id), node.certainty(M_INT, drive_id))
        elem = SolutionElement(drive_id, M_DRIVE, d.value)
        return Firing(d.value, writes=(elem,), bound=(drive_id,))

    return ElementaryBehaviour(drive_id, evaluate)


def _stale_preference(node: NodeState) -> Firing | None:
    pref = node.get(M_DRIVE, PREFERENCE_ID)
    if pref is None or pref.tick == node.tick:
        return None
    return Firing(0.0, retracts=((M_DRIVE, PREFERENCE_ID),))


def motivational_behaviours(
    drives: Sequence[CongruenceBehaviour], lam: float, threshold: float = 0.0
) -> list[InternalBehaviour]:
    ids = [d.drive_id for d in drives]
    feedback = [ElementaryBehaviour("~stale-preference", _stale_preference)]
    feedback += [_feedback_rule(i, lam) for i in ids]
    return [
        InternalBehaviour(B_CONGRUENCE, tuple(_congruence_rule(d) for d in drives)),
        InternalBehaviour(B_PREFERENCE, tuple(_preference_rule(i, threshold) for i in ids), uses_reac=True),
        InternalBehaviour(B_FEEDBACK, tuple(feedback)),
    ]


# --- cognitive behaviours --------------------------------------------------------------


def cognitive_behaviours(config: NetworkConfig, drives: Sequence[CongruenceBehaviour]) -> list[InternalBehaviour]:
    table = {d.drive_id: d for d in drives}

    def persistence(node: NodeState) -> Firing | None:
        direct = [_element_percept(e) for e in read_elements(node, EXT)]
        previous = [_element_percept(e) for e in read_elements(node, PERSIST)]
        kept = cog.persist_percepts(direct, previous, config.rho)
        keys = {p.key for p in kept}
        writes = tuple(_percept_element(p, PERSIST) for p in kept)
        retracts = tuple((PERSIST, p.key) for p in previous if p.key not in keys)
        top = max((p.certainty for p in kept), default=0.0)
        return Firing(top, writes=writes, retracts=retracts, bound=tuple(sorted(keys)))

    def attention(node: NodeState) -> Firing | None:
        pref = node.get(PREFS, PREFERENCE_ID)
        drive = None if pref is None else pref.attrs["drive"]
        certainty = 0.0 if pref is None else pref.certainty
        persistents = [_element_percept(e) for e in read_elements(node, PERSIST)]
        (action,) = cog.attend_to_preferences(
            drive, persistents, certainty, config.contact_range, table, config.wander_priority
        )
        return Firing(action.priority, writes=(_action_element(action, DPCONG),), bound=(action.label,))

    def inhibition(node: NodeState) -> Firing | None:
        motivated = [_element_action(e) for e in read_elements(node, DPCONG)]
        direct = [_element_percept(e) for e in read_elements(node, EXT)]
        reflex = cog.reflex_actions(direct, config.g_r, config.g_o)
        survivors = cog.inhibit_reflexes(motivated, reflex)
        top = max((a.priority for a in survivors), default=0.0)
        return Firing(top, writes=tuple(_action_element(a, POTENTIAL) for a in survivors))

    def selector_rule(source: str) -> ElementaryBehaviour:
        def evaluate(node: NodeState) -> Firing | None:
            mine = [_element_action(e) for e in read_elements(node, POTENTIAL)]
            mine = [a for a in mine if a.source == source]
            if not mine:
                return None
            best = cog.select_external_behaviour(mine)
            return Firing(best.priority, writes=(_action_element(best, ACTIONS),), bound=(best.label,))

        # rule ids sort in source-rank order so REAC ties favour reflexes
        return ElementaryBehaviour(f"{cog.SOURCE_RANK[source]}-{source}", evaluate)

    selector = tuple(selector_rule(s) for s in sorted(cog.SOURCE_RANK, key=cog.SOURCE_RANK.get))
    return [
        InternalBehaviour(B_PERSISTENCE, (ElementaryBehaviour("persist", persistence),)),
        InternalBehaviour(B_ATTENTION, (ElementaryBehaviour("attend", attention),)),
        InternalBehaviour(B_INHIBITION, (ElementaryBehaviour("inhibit", inhibition),)),
        InternalBehaviour(B_SELECTOR, selector, uses_reac=True),
    ]


# --- the network -------------------------------------------------------------------------


class IBeNet:
    """Cognitive and motivational blackboard nodes wired together."""

    def __init__(self, config: NetworkConfig):
        self.config = config.validate()
        self.drives = self.config.resolved_drives()
        self.tick = 0
        self.cognitive = NodeState(NodeId.COGNITIVE, cognitive_behaviours(self.config, self.drives))
        self.motivational = NodeState(
            NodeId.MOTIVATIONAL, motivational_behaviours(self.drives, self.config.lam, self.config.activation_threshold)
        )
        self.up = connect(self.cognitive, self.motivational, {PERSIST: M_EXT})
        self.down = connect(self.motivational, self.cognitive, {M_DRIVE: PREFS})
        self.pending: dict[NodeId, list[SolutionElement]] = {
            NodeId.COGNITIVE: [],
            NodeId.MOTIVATIONAL: [],
        }

    def drive_states(self) -> dict[str, DriveState]:
        return {
            d.drive_id: DriveState(d.drive_id, self.motivational.certainty(M_DRIVE, d.drive_id), self.config.lam)
            for d in self.drives
        }

    def _route(self, emissions: Mapping[str, list[SolutionElement]], node: NodeState) -> None:
        for ch in node.transmitters:
            self.pending[ch.receiver].extend(emissions.get(ch.id, []))

    def _take(self, node_id: NodeId) -> list[SolutionElement]:
        batch, self.pending[node_id] = self.pending[node_id], []
        return batch

    def _check(self, frame: SensorFrame) -> None:
        for d in self.drives:
            if d.drive_id not in frame.internal:
                raise InputError(f"sensor frame lacks internal state {d.drive_id!r}")
        for k, v in frame.internal.items():
            if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 <= v <= 1.0):
                raise InputError(f"internal state {k!r} must lie in [0, 1], got {v!r}")
        keys = [p.key for p in frame.external]
        if len(set(keys)) != len(keys):
            raise InputError(f"duplicate percepts in frame: {sorted(keys)}")

    def step(self, frame: SensorFrame) -> tuple[PotentialAction, CycleReport]:
        self._check(frame)
        cog_node, mot_node = self.cognitive, self.motivational
        for node in (cog_node, mot_node):
            node.tick = self.tick
            for lvl in TRANSIENT:
                if lvl.node == node.node_id:
                    clear_level(node, lvl)

        # perception into persistence
        sensed = [_percept_element(p, EXT) for p in frame.external]
        _, em = run_cycle(cog_node, self._take(NodeId.COGNITIVE) + sensed, only=(B_PERSISTENCE,))
        self._route(em, cog_node)

        # congruence, preference and drive feedback
        o_d = {d.drive_id: mot_node.certainty(M_DRIVE, d.drive_id) for d in self.drives}
        proprio = [
            SolutionElement(d.drive_id, M_INT, float(frame.internal[d.drive_id])) for d in self.drives
        ]
        _, em = run_cycle(mot_node, self._take(NodeId.MOTIVATIONAL) + proprio)
        mot_reacs = list(mot_node.reacs)
        self._route(em, mot_node)

        # attention, reflex inhibition and selection
        _, em = run_cycle(
            cog_node, self._take(NodeId.COGNITIVE), only=(B_ATTENTION, B_INHIBITION, B_SELECTOR)
        )
        self._route(em, cog_node)

        chosen = read_elements(cog_node, ACTIONS)
        if len(chosen) != 1:
            raise RuntimeError(f"expected one action on the actions level, found {len(chosen)}")
        selected = _element_action(chosen[0])
        report = self._report(o_d, selected, mot_reacs + list(cog_node.reacs))
        self.tick += 1
        return selected, report

    def _report(self, o_d: dict[str, float], selected: PotentialAction, reacs) -> CycleReport:
        mot = self.motivational
        o_e, o_s, raw, cong, active, alpha = {}, {}, {}, {}, {}, {}
        for d in self.drives:
            i = d.drive_id
            o_e[i] = mot.certainty(M_INT, i)
            o_s[i] = _stimuli(mot, M_EXT, d)
            alpha[i] = d.alpha
            elem = mot.get(M_CONG, i)
            active[i] = elem is not None
            cong[i] = 0.0 if elem is None else elem.certainty
            raw[i] = evaluate_congruence(d, o_e[i], o_s[i], o_d[i]) if elem is None else elem.attrs["raw"]
        pref = mot.get(M_DRIVE, PREFERENCE_ID)
        fresh = pref is not None and pref.tick == self.tick
        return CycleReport(
            tick=self.tick,
            o_e=o_e,
            o_s=o_s,
            o_d=o_d,
            alpha=alpha,
            raw=raw,
            congruent=cong,
            active=active,
            preference=pref.attrs["drive"] if fresh else None,
            preference_certainty=pref.certainty if fresh else 0.0,
            drives_next={d.drive_id: mot.certainty(M_DRIVE, d.drive_id) for d in self.drives},
            persistents=[_element_percept(e) for e in read_elements(self.cognitive, PERSIST)],
            candidates=[_element_action(e) for e in read_elements(self.cognitive, POTENTIAL)],
            selected=selected,
            reacs=[r.to_dict() for r in reacs],
        )

    def to_dict(self) -> dict:
        return {
            "tick": self.tick,
            "cognitive": self.cognitive.to_dict(),
            "motivational": self.motivational.to_dict(),
        }


def reset(config: NetworkConfig) -> IBeNet:
    """Fresh network: empty levels, every drive at zero, tick 0."""
    return IBeNet(config)


def step(net: IBeNet, frame: SensorFrame) -> tuple[IBeNet, PotentialAction, CycleReport]:
    action, report = net.step(frame)
    return net, action, report
