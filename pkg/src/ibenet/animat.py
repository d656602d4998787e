"""2D world and animat body.

The world is a rectangle holding circular objects. The animat is a point
with a heading, three needs (hunger, thirst, fatigue) and two qualities:
strength caps its speed and lucidity scales its perception radius.
Distances to objects are measured to their rim, so standing on a source
means distance 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .cognitive import Percept, PotentialAction
from .errors import ConfigError
from .motivational import clamp01
from .network import SensorFrame

KINDS = ("food", "water", "grass", "blob", "obstacle", "spot")
CONSUMABLE = frozenset({"food", "water", "grass"})
EDIBLE = {"eat": ("food", "grass"), "drink": ("water",)}
GRASS_MAX_QUALITY = 0.5

WANDER_TURN = math.radians(30.0)
EXPLORE_TURN = math.radians(10.0)
WANDER_SPEED = 0.5


def wrap_angle(a: float) -> float:
    """Map an angle onto (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


@dataclass
class WorldObject:
    id: str
    kind: str
    position: tuple[float, float]
    radius: float = 1.0
    quality: float = 1.0
    stock: float = math.inf

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"object {self.id!r}: unknown kind {self.kind!r}")
        if not 0.0 <= self.quality <= 1.0:
            raise ConfigError(f"object {self.id!r}: quality must lie in [0, 1]")
        if self.radius < 0.0:
            raise ConfigError(f"object {self.id!r}: negative radius")
        if self.kind == "grass" and self.quality > GRASS_MAX_QUALITY:
            raise ConfigError(f"object {self.id!r}: grass quality is at most {GRASS_MAX_QUALITY}")
        if self.kind not in CONSUMABLE:
            self.stock = math.inf
        elif self.stock < 0.0:
            raise ConfigError(f"object {self.id!r}: negative stock")
        self.position = (float(self.position[0]), float(self.position[1]))

    def rim_distance(self, point: tuple[float, float]) -> float:
        dx = self.position[0] - point[0]
        dy = self.position[1] - point[1]
        return max(0.0, math.hypot(dx, dy) - self.radius)

    def bearing_from(self, point: tuple[float, float]) -> float:
        return math.atan2(self.position[1] - point[1], self.position[0] - point[0])


@dataclass
class AnimatState:
    position: tuple[float, float]
    heading: float = 0.0
    hunger: float = 0.0
    thirst: float = 0.0
    fatigue: float = 0.0
    strength: float = 1.0
    lucidity: float = 1.0
    v_max: float = 1.0
    r_base: float = 20.0

    def __post_init__(self) -> None:
        for name in ("hunger", "thirst", "fatigue", "strength", "lucidity"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"animat {name} must lie in [0, 1], got {v!r}")
        if self.v_max <= 0.0 or self.r_base <= 0.0:
            raise ConfigError("animat v_max and r_base must be positive")
        self.position = (float(self.position[0]), float(self.position[1]))

    @property
    def max_speed(self) -> float:
        return self.v_max * self.strength

    @property
    def perception_radius(self) -> float:
        return self.r_base * self.lucidity


@dataclass(frozen=True)
class Rates:
    """Per-tick rate constants of the body."""

    hunger: float = 0.002
    thirst: float = 0.002
    eat: float = 0.05
    drink: float = 0.05
    fatigue: float = 0.002
    rest: float = 0.03
    quality: float = 0.005
    contact_range: float = 1.0


@dataclass(frozen=True)
class WorldEvent:
    tick: int
    op: str  # "insert" | "remove"
    obj: WorldObject | None = None
    object_id: str | None = None

    def __post_init__(self) -> None:
        if self.op == "insert" and self.obj is None:
            raise ConfigError("insert event needs an object")
        if self.op == "remove" and self.object_id is None:
            raise ConfigError("remove event needs an object id")
        if self.op not in ("insert", "remove"):
            raise ConfigError(f"unknown event op {self.op!r}")
        if self.tick < 0:
            raise ConfigError("event tick must be >= 0")


@dataclass
class ActionOutcome:
    distance: float = 0.0
    intake: float = 0.0
    consumed: str | None = None
    noop: bool = False


@dataclass
class WorldState:
    bounds: tuple[float, float, float, float]
    objects: list[WorldObject]
    animat: AnimatState
    tick: int = 0
    rng_seed: int = 0
    events: Sequence[WorldEvent] = ()
    rates: Rates = field(default_factory=Rates)
    rng: np.random.Generator | None = field(default=None, repr=False)
    last_outcome: ActionOutcome = field(default_factory=ActionOutcome)
    _applied_through: int = field(default=-1, repr=False)

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmin < xmax and ymin < ymax):
            raise ConfigError(f"degenerate bounds {self.bounds}")
        if not self._inside(self.animat.position):
            raise ConfigError("animat spawns outside the bounds")
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate object ids: {ids}")
        if self.tick == 0:
            ax, ay = self.animat.position
            for o in self.objects:
                if math.hypot(o.position[0] - ax, o.position[1] - ay) < o.radius:
                    raise ConfigError(f"{o.kind} {o.id!r} covers the animat spawn point")
        self.events = tuple(sorted(self.events, key=lambda e: e.tick))
        if self.rng is None:
            self.rng = np.random.default_rng(self.rng_seed)
        apply_due_events(self)

    def _inside(self, p: tuple[float, float]) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= p[0] <= xmax and ymin <= p[1] <= ymax

    def find(self, object_id: str | None) -> WorldObject | None:
        for o in self.objects:
            if o.id == object_id:
                return o
        return None

    def kinds_present(self) -> list[str]:
        return sorted({o.kind for o in self.objects})


def apply_due_events(world: WorldState) -> None:
    """Apply every scheduled event whose tick has come and not yet been applied."""
    for ev in world.events:
        if ev.tick <= world._applied_through or ev.tick > world.tick:
            continue
        if ev.op == "insert":
            if world.find(ev.obj.id) is not None:
                raise ConfigError(f"event at tick {ev.tick} re-inserts {ev.obj.id!r}")
            world.objects.append(replace(ev.obj))
        else:
            world.objects = [o for o in world.objects if o.id != ev.object_id]
    world._applied_through = world.tick


def sense(world: WorldState) -> SensorFrame:
    """Exteroceptive percepts within the perception radius plus the three needs.

    Certainty falls linearly from the object's quality at contact to zero at
    the radius. Percepts come strongest first.
    """
    a = world.animat
    radius = a.perception_radius
    percepts = []
    for o in world.objects:
        d = o.rim_distance(a.position)
        if d >= radius:
            continue
        c = o.quality * max(0.0, 1.0 - d / radius)
        if c <= 0.0:
            continue
        percepts.append(Percept(o.kind, c, o.bearing_from(a.position), d, o.id))
    percepts.sort(key=lambda p: (-p.certainty, p.key))
    internal = {"hunger": a.hunger, "thirst": a.thirst, "fatigue": a.fatigue}
    return SensorFrame(percepts, internal)


def _strongest(world: WorldState, kind: str) -> WorldObject | None:
    frame = sense(world)
    for p in frame.external:
        if p.stimulus_id == kind:
            return world.find(p.source)
    return None


def _move(world: WorldState, heading: float, dist: float) -> float:
    a = world.animat
    xmin, ymin, xmax, ymax = world.bounds
    x0, y0 = a.position
    x = x0 + dist * math.cos(heading)
    y = y0 + dist * math.sin(heading)
    # walls reflect the heading
    if x < xmin or x > xmax:
        x = 2 * xmin - x if x < xmin else 2 * xmax - x
        heading = math.pi - heading
    if y < ymin or y > ymax:
        y = 2 * ymin - y if y < ymin else 2 * ymax - y
        heading = -heading
    x = min(max(x, xmin), xmax)
    y = min(max(y, ymin), ymax)
    # slide out of obstacles onto their rim
    for o in world.objects:
        if o.kind != "obstacle":
            continue
        dx, dy = x - o.position[0], y - o.position[1]
        r = math.hypot(dx, dy)
        if r >= o.radius:
            continue
        if r == 0.0:
            dx, dy, r = -math.cos(heading), -math.sin(heading), 1.0
        x = o.position[0] + dx / r * o.radius
        y = o.position[1] + dy / r * o.radius
        x = min(max(x, xmin), xmax)
        y = min(max(y, ymin), ymax)
    a.position = (x, y)
    a.heading = wrap_angle(heading)
    return math.hypot(x - x0, y - y0)


def apply_action(world: WorldState, action: PotentialAction) -> ActionOutcome:
    """Execute the motor side of ``action`` in place.

    Consumption outside contact range, or an approach/runaway with nothing to
    steer by, leaves the animat still and is flagged ``noop``.
    """
    a = world.animat
    speed = a.max_speed
    act = action.action_id
    out = ActionOutcome()

    if act == "wander":
        h = a.heading + world.rng.uniform(-WANDER_TURN, WANDER_TURN)
        out.distance = _move(world, h, WANDER_SPEED * speed)
    elif act == "explore-for":
        h = a.heading + world.rng.uniform(-EXPLORE_TURN, EXPLORE_TURN)
        out.distance = _move(world, h, speed)
    elif act == "approach":
        target = world.find(action.target)
        if target is None or target.kind != action.kind:
            target = _strongest(world, action.kind)
        if target is None:
            out.noop = True
        else:
            d = target.rim_distance(a.position)
            out.distance = _move(world, target.bearing_from(a.position), min(speed, d))
    elif act in EDIBLE:
        rate = world.rates.eat if act == "eat" else world.rates.drink
        reach = [
            o
            for o in world.objects
            if o.kind in EDIBLE[act] and o.rim_distance(a.position) <= world.rates.contact_range
        ]
        chosen = next((o for o in reach if o.id == action.target), None)
        if chosen is None and reach:
            chosen = min(reach, key=lambda o: (-o.quality, o.rim_distance(a.position), o.id))
        if chosen is None:
            out.noop = True
        else:
            amount = min(rate, chosen.stock)
            chosen.stock = chosen.stock - amount
            if chosen.stock < 1e-12:
                chosen.stock = 0.0
            out.intake = amount * chosen.quality
            out.consumed = chosen.id
    elif act == "rest":
        pass
    elif act == "runaway":
        blob = world.find(action.target)
        if blob is None or blob.kind != "blob":
            blob = _strongest(world, "blob")
        if blob is None:
            out.noop = True
        else:
            out.distance = _move(world, blob.bearing_from(a.position) + math.pi, speed)
    elif act == "avoid-obstacles":
        obstacles = [o for o in world.objects if o.kind == "obstacle"]
        if not obstacles:
            out.noop = True
        else:
            near = min(obstacles, key=lambda o: (o.rim_distance(a.position), o.id))
            b = near.bearing_from(a.position)
            left, right = b + math.pi / 2, b - math.pi / 2
            h = min((left, right), key=lambda t: abs(wrap_angle(t - a.heading)))
            out.distance = _move(world, h, speed)
    world.last_outcome = out
    return out


def update_internal_states(
    animat: AnimatState,
    action: PotentialAction,
    rates: Rates = Rates(),
    intake: float = 0.0,
    distance: float = 0.0,
) -> AnimatState:
    """Needs drift up every tick; eating, drinking and resting pull them down.

    ``intake`` is the quality-weighted amount consumed this tick and
    ``distance`` how far the animat moved.
    """
    act = action.action_id
    hunger = clamp01(animat.hunger + rates.hunger - (intake if act == "eat" else 0.0))
    thirst = clamp01(animat.thirst + rates.thirst - (intake if act == "drink" else 0.0))
    fatigue = animat.fatigue + rates.fatigue * (distance / animat.v_max)
    if act == "rest":
        fatigue -= rates.rest
    fatigue = clamp01(fatigue)
    strength = clamp01(animat.strength + rates.quality * (0.5 - hunger))
    lucidity = clamp01(animat.lucidity + rates.quality * (0.5 - max(thirst, fatigue)))
    return replace(
        animat, hunger=hunger, thirst=thirst, fatigue=fatigue, strength=strength, lucidity=lucidity
    )


def world_step(world: WorldState, action: PotentialAction) -> WorldState:
    """Advance one tick in place.

    The action is applied, the body updated, exhausted sources removed, the
    clock advanced, and finally the events scheduled for the new tick are
    applied so the next ``sense`` already sees them.
    """
    out = apply_action(world, action)
    world.animat = update_internal_states(
        world.animat, action, world.rates, out.intake, out.distance
    )
    world.objects = [o for o in world.objects if not (o.kind in CONSUMABLE and o.stock <= 0.0)]
    world.tick += 1
    apply_due_events(world)
    return world
