"""Scenario files, experiment runs, reaction times and alpha sweeps.

Scenario files are JSON; see ``docs/scenario-format.md`` for the schema.
A trace is one JSON object per tick, keys sorted, so identical runs give
identical bytes.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
import statistics
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from scipy import stats

from .animat import KINDS, AnimatState, Rates, WorldEvent, WorldObject, WorldState, sense, world_step
from .errors import ConfigError, IBeNetError, QueryError, ScenarioError
from .motivational import CongruenceBehaviour
from .network import CycleReport, NetworkConfig, reset

TRACE_LINES = "trace-lines"
CSV = "csv"
CONSUMMATORY = ("eat", "drink", "rest")


@dataclass
class Scenario:
    name: str
    network: NetworkConfig
    bounds: tuple[float, float, float, float]
    animat: AnimatState
    objects: list[WorldObject]
    rates: Rates
    events: list[WorldEvent]
    max_ticks: int
    seeds: list[int]
    rtime: tuple[str, str] | None = None

    def build_world(self, seed: int) -> WorldState:
        return WorldState(
            bounds=self.bounds,
            objects=copy.deepcopy(self.objects),
            animat=copy.deepcopy(self.animat),
            rng_seed=seed,
            events=list(self.events),
            rates=self.rates,
        )


# --- loading ----------------------------------------------------------------------


_MISSING = object()


def _field(d: Mapping, key: str, path: str, kind: type | tuple = object, default: Any = _MISSING):
    where = f"{path}.{key}" if path else key
    if not isinstance(d, Mapping):
        raise ScenarioError(path, "expected an object")
    if key not in d:
        if default is _MISSING:
            raise ScenarioError(where, "required field missing")
        return default
    value = d[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if kind is not object and not isinstance(value, kind) or isinstance(value, bool) and kind in (int, float):
        raise ScenarioError(where, f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
    return value


def _point(v: Any, path: str) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ScenarioError(path, f"expected [x, y], got {v!r}")
    return float(v[0]), float(v[1])


def _object(d: Mapping, path: str) -> WorldObject:
    stock = d.get("stock")
    try:
        return WorldObject(
            id=_field(d, "id", path, str),
            kind=_field(d, "kind", path, str),
            position=_point(_field(d, "position", path), f"{path}.position"),
            radius=_field(d, "radius", path, float, 1.0),
            quality=_field(d, "quality", path, float, 1.0),
            stock=math.inf if stock is None else _field(d, "stock", path, float),
        )
    except ConfigError as e:
        raise ScenarioError(path, str(e)) from None


def _network(d: Mapping, path: str) -> NetworkConfig:
    drives = []
    raw = _field(d, "drives", path, list)
    for i, item in enumerate(raw):
        p = f"{path}.drives[{i}]"
        couplings = _field(item, "couplings", p, dict)
        for kind, fa in couplings.items():
            if kind not in KINDS:
                raise ScenarioError(f"{p}.couplings.{kind}", "unknown stimulus kind")
            if not isinstance(fa, (int, float)) or isinstance(fa, bool):
                raise ScenarioError(f"{p}.couplings.{kind}", f"expected a number, got {fa!r}")
        try:
            drives.append(
                CongruenceBehaviour(
                    drive_id=_field(item, "id", p, str),
                    couplings={k: float(v) for k, v in couplings.items()},
                    alpha=_field(item, "alpha", p, (int, float, type(None)), None),
                    consummatory=_field(item, "consummatory", p, (str, type(None)), None),
                )
            )
        except ConfigError as e:
            raise ScenarioError(p, str(e)) from None
    cfg = NetworkConfig(
        drives=drives,
        alpha=_field(d, "alpha", path, float, 0.0),
        lam=_field(d, "lambda", path, float, 0.3),
        rho=_field(d, "rho", path, float, 0.9),
        contact_range=_field(d, "contact_range", path, float, 1.0),
        g_r=_field(d, "g_r", path, float, 1.0),
        g_o=_field(d, "g_o", path, float, 0.8),
        wander_priority=_field(d, "wander_priority", path, float, 0.05),
        activation_threshold=_field(d, "activation_threshold", path, float, 0.0),
    )
    try:
        return cfg.validate()
    except ConfigError as e:
        raise ScenarioError(path, str(e)) from None


def parse_scenario(data: Mapping) -> Scenario:
    """Build a Scenario from already-decoded JSON, reporting errors by field path."""
    name = _field(data, "name", "", str, "scenario")
    max_ticks = _field(data, "max_ticks", "", int)
    if max_ticks <= 0:
        raise ScenarioError("max_ticks", "must be > 0")
    seeds = _field(data, "seeds", "", list, [0])
    if not seeds or not all(isinstance(s, int) and not isinstance(s, bool) for s in seeds):
        raise ScenarioError("seeds", "expected a non-empty list of integers")
    network = _network(_field(data, "network", "", dict), "network")

    w = _field(data, "world", "", dict)
    bounds = _field(w, "bounds", "world", list)
    if len(bounds) != 4 or not all(isinstance(b, (int, float)) for b in bounds):
        raise ScenarioError("world.bounds", "expected [xmin, ymin, xmax, ymax]")
    a = _field(w, "animat", "world", dict)
    try:
        animat = AnimatState(
            position=_point(_field(a, "position", "world.animat"), "world.animat.position"),
            **{
                k: _field(a, k, "world.animat", float)
                for k in ("heading", "hunger", "thirst", "fatigue", "strength", "lucidity", "v_max", "r_base")
                if k in a
            },
        )
    except ConfigError as e:
        raise ScenarioError("world.animat", str(e)) from None
    r = _field(w, "rates", "world", dict, {})
    unknown = set(r) - set(Rates.__dataclass_fields__)
    if unknown:
        raise ScenarioError(f"world.rates.{sorted(unknown)[0]}", "unknown rate")
    rates = Rates(**{k: _field(r, k, "world.rates", float) for k in r})
    rates = replace(rates, contact_range=network.contact_range)
    objects = [_object(o, f"world.objects[{i}]") for i, o in enumerate(_field(w, "objects", "world", list, []))]

    events = []
    for i, e in enumerate(_field(data, "events", "", list, [])):
        p = f"events[{i}]"
        op = _field(e, "op", p, str)
        tick = _field(e, "tick", p, int)
        try:
            if op == "insert":
                events.append(WorldEvent(tick, op, obj=_object(_field(e, "object", p, dict), f"{p}.object")))
            else:
                events.append(WorldEvent(tick, op, object_id=_field(e, "id", p, str)))
        except ConfigError as err:
            raise ScenarioError(p, str(err)) from None

    rtime = None
    if "rtime" in data:
        rt = _field(data, "rtime", "", dict)
        stim = _field(rt, "stimulus", "rtime", str)
        if stim not in KINDS:
            raise ScenarioError("rtime.stimulus", f"unknown stimulus kind {stim!r}")
        rtime = (stim, _field(rt, "action", "rtime", str))

    s = Scenario(
        name=name,
        network=network,
        bounds=tuple(float(b) for b in bounds),
        animat=animat,
        objects=objects,
        rates=rates,
        events=events,
        max_ticks=max_ticks,
        seeds=list(seeds),
        rtime=rtime,
    )
    try:
        s.build_world(s.seeds[0])
    except ConfigError as e:
        raise ScenarioError("world", str(e)) from None
    return s


def load_scenario(source: str | Path | Mapping) -> Scenario:
    """Load a scenario from a path, a bundled scenario name, or a decoded dict."""
    if isinstance(source, Mapping):
        return parse_scenario(source)
    path = Path(source)
    if not path.exists() and path.suffix == "" and "/" not in str(source):
        bundled = resources.files("ibenet") / "scenarios" / f"{source}.json"
        if bundled.is_file():
            return parse_scenario(json.loads(bundled.read_text()))
    try:
        text = path.read_text()
    except OSError as e:
        raise ScenarioError("", f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("", f"{path} is not valid JSON: {e}") from None
    return parse_scenario(data)


def bundled_scenarios() -> list[str]:
    root = resources.files("ibenet") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


# --- running --------------------------------------------------------------------------


@dataclass
class Trace:
    scenario: str
    alpha: float
    seed: int
    max_ticks: int
    records: list[dict] = field(default_factory=list)

    def labels(self) -> list[str]:
        return [r["selected"]["label"] for r in self.records]

    def to_lines(self) -> str:
        return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in self.records)


def _record(world: WorldState, frame, report: CycleReport, drives) -> dict:
    a = world.animat
    congruence = {}
    for d in drives:
        i = d.drive_id
        congruence[i] = {
            "alpha": report.alpha[i],
            "couplings": dict(sorted(d.couplings.items())),
            "o_e": report.o_e[i],
            "o_s": report.o_s[i],
            "o_d": report.o_d[i],
            "raw": report.raw[i],
            "certainty": report.congruent[i],
            "active": report.active[i],
        }
    return {
        "tick": report.tick,
        "position": [a.position[0], a.position[1]],
        "heading": a.heading,
        "internal": {"hunger": a.hunger, "thirst": a.thirst, "fatigue": a.fatigue},
        "qualities": {"strength": a.strength, "lucidity": a.lucidity},
        "present": world.kinds_present(),
        "percepts": [
            {"id": p.key, "kind": p.stimulus_id, "certainty": p.certainty, "distance": p.distance, "bearing": p.bearing}
            for p in frame.external
        ],
        "congruence": congruence,
        "drive_next": report.drives_next,
        "preference": report.preference,
        "preference_certainty": report.preference_certainty,
        "candidates": [c.to_dict() for c in report.candidates],
        "selected": report.selected.to_dict(),
        "reacs": report.reacs,
    }


def _matches(selected: Mapping, target_action: str) -> bool:
    return selected["label"] == target_action or selected["action"] == target_action


def run_scenario(
    s: Scenario,
    alpha_override: float | None = None,
    seed: int | None = None,
    max_ticks: int | None = None,
    stop_on: tuple[str, str] | None = None,
) -> Trace:
    """Run one episode and return its trace.

    ``stop_on=(stimulus, action)`` ends the run on the first tick at which
    ``action`` is selected while ``stimulus`` is present in the world.
    """
    config = s.network if alpha_override is None else s.network.with_alpha(alpha_override)
    seed = s.seeds[0] if seed is None else seed
    ticks = s.max_ticks if max_ticks is None else max_ticks
    if ticks <= 0:
        raise ScenarioError("max_ticks", "must be > 0")
    net = reset(config)
    world = s.build_world(seed)
    trace = Trace(s.name, config.alpha, seed, ticks)
    for _ in range(ticks):
        frame = sense(world)
        action, report = net.step(frame)
        rec = _record(world, frame, report, net.drives)
        world_step(world, action)
        out = world.last_outcome
        rec["outcome"] = {
            "distance": out.distance,
            "intake": out.intake,
            "consumed": out.consumed,
            "noop": out.noop,
        }
        trace.records.append(rec)
        if stop_on and stop_on[0] in rec["present"] and _matches(rec["selected"], stop_on[1]):
            break
    return trace


@dataclass(frozen=True)
class ReactionTimeRecord:
    stimulus_kind: str
    target_action: str
    stimulus_tick: int
    action_tick: int | None
    rtime: int | None

    @property
    def resolved(self) -> bool:
        return self.rtime is not None


def measure_rtime(t: Trace, stimulus_kind: str, target_action: str) -> ReactionTimeRecord:
    """Cycles from the stimulus first existing in the world to the first
    selection of ``target_action`` (by label, e.g. ``approach(food)``, or by
    bare action id, e.g. ``eat``)."""
    start = next((r["tick"] for r in t.records if stimulus_kind in r["present"]), None)
    if start is None:
        raise QueryError(f"stimulus {stimulus_kind!r} never appears in the trace")
    hit = next(
        (r["tick"] for r in t.records if r["tick"] >= start and _matches(r["selected"], target_action)),
        None,
    )
    return ReactionTimeRecord(
        stimulus_kind, target_action, start, hit, None if hit is None else hit - start
    )


# --- sweeps ---------------------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]]


@dataclass
class SweepResult:
    scenario: str
    max_ticks: int
    stimulus: str
    action: str
    rows: list[dict]
    summary: list[dict]
    spearman: float

    def table(self) -> Table:
        cols = ["alpha", "seed", "rtime", "resolved"]
        return Table(
            cols,
            [[r["alpha"], r["seed"], "" if r["rtime"] is None else r["rtime"], int(r["resolved"])] for r in self.rows],
        )

    def summary_table(self) -> Table:
        cols = ["alpha", "median_rtime", "resolved", "runs"]
        return Table(cols, [[s[c] for c in cols] for s in self.summary])

    def medians(self) -> list[float]:
        return [s["median_rtime"] for s in self.summary]


def sweep_alpha(
    s: Scenario,
    alphas: Sequence[float],
    repeats: int,
    stimulus: str | None = None,
    action: str | None = None,
) -> SweepResult:
    """RTIME for every (alpha, repeat) pair.

    Repeat ``r`` uses seed ``s.seeds[0] + r`` for every alpha. Unresolved
    runs enter the per-alpha median as ``max_ticks``.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ConfigError(f"alpha {a!r} outside [0, 1]")
    if stimulus is None or action is None:
        if s.rtime is None:
            raise ScenarioError("rtime", "scenario defines no RTIME target; pass stimulus and action")
        stimulus = stimulus or s.rtime[0]
        action = action or s.rtime[1]
    base = s.seeds[0]
    rows = []
    for a in alphas:
        for r in range(repeats):
            seed = base + r
            trace = run_scenario(s, alpha_override=a, seed=seed, stop_on=(stimulus, action))
            rec = measure_rtime(trace, stimulus, action)
            rows.append({"alpha": a, "seed": seed, "rtime": rec.rtime, "resolved": rec.resolved})
    summary = []
    for a in dict.fromkeys(alphas):
        mine = [r for r in rows if r["alpha"] == a]
        values = [r["rtime"] if r["resolved"] else s.max_ticks for r in mine]
        summary.append(
            {
                "alpha": a,
                "median_rtime": float(statistics.median(values)),
                "resolved": sum(r["resolved"] for r in mine),
                "runs": len(mine),
            }
        )
    if len(summary) >= 2:
        rho = stats.spearmanr([x["alpha"] for x in summary], [x["median_rtime"] for x in summary]).statistic
    else:
        rho = math.nan
    return SweepResult(s.name, s.max_ticks, stimulus, action, rows, summary, float(rho))


# --- output ---------------------------------------------------------------------------


def _render(obj: Trace | Table | SweepResult, fmt: str) -> str:
    if isinstance(obj, SweepResult):
        obj = obj.table()
    if fmt == TRACE_LINES:
        if isinstance(obj, Trace):
            return obj.to_lines()
        return "".join(
            json.dumps(dict(zip(obj.columns, row)), sort_keys=True, separators=(",", ":")) + "\n"
            for row in obj.rows
        )
    if fmt == CSV:
        if isinstance(obj, Trace):
            raise ValueError("traces are emitted as trace-lines")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(obj.columns)
        w.writerows(obj.rows)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(obj: Trace | Table | SweepResult, fmt: str, destination: str | Path) -> None:
    text = _render(obj, fmt)
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise IBeNetError(f"cannot write {path}: {e.strerror}") from e


def read_trace(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def first_consummatory(labels: Iterable[str]) -> tuple[int, str] | None:
    for i, lab in enumerate(labels):
        if lab in CONSUMMATORY:
            return i, lab
    return None
