import pytest
from hypothesis import given, strategies as st

from ibenet.cognitive import (
    Percept,
    PersistentPercept,
    PotentialAction,
    attend_to_preferences,
    inhibit_reflexes,
    persist_percepts,
    reflex_actions,
    select_external_behaviour,
)
from ibenet.errors import StructuralError
from ibenet.motivational import CongruenceBehaviour

DRIVES = {
    "hunger": CongruenceBehaviour("hunger", {"food": 1.0, "grass": 0.5}),
    "thirst": CongruenceBehaviour("thirst", {"water": 1.0}),
}
P = PotentialAction


def test_persistence_refresh_decay_drop():
    (p,) = persist_percepts([Percept("food", 0.8)], [], 0.9)
    assert (p.certainty, p.age) == (0.8, 0)
    (q,) = persist_percepts([], [p], 0.9)
    assert q.certainty == pytest.approx(0.72) and q.age == 1
    assert persist_percepts([], [PersistentPercept("food", 0.009)], 0.9) == []


def test_persistence_direct_overrides_memory():
    old = PersistentPercept("food", 0.9, source="f1", age=3)
    (p,) = persist_percepts([Percept("food", 0.2, source="f1")], [old], 0.9)
    assert (p.certainty, p.age) == (0.2, 0)


def test_persistence_decay_range():
    with pytest.raises(ValueError):
        persist_percepts([], [], 1.0)


@given(st.lists(st.floats(0.0, 1.0), max_size=8), st.floats(0.05, 0.95), st.integers(1, 30))
def test_persistents_only_fade_without_input(cs, rho, steps):
    prev = [PersistentPercept("food", c, source=f"f{i}") for i, c in enumerate(cs)]
    cur = persist_percepts([], prev, rho)
    for _ in range(steps):
        nxt = persist_percepts([], cur, rho)
        old = {p.key: p.certainty for p in cur}
        assert all(p.certainty < old[p.key] and p.certainty >= 0.01 for p in nxt)
        cur = nxt


def test_attention_approach_explore_wander():
    far = [PersistentPercept("food", 0.7, distance=12.0, source="f1")]
    (a,) = attend_to_preferences("hunger", far, 0.98, 1.0, DRIVES)
    assert (a.label, a.priority, a.target) == ("approach(food)", 0.98, "f1")
    (b,) = attend_to_preferences("hunger", [PersistentPercept("water", 0.9)], 0.93, 1.0, DRIVES)
    assert b.label == "explore-for(food)"
    (c,) = attend_to_preferences(None, far, 0.0, 1.0, DRIVES)
    assert (c.label, c.priority, c.source) == ("wander", 0.05, "default")


def test_attention_consumes_only_what_is_seen_now():
    near = PersistentPercept("water", 0.9, distance=0.5, source="w1")
    (a,) = attend_to_preferences("thirst", [near], 0.6, 1.0, DRIVES)
    assert a.label == "drink" and a.target == "w1"
    remembered = PersistentPercept("water", 0.8, distance=0.5, source="w1", age=2)
    (b,) = attend_to_preferences("thirst", [remembered], 0.6, 1.0, DRIVES)
    assert b.label == "approach(water)"


def test_attention_prefers_coupling_times_certainty():
    food = PersistentPercept("food", 0.3, distance=2.0, source="f1")
    grass = PersistentPercept("grass", 0.5, distance=1.0, source="g1")
    (a,) = attend_to_preferences("hunger", [food, grass], 0.5, 0.5, DRIVES)
    assert a.target == "f1"  # 1.0*0.3 > 0.5*0.5


def test_reflexes():
    acts = reflex_actions([Percept("blob", 0.6, source="b1"), Percept("obstacle", 0.5, source="o1")])
    by = {a.action_id: a for a in acts}
    assert by["runaway"].priority == 0.6 and by["runaway"].target == "b1"
    assert by["avoid-obstacles"].priority == pytest.approx(0.4)
    assert reflex_actions([Percept("food", 1.0)]) == []


def test_inhibition():
    eat = P("eat", 0.9)
    assert inhibit_reflexes([eat], [P("runaway", 0.95, "reflex", "blob")])[-1].action_id == "runaway"
    assert inhibit_reflexes([eat], [P("avoid-obstacles", 0.2, "reflex", "obstacle")]) == [eat]
    assert [a.action_id for a in inhibit_reflexes([], [P("runaway", 0.4, "reflex", "blob")])] == ["runaway"]


def test_selector():
    cands = [P("approach", 0.98, kind="food"), P("wander", 0.05, "default")]
    assert select_external_behaviour(cands).label == "approach(food)"
    assert select_external_behaviour([P("eat", 0.9), P("runaway", 0.9, "reflex", "blob")]).action_id == "runaway"
    assert select_external_behaviour([P("wander", 0.05, "default")]).action_id == "wander"
    with pytest.raises(StructuralError):
        select_external_behaviour([])


def test_action_validation():
    with pytest.raises(ValueError):
        P("fly", 0.5)
    with pytest.raises(ValueError):
        P("approach", 0.5)
    with pytest.raises(ValueError):
        P("eat", 1.5)


actions = st.builds(
    P,
    st.sampled_from(["wander", "eat", "drink", "rest", "runaway"]),
    st.floats(0.0, 1.0),
    st.sampled_from(["reflex", "motivated", "default"]),
)


@given(st.lists(actions, min_size=1, max_size=10), st.randoms())
def test_selection_independent_of_order(cands, rnd):
    shuffled = list(cands)
    rnd.shuffle(shuffled)
    assert select_external_behaviour(cands) == select_external_behaviour(shuffled)
    best = select_external_behaviour(cands)
    assert best.priority == max(a.priority for a in cands)
