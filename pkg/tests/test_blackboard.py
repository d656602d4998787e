import pytest
from hypothesis import given, strategies as st

from ibenet.blackboard import (
    ElementaryBehaviour,
    Firing,
    InternalBehaviour,
    LevelId,
    NodeId,
    NodeState,
    SolutionElement,
    connect,
    post_element,
    read_elements,
    run_cycle,
)
from ibenet.errors import StructuralError

INT = LevelId("motivational", "internal-perceptions")
CONG = LevelId("motivational", "propio/extero/drive-congruents")


def test_level_names_are_closed():
    assert str(INT) == "motivational:internal-perceptions"
    assert LevelId.parse("cognitive:actions") == LevelId("cognitive", "actions")
    with pytest.raises(StructuralError):
        LevelId("cognitive", "drive")
    with pytest.raises(StructuralError):
        LevelId.parse("no-colon")


def test_post_then_read():
    node = NodeState(NodeId.MOTIVATIONAL)
    post_element(node, INT, SolutionElement("hunger", INT, 0.9))
    (e,) = read_elements(node, INT)
    assert (e.id, e.certainty) == ("hunger", 0.9)


def test_post_replaces_same_id():
    node = NodeState(NodeId.MOTIVATIONAL)
    post_element(node, INT, SolutionElement("hunger", INT, 0.3))
    post_element(node, INT, SolutionElement("hunger", INT, 0.7))
    assert [e.certainty for e in read_elements(node, INT)] == [0.7]


def test_post_to_foreign_level_is_rejected():
    node = NodeState(NodeId.MOTIVATIONAL)
    lvl = LevelId("cognitive", "external-perceptions")
    with pytest.raises(StructuralError):
        post_element(node, lvl, SolutionElement("water", lvl, 0.5))


def test_read_empty_sorted_and_filtered():
    node = NodeState(NodeId.MOTIVATIONAL)
    assert read_elements(node, INT) == []
    for i in "cab":
        post_element(node, INT, SolutionElement(i, INT, 0.1))
    assert [e.id for e in read_elements(node, INT)] == ["a", "b", "c"]
    post_element(node, INT, SolutionElement("water", INT, 0.1))
    assert read_elements(node, INT, id_filter="food") == []


def test_certainty_range_checked():
    with pytest.raises(ValueError):
        SolutionElement("x", INT, 1.2)
    with pytest.raises(ValueError):
        SolutionElement("x", INT, float("nan"))


def test_cycle_without_behaviours_is_noop():
    node = NodeState(NodeId.MOTIVATIONAL)
    before = node.to_dict()
    node, out = run_cycle(node)
    assert node.to_dict() == before
    assert out == {}


def _hunger_rule(node):
    c = node.certainty(INT, "hunger")
    if c > 0:
        return Firing(c, writes=(SolutionElement("hunger", CONG, c),))
    return None


def test_single_rule_fires():
    node = NodeState(
        NodeId.MOTIVATIONAL,
        behaviours=[InternalBehaviour("congruence", (ElementaryBehaviour("c-hunger", _hunger_rule),))],
    )
    node, _ = run_cycle(node, [SolutionElement("hunger", INT, 0.5)])
    assert node.certainty(CONG, "hunger") == 0.5


def _const(rule_id, a):
    return ElementaryBehaviour(
        rule_id, lambda node: Firing(a, writes=(SolutionElement(rule_id, CONG, a),))
    )


@pytest.mark.parametrize("order", [("low", "high"), ("high", "low")])
def test_reac_fires_only_the_strongest(order):
    acts = {"low": 0.4, "high": 0.6}
    beh = InternalBehaviour("sel", tuple(_const(r, acts[r]) for r in order), uses_reac=True)
    node, _ = run_cycle(NodeState(NodeId.MOTIVATIONAL, behaviours=[beh]))
    assert [e.id for e in read_elements(node, CONG)] == ["high"]
    assert sorted(r.activation for r in node.reacs) == [0.4, 0.6]


def test_reac_tie_goes_to_smallest_rule_id():
    beh = InternalBehaviour("sel", (_const("b", 0.5), _const("a", 0.5)), uses_reac=True)
    node, _ = run_cycle(NodeState(NodeId.MOTIVATIONAL, behaviours=[beh]))
    assert [e.id for e in read_elements(node, CONG)] == ["a"]


def test_behaviour_validation():
    with pytest.raises(StructuralError):
        InternalBehaviour("empty", ())
    with pytest.raises(StructuralError):
        InternalBehaviour("dup", (_const("a", 0.1), _const("a", 0.2)))


def test_channel_delivers_on_the_next_cycle():
    cog = NodeState(NodeId.COGNITIVE)
    mot = NodeState(NodeId.MOTIVATIONAL)
    ch = connect(cog, mot, {"perceptual-persistents": "external-perceptions"})
    src = LevelId("cognitive", "perceptual-persistents")
    post_element(cog, src, SolutionElement("food", src, 0.7))
    _, out = run_cycle(cog)
    dst = LevelId("motivational", "external-perceptions")
    assert read_elements(mot, dst) == []
    run_cycle(mot, out[ch])
    assert [(e.id, e.certainty) for e in read_elements(mot, dst)] == [("food", 0.7)]


def test_empty_channel_delivers_nothing():
    cog = NodeState(NodeId.COGNITIVE)
    mot = NodeState(NodeId.MOTIVATIONAL)
    ch = connect(cog, mot, {})
    src = LevelId("cognitive", "perceptual-persistents")
    post_element(cog, src, SolutionElement("food", src, 0.7))
    _, out = run_cycle(cog)
    assert out[ch] == []


def test_channel_to_misspelled_level():
    cog = NodeState(NodeId.COGNITIVE)
    mot = NodeState(NodeId.MOTIVATIONAL)
    with pytest.raises(StructuralError):
        connect(cog, mot, {"perceptual-persistents": "external-perception"})


@given(st.lists(st.tuples(st.sampled_from("abcde"), st.floats(0, 1)), max_size=30))
def test_last_write_wins(posts):
    node = NodeState(NodeId.MOTIVATIONAL)
    last = {}
    for eid, c in posts:
        post_element(node, INT, SolutionElement(eid, INT, c))
        last[eid] = c
    got = read_elements(node, INT)
    assert [e.id for e in got] == sorted(last)
    assert all(e.certainty == last[e.id] for e in got)
