import logging
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from ibenet.errors import ConfigError
from ibenet.motivational import (
    CongruenceBehaviour,
    CongruentElement,
    DriveState,
    congruence_condition,
    evaluate_congruence,
    select_consummatory_preference,
    update_drive,
)

from oracle import congruence_exact

unit = st.floats(0.0, 1.0, allow_nan=False)
KINDS = ("food", "grass", "water")


def hunger(alpha, **fa):
    return CongruenceBehaviour("hunger", fa or {"food": 1.0}, alpha=alpha)


def test_zero_need_annihilates_the_product():
    assert evaluate_congruence(hunger(0.7), 0.0, {"food": 1.0}, 0.0) == 0.0


def test_worked_example():
    got = evaluate_congruence(hunger(0.5), 0.8, {"food": 0.6}, 0.1)
    want = Fraction(0.8) * (Fraction(0.5) + Fraction(0.6)) + Fraction(0.1)
    assert got == pytest.approx(0.98, abs=1e-12)
    assert abs(Fraction(got) - want) < Fraction(1, 10**12)


def test_need_alone_at_alpha_one():
    assert evaluate_congruence(hunger(1.0), 0.7, {"food": 0.0}, 0.0) == 0.7


def test_uncoupled_stimulus_is_skipped_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        v = evaluate_congruence(hunger(0.0), 0.5, {"food": 0.4, "water": 1.0}, 0.0)
    assert v == pytest.approx(0.2)
    assert "water" in caplog.text


@pytest.mark.parametrize(
    "alpha,o_e,food,expected",
    [(0.0, 0.9, 0.0, False), (0.9, 0.9, 0.0, True), (0.9, 0.0, 1.0, False), (0.0, 0.9, 0.3, True)],
)
def test_condition(alpha, o_e, food, expected):
    assert congruence_condition(hunger(alpha), o_e, {"food": food}) is expected


def test_behaviour_validation():
    with pytest.raises(ConfigError):
        CongruenceBehaviour("hunger", {})
    with pytest.raises(ConfigError):
        CongruenceBehaviour("hunger", {"food": -0.1})
    with pytest.raises(ConfigError):
        CongruenceBehaviour("hunger", {"food": 1.0}, alpha=1.5)
    with pytest.raises(ConfigError):
        CongruenceBehaviour("boredom", {"spot": 1.0})
    assert CongruenceBehaviour("boredom", {"spot": 1.0}, consummatory="rest").consummatory == "rest"


def test_unresolved_alpha_is_an_error():
    with pytest.raises(ConfigError):
        evaluate_congruence(CongruenceBehaviour("hunger", {"food": 1.0}), 0.5, {}, 0.0)


@pytest.mark.parametrize(
    "lam,prev,o_e,expected", [(0.3, 0.8, 0.5, 0.24), (0.3, 0.8, 0.0, 0.0), (0.9, 1.0, 0.0, 0.0), (0.3, 0.0, 1.0, 0.0)]
)
def test_drive_feedback(lam, prev, o_e, expected):
    assert update_drive(DriveState("hunger", lam=lam), prev, o_e).value == pytest.approx(expected)


def test_drive_feedback_factor_range():
    with pytest.raises(ConfigError):
        DriveState("hunger", lam=1.0)


def test_preference_selection():
    C = CongruentElement
    assert select_consummatory_preference([C("hunger", 0.98), C("thirst", 0.31)]) == "hunger"
    assert select_consummatory_preference([]) is None
    assert select_consummatory_preference([C("hunger", 0.0), C("thirst", 0.0)]) is None
    assert select_consummatory_preference([C("eat", 0.5), C("drink", 0.5)]) == "drink"
    assert select_consummatory_preference([C("hunger", 0.04)], threshold=0.05) is None


# --- properties ---------------------------------------------------------------


@st.composite
def eq_inputs(draw):
    fa = {k: draw(st.floats(0.0, 2.0)) for k in draw(st.sets(st.sampled_from(KINDS), min_size=1))}
    o_s = {k: draw(unit) for k in draw(st.sets(st.sampled_from(sorted(fa))))}
    return draw(unit), draw(unit), fa, o_s, draw(unit)


@given(eq_inputs(), st.integers())
def test_matches_exact_oracle(args, shuffle):
    alpha, o_e, fa, o_s, o_d = args
    got = evaluate_congruence(CongruenceBehaviour("hunger", fa, alpha=alpha), o_e, o_s, o_d)
    want = congruence_exact(alpha, o_e, fa, o_s, o_d, shuffle)
    assert abs(Fraction(got) - want) <= Fraction(1, 10**9)


@given(eq_inputs())
def test_reactive_gating(args):
    _, o_e, fa, o_s, _ = args
    beh = CongruenceBehaviour("hunger", fa, alpha=0.0)
    a = evaluate_congruence(beh, o_e, o_s, 0.0)
    external = sum(fa[k] * v for k, v in o_s.items())
    assert (a > 0) == (o_e > 0 and external > 0)
    assert congruence_condition(beh, o_e, o_s) == (o_e > 0 and any(v > 0 for k, v in o_s.items() if fa[k] >= 0))


@given(st.floats(0.0, 1.0, exclude_min=True), unit, st.sets(st.sampled_from(KINDS), min_size=1))
def test_motivated_activation_without_stimuli(alpha, o_e, kinds):
    beh = CongruenceBehaviour("hunger", {k: 1.0 for k in kinds}, alpha=alpha)
    assert evaluate_congruence(beh, o_e, {k: 0.0 for k in kinds}, 0.0) == alpha * o_e
    assert congruence_condition(beh, o_e, {}) == (o_e != 0.0)


@given(eq_inputs(), unit, unit)
def test_monotone_in_need_and_stimulus(args, bump_e, bump_s):
    alpha, o_e, fa, o_s, o_d = args
    beh = CongruenceBehaviour("hunger", fa, alpha=alpha)
    base = evaluate_congruence(beh, o_e, o_s, o_d)
    assert evaluate_congruence(beh, max(o_e, bump_e), o_s, o_d) >= base - 1e-12
    k = sorted(fa)[0]
    more = dict(o_s, **{k: max(o_s.get(k, 0.0), bump_s)})
    assert evaluate_congruence(beh, o_e, more, o_d) >= base - 1e-12


@given(unit, unit, st.floats(0.01, 1.0))
def test_preference_invariant_under_common_rescaling(c_h, c_t, scale):
    assume(c_h != c_t and min(c_h, c_t) * scale > 0)
    before = [CongruentElement("hunger", c_h), CongruentElement("thirst", c_t)]
    after = [CongruentElement("hunger", c_h * scale), CongruentElement("thirst", c_t * scale)]
    assert select_consummatory_preference(before) == select_consummatory_preference(after)


@given(st.floats(0.0, 0.99), unit, unit)
def test_feedback_stays_bounded(lam, prev, o_e):
    v = update_drive(DriveState("hunger", lam=lam), prev, o_e).value
    assert 0.0 <= v <= lam * prev + 1e-15
