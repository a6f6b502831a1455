import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actuator_attack.automata import Fsa, enumerate_language
from actuator_attack.errors import (
    AlphabetNestingViolation,
    ControllabilityViolation,
    ObservabilityViolation,
    StringNotInClosedLoop,
    UnknownEvent,
    UnknownState,
)
from actuator_attack.supervisory import (
    EventUniverse,
    ObsLabel,
    attacker_observation,
    closed_loop,
    format_observation,
    last_command,
    project,
    validate_supervisor,
)

from conftest import lab

U = EventUniverse({"a", "b", "u"}, controllable={"a"}, observable={"a", "b"}, attackable={"a"}, attacker_observable={"a"})


def test_nesting_attackable_must_be_attacker_observable():
    u = EventUniverse({"d"}, {"d"}, {"d"}, attackable={"d"})
    with pytest.raises(AlphabetNestingViolation):
        u.check_nesting()


def test_nesting_controllable_must_be_observable():
    with pytest.raises(AlphabetNestingViolation):
        EventUniverse({"d"}, controllable={"d"}).check_nesting()


def test_unknown_partition_event():
    with pytest.raises(UnknownEvent):
        EventUniverse({"a"}, controllable={"z"})


def test_valid_supervisor_and_command():
    s = Fsa([0, 1], U.events, [(0, "b", 1), (0, "u", 0), (1, "b", 1), (1, "u", 1), (1, "a", 0)], 0)
    sr = validate_supervisor(s, U)
    assert sr.command(0) == {"b", "u"}
    assert sr.command(1) == {"a", "b", "u"}
    with pytest.raises(UnknownState):
        sr.command(7)


def test_missing_unobservable_selfloop():
    s = Fsa([0], U.events, [(0, "b", 0)], 0)
    with pytest.raises(ObservabilityViolation) as info:
        validate_supervisor(s, U)
    assert info.value.event == "u"
    sr = validate_supervisor(s, U, repair_selfloops=True)
    assert sr.fsa.step(0, "u") == 0


def test_unobservable_that_moves_is_rejected_even_with_repair():
    s = Fsa([0, 1], U.events, [(0, "b", 0), (0, "u", 1), (1, "b", 1), (1, "u", 1)], 0)
    with pytest.raises(ObservabilityViolation):
        validate_supervisor(s, U, repair_selfloops=True)


def test_uncontrollable_must_be_defined():
    s = Fsa([0], U.events, [(0, "u", 0)], 0)
    with pytest.raises(ControllabilityViolation) as info:
        validate_supervisor(s, U)
    assert (info.value.state, info.value.event) == (0, "b")


def test_fig3_observation_of_ba_c(fig3, fig3_sr):
    obs = attacker_observation(fig3_sr, ["b", "a'", "c"], fig3.plant)
    assert obs == (lab("", "b", "c"), lab("c", "b", "a"))
    assert format_observation(obs) == "(ε,{b,c})(c,{a,b})"
    assert attacker_observation(fig3_sr, ["b"]) == ()
    assert last_command(fig3_sr, ()) == {"b", "a'"}


def test_observation_outside_closed_loop(fig3, fig3_sr):
    with pytest.raises(StringNotInClosedLoop):
        attacker_observation(fig3_sr, ["c"])
    # supervisor allows b twice, the plant does not
    with pytest.raises(StringNotInClosedLoop):
        attacker_observation(fig3_sr, ["b", "b"], fig3.plant)


def test_fig3_closed_loop_language(fig3, fig3_sr):
    cl = closed_loop(fig3.plant, fig3_sr)
    got = enumerate_language(cl, 3)
    assert got == [(), ("a'",), ("b",), ("a'", "c"), ("b", "a'"), ("a'", "c", "b"), ("b", "a'", "c")]


def test_obslabel_json_round_trip():
    x = ObsLabel("", frozenset({"b", "a"}))
    assert x.to_json() == {"event": "", "command": ["a", "b"]}
    assert ObsLabel.from_json(x.to_json()) == x
    assert str(x) == "(ε,{a,b})"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "u"]), max_size=8))
def test_projection_keeps_order(s):
    p = project(s, {"a", "b"})
    assert [e for e in s if e != "u"] == list(p)
