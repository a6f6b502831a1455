import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from actuator_attack.automata import Fsa
from actuator_attack.errors import LanguageBoundExceeded, ObservationNotFeasible
from actuator_attack.oracle import (
    BoundedOracle,
    oracle_attack_pairs,
    oracle_En,
    oracle_I,
    verify_attack_pair,
)
from actuator_attack.synthesis import AttackPair

from conftest import lab


@pytest.fixture(scope="module")
def oracle(fig3, fig3_sr):
    return BoundedOracle(fig3.plant, fig3_sr, fig3.damage, 4)


def test_pairs_of_example(fig3, fig3_sr):
    pairs = oracle_attack_pairs(fig3.plant, fig3_sr, fig3.damage, 4)
    assert pairs == {AttackPair(("a'",), "d'"), AttackPair(("b", "a'"), "d")}


def test_attack_set_after_first_observation(fig3, fig3_sr):
    assert oracle_I(fig3.plant, fig3_sr, fig3.damage, [lab("", "b", "c")]) == {"d", "d'"}
    assert oracle_I(fig3.plant, fig3_sr, fig3.damage, []) == frozenset()


def test_attack_set_needs_feasible_observation(oracle):
    with pytest.raises(ObservationNotFeasible):
        oracle.attack_set([lab("c", "a", "b")])


def test_enabled_extensions(fig3, fig3_sr):
    # b a' d' leaves the plant, so the class {a', b a'} yields one string
    assert oracle_En(fig3.plant, fig3_sr, fig3.damage, (("a'",), "d'")) == {("a'", "d'")}
    assert oracle_En(fig3.plant, fig3_sr, fig3.damage, (("b", "a'"), "d")) == {("b", "a'", "d")}


def test_verify_pair(fig3, fig3_sr):
    assert verify_attack_pair(fig3.plant, fig3_sr, fig3.damage, (("a'",), "d'"))
    chk = verify_attack_pair(fig3.plant, fig3_sr, fig3.damage, (("a'",), "d"))
    assert not chk and chk.counterexample == ("a'", "d")
    late = verify_attack_pair(fig3.plant, fig3_sr, fig3.damage, (("a'", "c", "b", "a", "a'"), "d'"))
    assert not late and late.counterexample == ("a'", "c", "b", "a", "a'", "d'")
    assert chk.bounded


def test_equivalence_classes(oracle):
    assert oracle.equivalents(("a'",)) == [("a'",), ("b", "a'")]
    assert oracle.in_closed_loop(("b", "a'", "c")) and not oracle.in_closed_loop(("c",))


def test_supremal_language_adds_extensions(oracle):
    extra = oracle.supremal_language() - set(oracle.strings)
    assert extra == {("a'", "d'"), ("b", "a'", "d")}


def test_empty_damage_gives_no_pairs(fig3, fig3_sr):
    h = Fsa(["0"], fig3.universe.events, [], "0")
    assert oracle_attack_pairs(fig3.plant, fig3_sr, h) == set()


def test_bound_guard(fig3, fig3_sr):
    with pytest.raises(LanguageBoundExceeded):
        BoundedOracle(fig3.plant, fig3_sr, fig3.damage, 13)


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 6))
def test_strings_are_length_sorted_and_bounded(fig3, fig3_sr, n):
    o = BoundedOracle(fig3.plant, fig3_sr, fig3.damage, n)
    assert all(len(s) <= n for s in o.strings)
    assert [len(s) for s in o.strings] == sorted(len(s) for s in o.strings)
