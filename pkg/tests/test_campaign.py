import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actuator_attack.automata import Fsa
from actuator_attack.campaign import (
    CrossCheck,
    certificate,
    certified_instances,
    is_certified,
    random_instance,
    run_checks,
)
from actuator_attack.instance_format import ProblemInstance
from actuator_attack.oracle import BoundedOracle
from actuator_attack.supervisory import EventUniverse
from actuator_attack.synthesis import damage_overlap_witness


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_random_instances_are_well_formed(seed):
    inst = random_instance(random.Random(seed))
    u = inst.universe
    u.check_nesting()
    assert 2 <= len(u.events) <= 5
    assert len(inst.plant.states) <= 5 and len(inst.supervisor.states) <= 5
    assert len(inst.damage.states) <= 4
    sr = inst.realize()
    assert damage_overlap_witness(inst.plant, sr, inst.damage) is None


def test_generation_is_seeded():
    a = certified_instances(7, 5)
    b = certified_instances(7, 5)
    assert a == b


def test_fig3_is_certified(fig3):
    assert is_certified(fig3, 6)


def test_certificate_rejects_short_bound():
    # the attackable state sits behind three unobservable-free steps
    u = EventUniverse({"a", "d"}, {"a", "d"}, {"a", "d"}, {"d"}, {"a", "d"})
    g = Fsa("0123", u.events, [("0", "a", "1"), ("1", "a", "2"), ("2", "a", "3"), ("3", "d", "3")], "0")
    s = Fsa("0123", u.events, [("0", "a", "1"), ("1", "a", "2"), ("2", "a", "3")], "0")
    h = Fsa("01234", u.events, [("0", "a", "1"), ("1", "a", "2"), ("2", "a", "3"), ("3", "d", "4")], "0", ["4"])
    inst = ProblemInstance(u, g, s, h)
    sr = inst.realize()
    assert certificate(inst, BoundedOracle(g, sr, h, 3)).passed
    short = certificate(inst, BoundedOracle(g, sr, h, 2))
    assert not short.passed and "not reached" in short.detail


def test_run_checks_on_example(fig3):
    results = run_checks(fig3, 6)
    assert [r.passed for r in results] == [True] * len(results)
    assert len({r.name for r in results}) == len(results)


def test_pruned_attackers_are_successful(fig3):
    cc = CrossCheck.build(fig3)
    variants = cc.pruned_attackers(random.Random(3), 10)
    assert len(variants) == 10
    sup = cc.attacked_language(cc.attacker)
    for v in variants:
        assert cc.attacked_language(v) <= sup


@pytest.mark.parametrize("seed", range(3))
def test_small_campaign(seed):
    for inst in certified_instances(seed, 15):
        failed = [r.line() for r in run_checks(inst, 6, seed=seed) if not r.passed]
        assert failed == []
