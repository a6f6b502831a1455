import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from actuator_attack.campaign import random_instance
from actuator_attack.dot import annotated_supervisor_dot, product_dot, subset_dot
from actuator_attack.errors import (
    AlphabetNestingViolation,
    InstanceParseError,
    NondeterministicTransition,
    UnknownEvent,
)
from actuator_attack.instance_format import (
    attacker_from_json,
    attacker_to_json,
    bundled_instance_names,
    dumps,
    load_bundled,
    parse_instance,
    serialize_instance,
    synthesis_report,
)
from actuator_attack.synthesis import synthesize

BASE = """\
[events]
a c o ca oa
u

[plant]
initial 0
0 -> 1 : a

[supervisor]
initial 0
0 -> 0 : u

[damage]
initial 0
marked 1
0 -> 1 : a
"""


def test_bundled_names():
    assert bundled_instance_names() == ["fig3.desa", "minimal.desa"]


def test_parse_minimal():
    inst = parse_instance(BASE)
    assert inst.universe.attackable == {"a"}
    assert inst.universe.unobservable == {"u"}
    assert inst.damage.marked == {"1"}
    assert inst.options.max_oracle_len == 6


def test_options_section():
    inst = parse_instance(BASE + "[options]\nrepair_selfloops = yes\nmax_oracle_len = 4\n")
    assert inst.options.repair_selfloops and inst.options.max_oracle_len == 4
    assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize(
    "mutate, cls, line",
    [
        (lambda t: t.replace("0 -> 1 : a\n\n[supervisor]", "0 -> 1 : z\n\n[supervisor]"), UnknownEvent, 7),
        (lambda t: t.replace("0 -> 1 : a\n\n[supervisor]", "0 -> 1 : a\n0 -> 2 : a\n\n[supervisor]"), NondeterministicTransition, 8),
        (lambda t: t.replace("0 -> 1 : a\n\n[supervisor]", "0 -> 1 : a\n0 -> 1 : a\n\n[supervisor]"), InstanceParseError, 8),
        (lambda t: t.replace("a c o ca oa", "a c o ca"), AlphabetNestingViolation, 1),
        (lambda t: t.replace("[damage]", "[dammage]"), InstanceParseError, 13),
        (lambda t: t.replace("u\n", "u x\n"), InstanceParseError, 3),
        (lambda t: "a -> b : c\n" + t, InstanceParseError, 1),
        (lambda t: t.replace("initial 0\n0 -> 0 : u", "0 -> 0 : u"), InstanceParseError, 9),
        (lambda t: t.replace("marked 1", "bogus line here"), InstanceParseError, 15),
    ],
)
def test_errors_carry_lines(mutate, cls, line):
    with pytest.raises(cls) as info:
        parse_instance(mutate(BASE), "x.desa")
    assert info.value.line == line
    assert str(info.value).startswith(f"x.desa:{line}: ")


def test_missing_section():
    with pytest.raises(InstanceParseError, match="missing section"):
        parse_instance(BASE.split("[damage]")[0])


def test_fig3_round_trip(fig3):
    text = serialize_instance(fig3)
    assert parse_instance(text) == fig3
    assert serialize_instance(parse_instance(text)) == text


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_random(seed):
    inst = random_instance(random.Random(seed))
    text = serialize_instance(inst)
    back = parse_instance(text)
    assert back == inst
    assert serialize_instance(back) == text


def test_attacker_json(fig3_result, fig3):
    data = attacker_to_json(fig3_result.attacker)
    assert data["initial"] == 0
    assert data["states"][1] == {"id": 1, "members": [["2", "3", "4"], ["3", "3", "3"]], "lf": ["d", "d'"]}
    assert {"src": 0, "label": {"event": "", "command": ["b", "c"]}, "dst": 1} in data["transitions"]
    back = attacker_from_json(json.loads(dumps(data)), fig3.universe)
    assert attacker_to_json(back) == data


def test_synthesis_report_is_byte_stable(fig3):
    texts = set()
    for _ in range(3):
        inst = load_bundled("fig3")
        res = synthesize(inst.plant, inst.realize(), inst.damage)
        texts.add(dumps(synthesis_report(res)))
    assert len(texts) == 1
    report = json.loads(texts.pop())
    assert report["witness"]["attacked_events"] == ["d", "d'"]
    assert report["witness"]["pair"] == {"string": ["b", "a'"], "event": "d"}


def test_dot_output(fig3_result):
    sub = subset_dot(fig3_result.attacker)
    assert 'label="{(2,3,4),(3,3,3)} | Lf={d,d\'}"' in sub
    gp = product_dot(fig3_result.product)
    assert 'label="⊤"' in gp and "doubleoctagon" in gp
    assert 'label="⊥"' in gp
    sa = annotated_supervisor_dot(fig3_result.annotated)
    assert 'n0 -> n2 [label="(a\',{b,c})"]' in sa
    assert subset_dot(fig3_result.attacker) == sub
