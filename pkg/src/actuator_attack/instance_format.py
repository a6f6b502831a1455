"""Plain-text problem instances and JSON for synthesized attackers.

An instance file has four sections plus optional settings::

    [events]
    # name followed by any of: c (controllable) o (observable)
    #                          ca (attackable) oa (attacker-observable)
    a   c o
    b
    d   c o ca oa

    [plant]
    initial 1
    1 -> 2 : a

    [supervisor]
    initial 1
    1 -> 1 : b

    [damage]
    initial 1
    marked 3
    1 -> 3 : d

    [options]
    repair_selfloops = false
    max_oracle_len = 6
    strict_damage = false

``states`` lines may list isolated states.  ``#`` starts a comment.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from importlib import resources

from .automata import Fsa, sorted_canonical
from .errors import (
    AttackModelError,
    InstanceParseError,
    NondeterministicTransition,
    UnknownEvent,
)
from .supervisory import EventUniverse, ObsLabel, SupervisorRealization, validate_supervisor
from .synthesis import MooreAttacker, SynthesisResult

AUTOMATA = ("plant", "supervisor", "damage")
SECTIONS = ("events",) + AUTOMATA + ("options",)
FLAGS = {"c": "controllable", "o": "observable", "ca": "attackable", "oa": "attacker_observable"}
_NAME = re.compile(r"^[^\s#:\[\]]+$")
_TRANSITION = re.compile(r"^(\S+)\s*->\s*(\S+)\s*:\s*(\S+)$")


@dataclass(frozen=True)
class Options:
    repair_selfloops: bool = False
    max_oracle_len: int = 6
    strict_damage: bool = False


@dataclass(frozen=True)
class ProblemInstance:
    universe: EventUniverse
    plant: Fsa
    supervisor: Fsa
    damage: Fsa
    options: Options = field(default_factory=Options)
    source: str | None = field(default=None, compare=False)

    def realize(self) -> SupervisorRealization:
        """Validated supervisor realization under the instance options."""
        return validate_supervisor(
            self.supervisor, self.universe, repair_selfloops=self.options.repair_selfloops
        )

    def with_options(self, **kw) -> "ProblemInstance":
        return replace(self, options=replace(self.options, **kw))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_bool(text: str, lineno: int, source: str | None) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise InstanceParseError(f"expected a boolean, got {text!r}", line=lineno, source=source)


class _Block:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.states: list[str] = []
        self.initial: str | None = None
        self.marked: list[str] = []
        self.trans: list[tuple[str, str, str, int]] = []


def parse_instance(text: str, source: str | None = None) -> ProblemInstance:
    """Parse and cross-check an instance; every error carries its line."""

    def fail(msg, lineno, cls=InstanceParseError):
        raise cls(msg, line=lineno, source=source)

    section = None
    seen_sections: dict[str, int] = {}
    events: dict[str, set] = {}
    event_lines: dict[str, int] = {}
    blocks: dict[str, _Block] = {}
    options: dict = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]", line)
            if not m or m.group(1) not in SECTIONS:
                fail(f"unknown section header {line!r}", lineno)
            section = m.group(1)
            if section in seen_sections:
                fail(f"section [{section}] repeated (first at line {seen_sections[section]})", lineno)
            seen_sections[section] = lineno
            if section in AUTOMATA:
                blocks[section] = _Block(section, lineno)
            continue
        if section is None:
            fail("content before the first section header", lineno)
        words = line.split()
        if section == "events":
            name, flags = words[0], words[1:]
            if not _NAME.match(name):
                fail(f"invalid event name {name!r}", lineno)
            if name in events:
                fail(f"event {name!r} declared twice", lineno)
            bad = [f for f in flags if f not in FLAGS]
            if bad:
                fail(f"unknown event flag {bad[0]!r} (use c, o, ca, oa)", lineno)
            events[name] = set(flags)
            event_lines[name] = lineno
        elif section == "options":
            m = re.fullmatch(r"(\w+)\s*=\s*(\S+)", line)
            if not m:
                fail("expected 'key = value'", lineno)
            key, value = m.groups()
            if key in ("repair_selfloops", "strict_damage"):
                options[key] = _parse_bool(value, lineno, source)
            elif key == "max_oracle_len":
                if not value.isdigit():
                    fail(f"max_oracle_len must be a non-negative integer, got {value!r}", lineno)
                options[key] = int(value)
            else:
                fail(f"unknown option {key!r}", lineno)
        else:
            block = blocks[section]
            m = _TRANSITION.match(line)
            if m:
                src, dst, ev = m.groups()
                if ev not in events:
                    fail(f"event {ev!r} is not declared in [events]", lineno, UnknownEvent)
                for prev_src, prev_ev, prev_dst, prev_line in block.trans:
                    if prev_src == src and prev_ev == ev:
                        if prev_dst == dst:
                            fail(f"duplicate transition (first at line {prev_line})", lineno)
                        fail(
                            f"state {src!r} already has a transition on {ev!r} to {prev_dst!r} "
                            f"(line {prev_line})",
                            lineno,
                            NondeterministicTransition,
                        )
                block.trans.append((src, ev, dst, lineno))
            elif words[0] == "initial":
                if len(words) != 2:
                    fail("expected 'initial <state>'", lineno)
                if block.initial is not None:
                    fail("initial state given twice", lineno)
                block.initial = words[1]
            elif words[0] == "marked":
                block.marked.extend(words[1:])
            elif words[0] == "states":
                block.states.extend(words[1:])
            else:
                fail(f"cannot parse line in [{section}]: {line!r}", lineno)

    for name in ("events",) + AUTOMATA:
        if name not in seen_sections:
            raise InstanceParseError(f"missing section [{name}]", source=source)

    parts = {v: frozenset(e for e, flags in events.items() if k in flags) for k, v in FLAGS.items()}
    universe = EventUniverse(frozenset(events), **parts)
    try:
        universe.check_nesting()
    except AttackModelError as exc:
        exc.line, exc.source = seen_sections["events"], source
        raise

    built = {}
    for name in AUTOMATA:
        b = blocks[name]
        if b.initial is None:
            fail(f"[{name}] has no initial state", b.line)
        states = set(b.states) | {b.initial} | set(b.marked)
        states |= {t[0] for t in b.trans} | {t[2] for t in b.trans}
        built[name] = Fsa(
            states, universe.events, [(s, e, d) for s, e, d, _ in b.trans], b.initial, b.marked
        )
    return ProblemInstance(
        universe, built["plant"], built["supervisor"], built["damage"], Options(**options), source
    )


def serialize_instance(inst: ProblemInstance) -> str:
    """Canonical text form; parsing it back gives an equal instance."""
    u = inst.universe
    out = ["[events]"]
    width = max((len(e) for e in u.events), default=1)
    for ev in u.sorted_events():
        flags = [f for f, attr in FLAGS.items() if ev in getattr(u, attr)]
        out.append(f"{ev:<{width}} {' '.join(flags)}".rstrip())
    for name in AUTOMATA:
        a: Fsa = getattr(inst, name)
        out += ["", f"[{name}]", f"initial {a.initial}"]
        used = {a.initial} | a.marked
        used |= {t[0] for t in a.transitions()} | {t[2] for t in a.transitions()}
        isolated = a.states - used
        if isolated:
            out.append("states " + " ".join(map(str, sorted_canonical(isolated))))
        if a.marked:
            out.append("marked " + " ".join(map(str, sorted_canonical(a.marked))))
        out += [f"{s} -> {d} : {e}" for s, e, d in a.transitions()]
    o = inst.options
    if o != Options():
        out += [
            "",
            "[options]",
            f"repair_selfloops = {str(o.repair_selfloops).lower()}",
            f"max_oracle_len = {o.max_oracle_len}",
            f"strict_damage = {str(o.strict_damage).lower()}",
        ]
    return "\n".join(out) + "\n"


def load_instance(path) -> ProblemInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), str(path))


def bundled_instance_names() -> list[str]:
    root = resources.files("actuator_attack") / "instances"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".desa"))


def load_bundled(name: str) -> ProblemInstance:
    if not name.endswith(".desa"):
        name += ".desa"
    text = (resources.files("actuator_attack") / "instances" / name).read_text(encoding="utf-8")
    return parse_instance(text, name)


# -- attacker JSON ----------------------------------------------------------

def _member_json(v) -> list:
    return [str(c) for c in v]


def attacker_to_json(m: MooreAttacker) -> dict:
    """Moore attacker as plain data; estimate ``i`` is the i-th state in
    breadth-first order, so the numbering is reproducible."""
    order = m.states_in_order()
    index = {y: i for i, y in enumerate(order)}
    states = [
        {
            "id": index[y],
            "members": [_member_json(v) for v in sorted_canonical(y)],
            "lf": sorted_canonical(m.lf[y]),
        }
        for y in order
    ]
    transitions = [
        {"src": index[y], "label": lab.to_json(), "dst": index[dst]}
        for y, lab, dst in m.fsa.transitions()
    ]
    transitions.sort(key=lambda t: (t["src"], t["label"]["event"], t["label"]["command"]))
    return {
        "initial": index[m.fsa.initial],
        "initial_command": sorted_canonical(m.initial_command),
        "states": states,
        "transitions": transitions,
    }


def attacker_from_json(data: dict, universe: EventUniverse) -> MooreAttacker:
    """Inverse of :func:`attacker_to_json` up to member representation
    (members come back as tuples of strings)."""
    ids = {
        s["id"]: tuple(tuple(v) for v in s["members"]) for s in data["states"]
    }
    lf = {ids[s["id"]]: frozenset(s["lf"]) for s in data["states"]}
    trans = [
        (ids[t["src"]], ObsLabel.from_json(t["label"]), ids[t["dst"]]) for t in data["transitions"]
    ]
    fsa = Fsa(ids.values(), (), trans, ids[data["initial"]])
    return MooreAttacker(fsa, lf, universe, frozenset(data["initial_command"]))


def synthesis_report(result: SynthesisResult) -> dict:
    v = result.verdict
    report = {
        "attackable": v.attackable,
        "witness": None,
        "attacker": attacker_to_json(result.attacker),
    }
    if v.attackable:
        report["witness"] = {
            "observation": [lab.to_json() for lab in v.observation],
            "attacked_events": sorted_canonical(result.attacker.lf[v.state]),
            "pair": {"string": list(result.pair.string), "event": result.pair.event},
        }
    return report


def dumps(data) -> str:
    """Stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
