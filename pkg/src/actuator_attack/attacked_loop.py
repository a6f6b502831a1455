"""Closed loop under attack, with the supervisor halting as soon as it sees
an event it had disabled.

The loop automaton tracks ``(plant, supervisor, attacker, damage)`` states.
An attack that fires a disabled event leaves the supervised behavior in one
step and lands in one of two absorbing outcomes, ``DAMAGE`` or
``DETECTED_NO_DAMAGE``.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Protocol

from .automata import Fsa, shortest_path, sorted_canonical
from .errors import ObservationDesync
from .supervisory import EPSILON, ObsLabel, SupervisorRealization, format_events
from .synthesis import MooreAttacker, complete_damage_automaton


class Outcome(str, Enum):
    DAMAGE = "DAMAGE"
    DETECTED_NO_DAMAGE = "DETECTED_NO_DAMAGE"

    def __str__(self):
        return self.value


DAMAGE = Outcome.DAMAGE
DETECTED_NO_DAMAGE = Outcome.DETECTED_NO_DAMAGE


class Attacker(Protocol):
    fsa: Fsa

    def decide(self, y, command: frozenset) -> frozenset: ...


@dataclass(frozen=True)
class TabularAttacker:
    """Attacker given by an observation automaton and a full decision per
    state.  Unlike :class:`MooreAttacker` it may disable enabled events."""

    fsa: Fsa
    decisions: dict

    def decide(self, y, command: frozenset) -> frozenset:
        return frozenset(self.decisions.get(y, ()))


def no_attack(m: MooreAttacker) -> MooreAttacker:
    """Same observation automaton, never any actual attack."""
    return m.with_lf({})


@dataclass(frozen=True)
class AttackedLoop:
    fsa: Fsa
    plant: Fsa
    supervisor: SupervisorRealization
    command: dict          # loop state -> supervisor command
    decision: dict         # loop state -> attack decision
    attacked_command: dict  # loop state -> command actually applied

    def is_terminal(self, state) -> bool:
        return isinstance(state, Outcome)


def build_attacked_loop(g: Fsa, sr: SupervisorRealization, attacker: Attacker, h: Fsa) -> AttackedLoop:
    u = sr.universe
    s = sr.fsa
    h = complete_damage_automaton(h, u.events)
    start = (g.initial, s.initial, attacker.fsa.initial, h.initial)
    seen = {start}
    queue = deque([start])
    trans = []
    command, decision, applied = {}, {}, {}
    while queue:
        node = queue.popleft()
        q, x, y, z = node
        gamma = s.enabled(x)
        delta_gamma = frozenset(attacker.decide(y, gamma)) & u.attackable
        gamma_prime = (gamma - u.attackable) | delta_gamma
        command[node], decision[node], applied[node] = gamma, delta_gamma, gamma_prime
        for ev in sorted_canonical(gamma_prime):
            nq = g.step(q, ev)
            if nq is None:
                continue
            nz = h.step(z, ev)
            nx = s.step(x, ev)
            if nx is None:
                dst = DAMAGE if nz in h.marked else DETECTED_NO_DAMAGE
            else:
                ny = y
                if ev in u.observable:
                    lab = ObsLabel(ev if ev in u.attacker_observable else EPSILON, s.enabled(nx))
                    ny = attacker.fsa.step(y, lab)
                    if ny is None:
                        raise ObservationDesync(
                            f"attacker has no move on {lab} from state {y!r}"
                        )
                dst = (nq, nx, ny, nz)
            trans.append((node, ev, dst))
            if dst not in seen and not isinstance(dst, Outcome):
                seen.add(dst)
                queue.append(dst)
    states = seen | {d for _, _, d in trans}
    fsa = Fsa(states, u.events, trans, start, {DAMAGE} & states)
    return AttackedLoop(fsa, g, sr, command, decision, applied)


class SuccessVerdict(NamedTuple):
    successful: bool
    damage_witness: tuple | None
    detection_witness: tuple | None

    def __str__(self):
        if self.successful:
            return f"successful: damage via {' '.join(self.damage_witness)}"
        if self.detection_witness is not None:
            return f"unsuccessful: detected without damage via {' '.join(self.detection_witness)}"
        return "unsuccessful: no damaging string reachable"


def check_success(loop: AttackedLoop) -> SuccessVerdict:
    """Exact reachability of the two outcomes."""
    dmg = shortest_path(loop.fsa, {DAMAGE})
    det = shortest_path(loop.fsa, {DETECTED_NO_DAMAGE})
    return SuccessVerdict(dmg is not None and det is None, dmg, det)


@dataclass(frozen=True)
class TraceStep:
    plant: object
    supervisor: object
    attacker: object
    command: frozenset
    attack: frozenset
    applied: frozenset
    event: str
    verdict: str

    def to_json(self) -> dict:
        return {
            "plant": str(self.plant),
            "supervisor": str(self.supervisor),
            "attacker": [list(map(str, v)) for v in self.attacker] if isinstance(self.attacker, tuple) else str(self.attacker),
            "command": sorted_canonical(self.command),
            "attack": sorted_canonical(self.attack),
            "applied": sorted_canonical(self.applied),
            "event": self.event,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class Trace:
    steps: tuple
    verdict: str
    blocked_by: str | None = None
    blocked_event: str | None = None

    def to_json(self) -> dict:
        return {
            "steps": [st.to_json() for st in self.steps],
            "verdict": self.verdict,
            "blocked_by": self.blocked_by,
            "blocked_event": self.blocked_event,
        }

    def format(self) -> str:
        lines = []
        for i, st in enumerate(self.steps, 1):
            lines.append(
                f"{i:>3}  q={st.plant} x={st.supervisor}  γ={format_events(st.command)} "
                f"Δγ={format_events(st.attack)} γ'={format_events(st.applied)}  "
                f"fire {st.event} -> {st.verdict}"
            )
        tail = f"verdict: {self.verdict}"
        if self.blocked_by:
            tail += f" ({self.blocked_event} blocked: {self.blocked_by})"
        lines.append(tail)
        return "\n".join(lines)


def replay(loop: AttackedLoop, s: Iterable[str]) -> Trace:
    """Step through ``s`` and report commands, attack decisions and where
    the run stops."""
    steps = []
    node = loop.fsa.initial
    for ev in s:
        if loop.is_terminal(node):
            return Trace(tuple(steps), str(node), "halted", ev)
        q, x, y, _ = node
        nxt = loop.fsa.step(node, ev)
        if nxt is None:
            reason = "plant-undefined" if loop.plant.step(q, ev) is None else "command-disabled"
            return Trace(tuple(steps), "blocked", reason, ev)
        verdict = str(nxt) if loop.is_terminal(nxt) else "running"
        steps.append(
            TraceStep(q, x, y, loop.command[node], loop.decision[node], loop.attacked_command[node], ev, verdict)
        )
        node = nxt
    return Trace(tuple(steps), str(node) if loop.is_terminal(node) else "running")
