"""Event partitions, supervisor realizations and what the attacker sees."""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

from .automata import Fsa, order_key, reachable_trim, sorted_canonical, sync_product
from .errors import (
    AlphabetNestingViolation,
    ControllabilityViolation,
    ObservabilityViolation,
    StringNotInClosedLoop,
    UnknownEvent,
    UnknownState,
)

EPSILON = ""


@dataclass(frozen=True)
class EventUniverse:
    """The event alphabet and its control, observation and attack partitions."""

    events: frozenset
    controllable: frozenset = frozenset()
    observable: frozenset = frozenset()
    attackable: frozenset = frozenset()
    attacker_observable: frozenset = frozenset()

    def __post_init__(self):
        for name in ("events", "controllable", "observable", "attackable", "attacker_observable"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if EPSILON in self.events:
            raise UnknownEvent("the empty string cannot be used as an event name")
        for name in ("controllable", "observable", "attackable", "attacker_observable"):
            extra = getattr(self, name) - self.events
            if extra:
                raise UnknownEvent(f"{name} events {sorted(extra)} are not in the alphabet")

    @property
    def uncontrollable(self) -> frozenset:
        return self.events - self.controllable

    @property
    def unobservable(self) -> frozenset:
        return self.events - self.observable

    def check_nesting(self) -> None:
        """Raise unless attackable <= attacker-observable <= observable and
        attackable <= controllable <= observable."""
        rules = [
            (self.controllable, self.observable, "controllable", "observable"),
            (self.attackable, self.attacker_observable, "attackable", "attacker-observable"),
            (self.attacker_observable, self.observable, "attacker-observable", "observable"),
            (self.attackable, self.controllable, "attackable", "controllable"),
        ]
        for inner, outer, iname, oname in rules:
            extra = inner - outer
            if extra:
                raise AlphabetNestingViolation(
                    f"{iname} events {sorted(extra)} are not {oname}"
                )

    def sorted_events(self) -> list:
        return sorted_canonical(self.events)


class ObsLabel(NamedTuple):
    """One letter of the attacker's observation alphabet: the event it saw
    (``""`` when it saw nothing) and the command the supervisor issued."""

    event: str
    command: frozenset

    def __str__(self):
        ev = self.event or "ε"
        return f"({ev},{format_events(self.command)})"

    def to_json(self) -> dict:
        return {"event": self.event, "command": sorted_canonical(self.command)}

    @classmethod
    def from_json(cls, data: dict) -> "ObsLabel":
        return cls(data["event"], frozenset(data["command"]))


def obs_label(event: str, command: Iterable[str]) -> ObsLabel:
    return ObsLabel(event, frozenset(command))


def format_events(events: Iterable) -> str:
    return "{" + ",".join(sorted_canonical(events)) + "}"


def format_observation(obs: Iterable[ObsLabel]) -> str:
    return "".join(str(lab) for lab in obs) or "ε"


@dataclass(frozen=True)
class SupervisorRealization:
    fsa: Fsa
    universe: EventUniverse

    def command(self, x) -> frozenset:
        return control_command(self, x)

    @property
    def initial_command(self) -> frozenset:
        return self.fsa.enabled(self.fsa.initial)


def validate_supervisor(
    s: Fsa, u: EventUniverse, *, repair_selfloops: bool = False
) -> SupervisorRealization:
    """Check that ``s`` realizes a normal supervisor under ``u``.

    With ``repair_selfloops`` missing unobservable self-loops are added
    first.  Missing uncontrollable observable events are never repaired.
    """
    u.check_nesting()
    unknown = s.alphabet - u.events
    if unknown:
        raise UnknownEvent(f"supervisor uses events {sorted(unknown)} outside the alphabet")
    if repair_selfloops:
        extra = [
            (x, ev, x)
            for x in s.sorted_states()
            for ev in sorted_canonical(u.unobservable)
            if s.step(x, ev) is None
        ]
        if extra:
            s = Fsa(s.states, s.alphabet | u.events, s.transitions() + extra, s.initial, s.marked)
    for x in s.sorted_states():
        for ev in sorted_canonical(u.unobservable):
            if s.step(x, ev) != x:
                raise ObservabilityViolation(x, ev)
        for ev in sorted_canonical(u.uncontrollable):
            if s.step(x, ev) is None:
                raise ControllabilityViolation(x, ev)
    return SupervisorRealization(s, u)


def control_command(sr: SupervisorRealization, x) -> frozenset:
    """Events enabled at supervisor state ``x``."""
    if x not in sr.fsa.states:
        raise UnknownState(f"{x!r} is not a supervisor state")
    return sr.fsa.enabled(x)


def project(s: Iterable, onto: Iterable) -> tuple:
    keep = frozenset(onto)
    return tuple(ev for ev in s if ev in keep)


def closed_loop(g: Fsa, sr: SupervisorRealization) -> Fsa:
    """Plant under supervision; states are ``(plant, supervisor)`` pairs."""
    return reachable_trim(sync_product(g, sr.fsa))


def attacker_observation(
    sr: SupervisorRealization, s: Iterable[str], g: Fsa | None = None
) -> tuple[ObsLabel, ...]:
    """What the attacker records while ``s`` executes.

    Each supervisor-observable event contributes one label: the event itself
    if the attacker sees it, ``""`` otherwise, paired with the command issued
    after it.  When the plant ``g`` is given, ``s`` must also be a plant
    string.
    """
    s = tuple(s)
    u = sr.universe
    x = sr.fsa.initial
    q = g.initial if g is not None else None
    out = []
    for i, ev in enumerate(s):
        x = sr.fsa.step(x, ev)
        if g is not None and q is not None:
            q = g.step(q, ev)
        if x is None or (g is not None and q is None):
            raise StringNotInClosedLoop(
                f"{' '.join(s[: i + 1])!r} is not generated by the supervised plant"
            )
        if ev in u.observable:
            seen = ev if ev in u.attacker_observable else EPSILON
            out.append(ObsLabel(seen, sr.fsa.enabled(x)))
    return tuple(out)


def last_command(sr: SupervisorRealization, obs: tuple[ObsLabel, ...]) -> frozenset:
    return obs[-1].command if obs else sr.initial_command


def observation_order_key(obs: tuple[ObsLabel, ...]):
    return (len(obs), tuple(order_key(lab) for lab in obs))
