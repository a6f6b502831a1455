"""Synthesis of the supremal successful enabling attacker.

The pipeline has three stages:

1. :func:`annotate_supervisor` tags every observable supervisor edge with
   the command issued on arrival.
2. :func:`generalized_product` runs plant, annotated supervisor and damage
   automaton in lock step.  Every plant move is paired with the attacker's
   observation of it, and every one-step attack on a disabled attackable
   event ends in ``TOP`` (damage done) or ``BOTTOM`` (caught without
   damage).
3. :func:`subset_with_labels` determinizes over the attacker's observation
   alphabet.  It labels each estimate with the attackable events that are
   guaranteed to be damaging from every state in it.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple

from .automata import EpsilonNfa, Fsa, determinize, order_key, sorted_canonical
from .errors import (
    DamageAutomatonIncomplete,
    DamageOverlapsClosedLoop,
    NotAttackable,
    ObservationNotFeasible,
)
from .supervisory import (
    EPSILON,
    EventUniverse,
    ObsLabel,
    SupervisorRealization,
    format_events,
)


class Sink(str, Enum):
    TOP = "⊤"
    BOTTOM = "⊥"

    def __str__(self):
        return self.value


TOP = Sink.TOP
BOTTOM = Sink.BOTTOM


class PlantStep(NamedTuple):
    """Plant event paired with the attacker's observation of it (``None``
    for events the supervisor cannot see)."""

    event: str
    observation: ObsLabel | None

    def __str__(self):
        return f"({self.event},{self.observation if self.observation is not None else 'ε'})"


@dataclass(frozen=True)
class AnnotatedSupervisor:
    fsa: Fsa
    universe: EventUniverse

    def observable_step(self, x, event):
        """``(command, successor)`` for the annotated edge on ``event``."""
        for lab, dst in self.fsa.out(x).items():
            if isinstance(lab, tuple) and lab[0] == event:
                return lab[1], dst
        return None


def annotate_supervisor(sr: SupervisorRealization) -> AnnotatedSupervisor:
    s, u = sr.fsa, sr.universe
    trans = []
    for x, ev, dst in s.transitions():
        if ev in u.observable:
            trans.append((x, (ev, s.enabled(dst)), dst))
        else:
            trans.append((x, ev, dst))
    return AnnotatedSupervisor(Fsa(s.states, (), trans, s.initial), u)


def strip_annotations(sa: AnnotatedSupervisor) -> Fsa:
    trans = [
        (x, lab[0] if isinstance(lab, tuple) else lab, dst)
        for x, lab, dst in sa.fsa.transitions()
    ]
    return Fsa(sa.fsa.states, sa.universe.events, trans, sa.fsa.initial)


def complete_damage_automaton(h: Fsa, events: Iterable | None = None, *, strict: bool = False) -> Fsa:
    """Route every missing transition of ``h`` to a fresh unmarked sink.

    The sink is named one past the largest numeric state name when all
    states are numeric, otherwise ``"dump"`` (suffixed until unused).
    """
    events = frozenset(h.alphabet if events is None else events)
    if h.is_complete(events):
        return h
    if strict:
        raise DamageAutomatonIncomplete("damage automaton is not complete and strict mode is on")
    names = [str(q) for q in h.states]
    if all(n.isdigit() for n in names):
        top = max(int(n) for n in names) + 1
        sink = top if all(isinstance(q, int) for q in h.states) else str(top)
    else:
        sink = "dump"
        while sink in h.states:
            sink += "_"
    trans = h.transitions()
    for z in sorted_canonical(h.states | {sink}):
        for ev in sorted_canonical(events):
            if h.step(z, ev) is None:
                trans.append((z, ev, sink))
    return Fsa(h.states | {sink}, h.alphabet | events, trans, h.initial, h.marked)


def damage_overlap_witness(g: Fsa, sr: SupervisorRealization, h: Fsa) -> tuple | None:
    """Shortest closed-loop string that ``h`` marks, or ``None``."""
    start = (g.initial, sr.fsa.initial, h.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, x, z = node
        if z in h.marked:
            path = []
            while parent[node] is not None:
                node, ev = parent[node]
                path.append(ev)
            return tuple(reversed(path))
        for ev in sr.universe.sorted_events():
            nq, nx, nz = g.step(q, ev), sr.fsa.step(x, ev), h.step(z, ev)
            if nq is None or nx is None or nz is None:
                continue
            nxt = (nq, nx, nz)
            if nxt not in parent:
                parent[nxt] = (node, ev)
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class GeneralizedProduct:
    """Lock-step product of plant, annotated supervisor and complete damage
    automaton, extended with the ``TOP``/``BOTTOM`` attack outcomes."""

    fsa: Fsa
    universe: EventUniverse
    plant: Fsa
    supervisor: SupervisorRealization
    damage: Fsa

    def attack_outcome(self, v, event):
        return self.fsa.step(v, event)

    def core_states(self) -> list:
        return [v for v in self.fsa.sorted_states() if not isinstance(v, Sink)]


def generalized_product(
    g: Fsa, sa: AnnotatedSupervisor, h: Fsa, sr: SupervisorRealization | None = None
) -> GeneralizedProduct:
    """Build the generalized product.  ``h`` must already be complete."""
    u = sa.universe
    if sr is None:
        sr = SupervisorRealization(strip_annotations(sa), u)
    if not h.is_complete(u.events):
        raise DamageAutomatonIncomplete("the damage automaton must be complete; complete it first")
    witness = damage_overlap_witness(g, sr, h)
    if witness is not None:
        raise DamageOverlapsClosedLoop(witness)

    events = u.sorted_events()
    start = (g.initial, sa.fsa.initial, h.initial)
    seen = {start}
    queue = deque([start])
    trans = []
    while queue:
        v = queue.popleft()
        q, x, z = v
        for ev in events:
            nq = g.step(q, ev)
            if nq is None:
                continue
            nz = h.step(z, ev)
            if ev in u.observable:
                edge = sa.observable_step(x, ev)
                if edge is not None:
                    command, nx = edge
                    seen_ev = ev if ev in u.attacker_observable else EPSILON
                    lab = PlantStep(ev, ObsLabel(seen_ev, command))
                    dst = (nq, nx, nz)
                elif ev in u.attackable:
                    lab, dst = ev, (TOP if nz in h.marked else BOTTOM)
                else:
                    continue
            else:
                nx = sa.fsa.step(x, ev)
                if nx is None:
                    continue
                lab, dst = PlantStep(ev, None), (nq, nx, nz)
            trans.append((v, lab, dst))
            if dst not in seen and not isinstance(dst, Sink):
                seen.add(dst)
                queue.append(dst)
    states = seen | {dst for _, _, dst in trans}
    return GeneralizedProduct(Fsa(states, (), trans, start), u, g, sr, h)


@dataclass(frozen=True)
class MooreAttacker:
    """Deterministic automaton over attacker observations.  Each state is the
    sorted tuple of product states the attacker considers possible, and
    ``lf`` holds the attackable events attacked there."""

    fsa: Fsa
    lf: dict
    universe: EventUniverse
    initial_command: frozenset
    _order: tuple = field(default=(), compare=False, repr=False)

    @staticmethod
    def members(y) -> frozenset:
        return frozenset(y)

    def states_in_order(self) -> list:
        """States in breadth-first discovery order (length-lexicographic
        order of their least observation)."""
        if self._order:
            return list(self._order)
        return [y for y, _ in _bfs_paths(self.fsa)]

    def state_after(self, obs: Iterable[ObsLabel]):
        return self.fsa.run(tuple(obs))

    def decide(self, y, command: frozenset) -> frozenset:
        return (frozenset(command) & self.universe.attackable) | self.lf.get(y, frozenset())

    def with_lf(self, lf: dict) -> "MooreAttacker":
        return replace(self, lf={y: frozenset(lf.get(y, ())) for y in self.fsa.states})


def _bfs_paths(a: Fsa):
    """Yield ``(state, least observation)`` in breadth-first order."""
    paths = {a.initial: ()}
    queue = deque([a.initial])
    while queue:
        y = queue.popleft()
        yield y, paths[y]
        row = a.out(y)
        for lab in sorted_canonical(row):
            dst = row[lab]
            if dst not in paths:
                paths[dst] = paths[y] + (lab,)
                queue.append(dst)


def subset_with_labels(gp: GeneralizedProduct) -> MooreAttacker:
    """Determinize the observation part of ``gp`` and attach attack labels."""
    u = gp.universe
    core = gp.core_states()
    trans = []
    for v, lab, dst in gp.fsa.transitions():
        if isinstance(lab, PlantStep):
            trans.append((v, lab.observation, dst))
    nfa = EpsilonNfa.build(core, (), trans, gp.fsa.initial)
    sub = determinize(nfa)

    lf = {}
    for y in sub.states:
        attacked = set()
        for ev in u.attackable:
            outcomes = {gp.attack_outcome(v, ev) for v in y} - {None}
            if outcomes == {TOP}:
                attacked.add(ev)
        lf[y] = frozenset(attacked)
    initial_command = gp.supervisor.initial_command
    m = MooreAttacker(sub, lf, u, initial_command)
    return replace(m, _order=tuple(y for y, _ in _bfs_paths(sub)))


class AttackVerdict(NamedTuple):
    attackable: bool
    observation: tuple | None = None
    event: str | None = None
    state: tuple | None = None

    def __str__(self):
        if not self.attackable:
            return "not attackable"
        obs = "".join(str(lab) for lab in self.observation) or "ε"
        return f"attackable: attack {self.event} after observing {obs}"


def is_attackable(m: MooreAttacker) -> AttackVerdict:
    """Attackable iff some reachable estimate has a nonempty attack label.

    The witness is the first such estimate in breadth-first order together
    with its least attacked event.
    """
    for y, path in _bfs_paths(m.fsa):
        if m.lf[y]:
            return AttackVerdict(True, path, sorted_canonical(m.lf[y])[0], y)
    return AttackVerdict(False)


class AttackPair(NamedTuple):
    string: tuple
    event: str

    def __str__(self):
        return f"({' '.join(self.string) or 'ε'}, {self.event})"


def extract_attack_pair(m: MooreAttacker, gp: GeneralizedProduct, verdict: AttackVerdict | None = None) -> AttackPair:
    """Shortest plant string ``s`` whose observation leads to the witness
    estimate and whose product state is sent to ``TOP`` by the witness event."""
    verdict = verdict or is_attackable(m)
    if not verdict.attackable:
        raise NotAttackable("no reachable estimate carries an attack")
    target, ev = verdict.state, verdict.event
    start = (gp.fsa.initial, m.fsa.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        v, y = node
        if y == target and gp.attack_outcome(v, ev) == TOP:
            path = []
            while parent[node] is not None:
                node, step = parent[node]
                path.append(step)
            return AttackPair(tuple(reversed(path)), ev)
        row = gp.fsa.out(v)
        for lab in sorted_canonical(row):
            if not isinstance(lab, PlantStep):
                continue
            ny = y if lab.observation is None else m.fsa.step(y, lab.observation)
            nxt = (row[lab], ny)
            if ny is not None and nxt not in parent:
                parent[nxt] = (node, lab.event)
                queue.append(nxt)
    raise NotAttackable("witness estimate has no damaging member; the attacker is inconsistent")


def supremal_attack_decision(m: MooreAttacker, obs: Iterable[ObsLabel]) -> frozenset:
    """Full attack decision after ``obs``: the attackable part of the last
    command plus the attacked events of the reached estimate."""
    obs = tuple(obs)
    y = m.state_after(obs)
    if y is None:
        raise ObservationNotFeasible(
            "observation " + ("".join(map(str, obs)) or "ε") + " cannot occur"
        )
    command = obs[-1].command if obs else m.initial_command
    return m.decide(y, command)


@dataclass(frozen=True)
class SynthesisResult:
    annotated: AnnotatedSupervisor
    product: GeneralizedProduct
    attacker: MooreAttacker
    verdict: AttackVerdict
    pair: AttackPair | None


def synthesize(
    g: Fsa, sr: SupervisorRealization, h: Fsa, *, strict_damage: bool = False
) -> SynthesisResult:
    """Run all three stages and extract a witness when attackable."""
    h = complete_damage_automaton(h, sr.universe.events, strict=strict_damage)
    sa = annotate_supervisor(sr)
    gp = generalized_product(g, sa, h, sr)
    m = subset_with_labels(gp)
    verdict = is_attackable(m)
    pair = extract_attack_pair(m, gp, verdict) if verdict.attackable else None
    return SynthesisResult(sa, gp, m, verdict, pair)


def describe_state(y) -> str:
    """``{(3,3,3),(2,3,4)}``-style rendering of an estimate."""
    parts = []
    for v in y:
        parts.append("(" + ",".join(str(c) for c in v) + ")")
    return "{" + ",".join(parts) + "}"


def describe_lf(events) -> str:
    return format_events(events)


__all__ = [
    "AnnotatedSupervisor",
    "AttackPair",
    "AttackVerdict",
    "BOTTOM",
    "GeneralizedProduct",
    "MooreAttacker",
    "PlantStep",
    "Sink",
    "SynthesisResult",
    "TOP",
    "annotate_supervisor",
    "complete_damage_automaton",
    "damage_overlap_witness",
    "describe_state",
    "extract_attack_pair",
    "generalized_product",
    "is_attackable",
    "order_key",
    "strip_annotations",
    "subset_with_labels",
    "supremal_attack_decision",
    "synthesize",
]
