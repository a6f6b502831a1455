"""Seeded random instances and the pipeline-vs-oracle cross checks.

Random instances are kept only when a depth certificate holds, so that the
bounded oracle's answers are exact for them:

* for every observation produced by a supervised string within the bound,
  each state of the full estimate from which some attackable event would
  leave the supervised behavior is also reached by a string within the
  bound, and
* every reachable estimate containing such a state is reached by an
  observation within the bound.

The certificate uses its own estimate propagation over raw automata runs.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .attacked_loop import Outcome, build_attacked_loop, check_success
from .automata import Fsa, enumerate_language, sorted_canonical
from .errors import AttackModelError
from .instance_format import Options, ProblemInstance
from .oracle import BoundedOracle
from .supervisory import EPSILON, EventUniverse, ObsLabel, SupervisorRealization
from .synthesis import MooreAttacker, SynthesisResult, synthesize

EVENT_NAMES = "abcde"


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f": {self.detail}" if self.detail else "")


# -- generation ---------------------------------------------------------------

def _subset(rng: random.Random, items, p: float) -> frozenset:
    return frozenset(i for i in items if rng.random() < p)


def _random_fsa(rng, n: int, events, p: float, prefix: str = "") -> Fsa:
    states = [f"{prefix}{i}" for i in range(n)]
    trans = [
        (q, ev, rng.choice(states))
        for q in states
        for ev in events
        if rng.random() < p
    ]
    return Fsa(states, events, trans, states[0])


def random_universe(rng: random.Random, max_events: int = 5) -> EventUniverse:
    events = list(EVENT_NAMES[: rng.randint(2, max_events)])
    observable = _subset(rng, events, 0.8) or frozenset([rng.choice(events)])
    controllable = _subset(rng, sorted(observable), 0.8)
    attacker_obs = _subset(rng, sorted(observable), 0.85)
    attackable = _subset(rng, sorted(controllable & attacker_obs), 0.8)
    return EventUniverse(frozenset(events), controllable, observable, attackable, attacker_obs)


def random_supervisor(rng, u: EventUniverse, n: int) -> Fsa:
    """Random automaton that already satisfies the realization rules."""
    states = [str(i) for i in range(n)]
    trans = []
    for x in states:
        for ev in u.sorted_events():
            if ev in u.unobservable:
                trans.append((x, ev, x))
            elif ev in u.uncontrollable or rng.random() < 0.4:
                trans.append((x, ev, rng.choice(states)))
    return Fsa(states, u.events, trans, states[0])


def _damage_states(g: Fsa, s: Fsa, h: Fsa, attackable) -> tuple[set, set]:
    """Damage states visited by supervised strings, and damage states reached
    by one attackable event the supervisor disabled."""
    start = (g.initial, s.initial, h.initial)
    seen = {start}
    queue = deque([start])
    exits = set()
    while queue:
        q, x, z = queue.popleft()
        for ev in g.enabled(q):
            nx, nz = s.step(x, ev), h.step(z, ev)
            if nx is None:
                if ev in attackable and nz is not None:
                    exits.add(nz)
                continue
            if nz is None:
                continue
            nxt = (g.step(q, ev), nx, nz)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return {z for _, _, z in seen}, exits


def _damage_with_target(rng, n: int, events, attackable) -> Fsa:
    """Random damage automaton whose last state is entered only through
    attackable events; that state is the one meant to be marked."""
    states = [str(i) for i in range(n)]
    body, target = states[:-1], states[-1]
    trans = {}
    for z in body:
        for ev in events:
            if ev in attackable and rng.random() < 0.85:
                trans[(z, ev)] = target
            elif rng.random() < 0.6:
                trans[(z, ev)] = rng.choice(body)
    return Fsa(states, events, trans, states[0])


def random_instance(
    rng: random.Random,
    *,
    max_states: int = 5,
    max_damage_states: int = 4,
    max_events: int = 5,
    target_exits: float = 0.8,
) -> ProblemInstance:
    """One random instance.  Damage states visited by supervised strings are
    never marked, so the damage language stays outside the supervised
    language.  With probability ``target_exits`` the damage automaton has a
    target state entered only by attackable events and the marking is drawn
    from states an attack step can reach, which makes attackable instances
    common."""
    u = random_universe(rng, max_events)
    ev = u.sorted_events()
    g = _random_fsa(rng, rng.randint(1, max_states), ev, 0.65)
    s = random_supervisor(rng, u, rng.randint(1, max_states))
    nz = rng.randint(min(2, max_damage_states), max_damage_states)
    targeted = nz > 1 and u.attackable and rng.random() < target_exits
    if targeted:
        h = _damage_with_target(rng, nz, ev, u.attackable)
    else:
        h = _random_fsa(rng, nz, ev, 0.6)
    inside, exits = _damage_states(g, s, h, u.attackable)
    pool = sorted_canonical(exits - inside)
    if targeted and pool:
        marked = _subset(rng, pool, 0.7) or frozenset([rng.choice(pool)])
    else:
        marked = _subset(rng, h.sorted_states(), 0.5) - inside
    h = Fsa(h.states, h.alphabet, h.transitions(), h.initial, marked)
    return ProblemInstance(u, g, s, h, Options())


# -- certificate ----------------------------------------------------------------

class _Estimator:
    """Attacker state estimates computed directly from the three automata.
    A damage state of ``None`` stands for "left the damage automaton"."""

    def __init__(self, g: Fsa, s: Fsa, h: Fsa, u: EventUniverse):
        self.g, self.s, self.h, self.u = g, s, h, u

    def _h(self, z, ev):
        return None if z is None else self.h.step(z, ev)

    def closure(self, members) -> frozenset:
        seen = set(members)
        stack = list(seen)
        while stack:
            q, x, z = stack.pop()
            for ev in self.u.unobservable:
                nq, nx = self.g.step(q, ev), self.s.step(x, ev)
                if nq is None or nx is None:
                    continue
                nxt = (nq, nx, self._h(z, ev))
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    def initial(self) -> frozenset:
        return self.closure([(self.g.initial, self.s.initial, self.h.initial)])

    def moves(self, est) -> dict:
        out: dict = {}
        for q, x, z in est:
            for ev in self.u.observable:
                nq, nx = self.g.step(q, ev), self.s.step(x, ev)
                if nq is None or nx is None:
                    continue
                lab = ObsLabel(ev if ev in self.u.attacker_observable else EPSILON, self.s.enabled(nx))
                out.setdefault(lab, set()).add((nq, nx, self._h(z, ev)))
        return {lab: self.closure(v) for lab, v in out.items()}

    def after(self, obs) -> frozenset | None:
        est = self.initial()
        for lab in obs:
            est = self.moves(est).get(lab)
            if est is None:
                return None
        return est

    def reachable(self) -> set:
        start = self.initial()
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in self.moves(queue.popleft()).values():
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    def relevant(self, member) -> bool:
        q, x, _ = member
        return any(
            self.g.step(q, ev) is not None and self.s.step(x, ev) is None
            for ev in self.u.attackable
        )


def certificate(inst: ProblemInstance, oracle: BoundedOracle) -> CheckResult:
    g, h, u = inst.plant, inst.damage, inst.universe
    s = oracle.sr.fsa
    est = _Estimator(g, s, h, u)
    covered = set()
    for obs, strings in oracle.classes.items():
        full = est.after(obs)
        bounded = {(g.run(w), s.run(w), h.run(w)) for w in strings}
        missing = {v for v in full if est.relevant(v)} - bounded
        if missing:
            return CheckResult(
                "enumeration bound covers every estimate",
                False,
                f"observation of length {len(obs)} misses {len(missing)} relevant state(s)",
            )
        covered.add(full)
    for e in est.reachable():
        if e not in covered and any(est.relevant(v) for v in e):
            return CheckResult(
                "enumeration bound covers every estimate",
                False,
                f"an estimate with {len(e)} state(s) is not reached within the bound",
            )
    return CheckResult("enumeration bound covers every estimate", True)


def is_certified(inst: ProblemInstance, max_len: int = 6) -> bool:
    try:
        sr = inst.realize()
    except AttackModelError:
        return False
    return certificate(inst, BoundedOracle(inst.plant, sr, inst.damage, max_len)).passed


def certified_instances(seed: int, count: int, max_len: int = 6, **kw) -> list[ProblemInstance]:
    """First ``count`` random instances from ``seed`` that pass the
    certificate."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_instance(rng, **kw)
        if is_certified(inst, max_len):
            out.append(inst)
    return out


# -- cross checks ---------------------------------------------------------------

@dataclass
class CrossCheck:
    """Everything computed once per instance for the checks below."""

    instance: ProblemInstance
    sr: SupervisorRealization
    result: SynthesisResult
    oracle: BoundedOracle
    max_len: int

    @classmethod
    def build(cls, inst: ProblemInstance, max_len: int = 6) -> "CrossCheck":
        sr = inst.realize()
        result = synthesize(inst.plant, sr, inst.damage, strict_damage=inst.options.strict_damage)
        return cls(inst, sr, result, BoundedOracle(inst.plant, sr, inst.damage, max_len), max_len)

    @property
    def attacker(self) -> MooreAttacker:
        return self.result.attacker

    def attacked_language(self, attacker) -> set:
        loop = build_attacked_loop(self.instance.plant, self.sr, attacker, self.instance.damage)
        return set(enumerate_language(loop.fsa, self.max_len))

    def attack_sets_match(self) -> CheckResult:
        name = "attack sets match estimate labels"
        m = self.attacker
        for obs in sorted(self.oracle.classes, key=len):
            y = m.state_after(obs)
            expected = self.oracle.attack_set(obs)
            got = None if y is None else m.lf[y]
            if got != expected:
                shown = "".join(map(str, obs)) or "ε"
                return CheckResult(
                    name, False, f"after {shown}: oracle {sorted(expected)}, pipeline {got and sorted(got)}"
                )
        return CheckResult(name, True, f"{len(self.oracle.classes)} observations")

    def verdict_matches(self) -> CheckResult:
        pairs = self.oracle.attack_pairs()
        ok = self.result.verdict.attackable == bool(pairs)
        return CheckResult(
            "attackability verdict matches attack pairs",
            ok,
            f"pipeline {self.result.verdict.attackable}, oracle {len(pairs)} pair(s)",
        )

    def witness_verified(self) -> CheckResult:
        name = "witness pair verified by enumeration"
        pair = self.result.pair
        if pair is None:
            return CheckResult(name, True, "no witness (not attackable)")
        if len(pair.string) > self.max_len:
            return CheckResult(name, False, f"witness {pair} is longer than the bound")
        chk = self.oracle.check_pair(pair.string, pair.event)
        detail = str(pair) if chk.ok else f"{pair} fails at {' '.join(chk.counterexample)}"
        return CheckResult(name, chk.ok, detail)

    def extensions_damaging(self) -> CheckResult:
        for pair in self.oracle.attack_pairs():
            for e in self.oracle.enabled_extensions(pair):
                if not self.oracle.in_damage(e):
                    return CheckResult("enabled extensions are damaging", False, " ".join(e))
        return CheckResult("enabled extensions are damaging", True)

    def supremal_language(self) -> CheckResult:
        name = "supremal attacked language equals supervised plus enabled extensions"
        got = self.attacked_language(self.attacker)
        expected = self.oracle.supremal_language()
        if got == expected:
            return CheckResult(name, True, f"{len(got)} strings")
        extra = sorted(got - expected, key=len)[:1]
        lost = sorted(expected - got, key=len)[:1]
        return CheckResult(name, False, f"unexpected {extra}, missing {lost}")

    def supremal_success(self) -> CheckResult:
        name = "supremal attacker damages without detection"
        loop = build_attacked_loop(self.instance.plant, self.sr, self.attacker, self.instance.damage)
        v = check_success(loop)
        if self.result.verdict.attackable:
            return CheckResult(name, v.successful, str(v))
        # nothing to attack: the loop must never leave the supervised behavior
        left = any(isinstance(st, Outcome) for st in loop.fsa.states)
        return CheckResult(name, not left, "not attackable; no attack fired" if not left else str(v))

    def pruned_attackers(self, rng: random.Random, count: int = 20, tries: int = 400):
        """Random successful variants of the supremal attacker: each label
        is thinned at random and occasionally gets a foreign event."""
        m = self.attacker
        states = m.states_in_order()
        attackable = sorted_canonical(self.instance.universe.attackable)
        found = []
        for _ in range(tries):
            if len(found) >= count:
                break
            lf = {}
            for y in states:
                keep = {e for e in sorted_canonical(m.lf[y]) if rng.random() < 0.6}
                if attackable and rng.random() < 0.1:
                    keep.add(rng.choice(attackable))
                lf[y] = keep
            variant = m.with_lf(lf)
            loop = build_attacked_loop(self.instance.plant, self.sr, variant, self.instance.damage)
            if check_success(loop).successful:
                found.append(variant)
        return found

    def supremality(self, rng: random.Random, count: int = 20) -> CheckResult:
        name = "pruned successful attackers stay within supremal behavior"
        if not self.result.verdict.attackable:
            return CheckResult(name, True, "not attackable")
        sup = self.attacked_language(self.attacker)
        variants = self.pruned_attackers(rng, count)
        for v in variants:
            extra = self.attacked_language(v) - sup
            if extra:
                return CheckResult(name, False, f"variant generates {' '.join(min(extra, key=len))}")
        ok = len(variants) >= count
        return CheckResult(name, ok, f"{len(variants)} successful variant(s)")


def run_checks(inst: ProblemInstance, max_len: int = 6, *, seed: int = 0, prunings: int = 20) -> list[CheckResult]:
    cc = CrossCheck.build(inst, max_len)
    return [
        certificate(inst, cc.oracle),
        cc.attack_sets_match(),
        cc.verdict_matches(),
        cc.witness_verified(),
        cc.extensions_damaging(),
        cc.supremal_language(),
        cc.supremal_success(),
        cc.supremality(random.Random(seed), prunings),
    ]
