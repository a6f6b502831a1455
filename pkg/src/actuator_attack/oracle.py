"""Brute-force reference answers obtained by enumerating strings.

Nothing here touches the product or subset machinery.  Supervised strings
are listed up to a length bound, grouped by what the attacker observes, and
the attack-pair conditions are tested on each group literally.  Results are
exact only when every relevant behavior fits inside the bound; condition
checks over observation-equivalent strings are bounded by ``max_len``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .automata import DEFAULT_ENUMERATION_GUARD, Fsa, string_key
from .errors import LanguageBoundExceeded, ObservationNotFeasible
from .supervisory import EPSILON, ObsLabel, SupervisorRealization
from .synthesis import AttackPair


def _run(a: Fsa, s):
    state = a.initial
    for ev in s:
        state = a.step(state, ev)
        if state is None:
            return None
    return state


@dataclass(frozen=True)
class PairCheck:
    ok: bool
    counterexample: tuple | None
    bounded: bool = True  # equivalence condition was only checked up to max_len

    def __bool__(self):
        return self.ok


class BoundedOracle:
    """Enumerates the supervised language once and answers queries on it."""

    def __init__(
        self,
        plant: Fsa,
        sr: SupervisorRealization,
        damage: Fsa,
        max_len: int = 6,
        *,
        guard: int = DEFAULT_ENUMERATION_GUARD,
    ):
        if max_len > guard:
            raise LanguageBoundExceeded(f"oracle bound {max_len} exceeds the guard {guard}")
        self.plant = plant
        self.sr = sr
        self.damage = damage
        self.universe = sr.universe
        self.max_len = max_len
        self.strings: list[tuple] = []
        self.observation: dict[tuple, tuple] = {}
        self.classes: dict[tuple, list[tuple]] = defaultdict(list)
        self._enumerate()

    def _enumerate(self):
        u, s, g = self.universe, self.sr.fsa, self.plant
        events = sorted(u.events)
        # depth-first over (string, plant state, supervisor state, observation)
        stack = [((), g.initial, s.initial, ())]
        while stack:
            string, q, x, obs = stack.pop()
            self.strings.append(string)
            self.observation[string] = obs
            self.classes[obs].append(string)
            if len(string) == self.max_len:
                continue
            for ev in events:
                nq, nx = g.step(q, ev), s.step(x, ev)
                if nq is None or nx is None:
                    continue
                nobs = obs
                if ev in u.observable:
                    seen = ev if ev in u.attacker_observable else EPSILON
                    nobs = obs + (ObsLabel(seen, s.enabled(nx)),)
                stack.append((string + (ev,), nq, nx, nobs))
        self.strings.sort(key=string_key)
        for members in self.classes.values():
            members.sort(key=string_key)

    def in_plant(self, s) -> bool:
        return _run(self.plant, s) is not None

    def in_damage(self, s) -> bool:
        return _run(self.damage, s) in self.damage.marked

    def in_closed_loop(self, s) -> bool:
        return tuple(s) in self.observation

    def equivalents(self, s) -> list[tuple]:
        return self.classes[self.observation[tuple(s)]]

    def check_pair(self, s, sigma) -> PairCheck:
        s = tuple(s)
        if s not in self.observation:
            return PairCheck(False, s)
        if not (self.in_plant(s + (sigma,)) and self.in_damage(s + (sigma,))):
            return PairCheck(False, s + (sigma,))
        for other in self.equivalents(s):
            ext = other + (sigma,)
            if self.in_plant(ext) and not self.in_damage(ext):
                return PairCheck(False, ext)
        return PairCheck(True, None)

    def attack_pairs(self) -> set[AttackPair]:
        pairs = set()
        for obs, members in self.classes.items():
            for sigma in sorted(self.universe.attackable):
                exts = [m for m in members if self.in_plant(m + (sigma,))]
                if exts and all(self.in_damage(m + (sigma,)) for m in exts):
                    pairs.update(AttackPair(m, sigma) for m in exts)
        return pairs

    def attack_set(self, obs) -> frozenset:
        obs = tuple(obs)
        if obs not in self.classes:
            raise ObservationNotFeasible(
                "no supervised string within the bound produces this observation"
            )
        out = set()
        for sigma in self.universe.attackable:
            if any(self.check_pair(m, sigma).ok for m in self.classes[obs]):
                out.add(sigma)
        return frozenset(out)

    def enabled_extensions(self, pair: AttackPair) -> set[tuple]:
        s, sigma = tuple(pair[0]), pair[1]
        return {
            m + (sigma,) for m in self.equivalents(s) if self.in_plant(m + (sigma,))
        }

    def supremal_language(self, max_len: int | None = None) -> set[tuple]:
        """Supervised strings plus every enabled extension of every attack
        pair, cut at ``max_len`` (default: the oracle bound)."""
        bound = self.max_len if max_len is None else max_len
        out = {s for s in self.strings if len(s) <= bound}
        for pair in self.attack_pairs():
            out |= {e for e in self.enabled_extensions(pair) if len(e) <= bound}
        return out


def oracle_attack_pairs(g, sr, h, max_len: int = 6) -> set[AttackPair]:
    return BoundedOracle(g, sr, h, max_len).attack_pairs()


def oracle_I(g, sr, h, obs, max_len: int = 6) -> frozenset:
    return BoundedOracle(g, sr, h, max_len).attack_set(obs)


def oracle_En(g, sr, h, pair, max_len: int = 6) -> set[tuple]:
    return BoundedOracle(g, sr, h, max_len).enabled_extensions(pair)


def verify_attack_pair(g, sr, h, pair, max_len: int = 6) -> PairCheck:
    return BoundedOracle(g, sr, h, max_len).check_pair(pair[0], pair[1])
