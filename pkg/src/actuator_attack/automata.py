"""Deterministic partial automata, epsilon-NFAs and the handful of
operations the synthesis pipeline is built from.

States and labels may be any hashable value: strings, ints, tuples of those,
frozensets, or the named tuples used for composite labels.  All outputs are
ordered with :func:`order_key`, so repeated runs produce identical tables.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from .errors import LanguageBoundExceeded, NondeterministicTransition

DEFAULT_ENUMERATION_GUARD = 12


def order_key(obj):
    """Total order over the heterogeneous values used as states and labels.

    Digit-only strings compare numerically so that states named ``"2"`` and
    ``"10"`` come out in the order a reader expects.
    """
    if obj is None:
        return (0,)
    if isinstance(obj, Enum):
        return (1, str(obj.value))
    if isinstance(obj, bool):
        return (2, int(obj))
    if isinstance(obj, int):
        return (2, obj)
    if isinstance(obj, str):
        if obj.isdigit():
            return (3, int(obj), obj)
        return (4, obj)
    if isinstance(obj, tuple):
        return (5, tuple(order_key(x) for x in obj))
    if isinstance(obj, (frozenset, set)):
        return (6, tuple(sorted(order_key(x) for x in obj)))
    return (7, repr(obj))


def sorted_canonical(items: Iterable) -> list:
    return sorted(items, key=order_key)


def string_key(s: tuple):
    """Length-lexicographic key for label strings."""
    return (len(s), tuple(order_key(x) for x in s))


class Fsa:
    """Finite automaton with a partial, deterministic transition function.

    ``transitions`` is either a mapping ``{(src, label): dst}`` or an
    iterable of ``(src, label, dst)`` triples.  The object is not mutated
    after construction.
    """

    __slots__ = ("states", "alphabet", "initial", "marked", "_delta")

    def __init__(
        self,
        states: Iterable[Hashable],
        alphabet: Iterable[Hashable],
        transitions,
        initial: Hashable,
        marked: Iterable[Hashable] = (),
    ):
        if isinstance(transitions, Mapping):
            triples = [(src, lab, dst) for (src, lab), dst in transitions.items()]
        else:
            triples = list(transitions)
        states = set(states)
        states.add(initial)
        delta: dict = {}
        for src, lab, dst in triples:
            states.add(src)
            states.add(dst)
            row = delta.setdefault(src, {})
            if lab in row and row[lab] != dst:
                raise NondeterministicTransition(
                    f"state {src!r} has two successors on {lab!r}: {row[lab]!r} and {dst!r}"
                )
            row[lab] = dst
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet) | {lab for _, lab, _ in triples}
        self.initial = initial
        self.marked = frozenset(marked)
        if not self.marked <= self.states:
            raise ValueError(f"marked states {set(self.marked - self.states)} are not states")
        self._delta = delta

    def step(self, state, label):
        row = self._delta.get(state)
        if row is None:
            return None
        return row.get(label)

    def out(self, state) -> dict:
        return dict(self._delta.get(state, {}))

    def enabled(self, state) -> frozenset:
        return frozenset(self._delta.get(state, ()))

    def run(self, string: Iterable, start=None):
        """State reached from ``start`` (default: initial) or ``None``."""
        state = self.initial if start is None else start
        for label in string:
            state = self.step(state, label)
            if state is None:
                return None
        return state

    def accepts(self, string: Iterable) -> bool:
        return self.run(string) is not None

    def accepts_marked(self, string: Iterable) -> bool:
        return self.run(string) in self.marked

    def transitions(self) -> list[tuple]:
        out = [
            (src, lab, dst)
            for src, row in self._delta.items()
            for lab, dst in row.items()
        ]
        return sorted(out, key=lambda t: (order_key(t[0]), order_key(t[1]), order_key(t[2])))

    def sorted_states(self) -> list:
        return sorted_canonical(self.states)

    def is_complete(self, alphabet: Iterable | None = None) -> bool:
        labels = self.alphabet if alphabet is None else frozenset(alphabet)
        return all(labels <= self.enabled(q) for q in self.states)

    def __eq__(self, other):
        if not isinstance(other, Fsa):
            return NotImplemented
        return (
            self.states == other.states
            and self.alphabet == other.alphabet
            and self.initial == other.initial
            and self.marked == other.marked
            and self.transitions() == other.transitions()
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Fsa(states={len(self.states)}, alphabet={len(self.alphabet)}, "
            f"transitions={sum(len(r) for r in self._delta.values())}, initial={self.initial!r})"
        )


@dataclass(frozen=True)
class EpsilonNfa:
    """Nondeterministic automaton whose ``None``-labelled moves are silent."""

    states: frozenset
    alphabet: frozenset
    transitions: tuple  # (src, label-or-None, dst)
    initial: Hashable
    marked: frozenset = frozenset()
    _succ: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if None in self.alphabet:
            raise ValueError("the empty label cannot be part of the alphabet")
        succ: dict = {}
        for src, lab, dst in self.transitions:
            succ.setdefault(src, {}).setdefault(lab, set()).add(dst)
        object.__setattr__(self, "_succ", succ)

    @classmethod
    def build(cls, states, alphabet, transitions, initial, marked=()):
        transitions = tuple(transitions)
        states = frozenset(states) | {initial}
        states |= {t[0] for t in transitions} | {t[2] for t in transitions}
        alphabet = frozenset(alphabet) | {t[1] for t in transitions if t[1] is not None}
        return cls(states, alphabet, transitions, initial, frozenset(marked))

    def successors(self, state, label) -> set:
        return self._succ.get(state, {}).get(label, set())

    def labels_at(self, state) -> set:
        return {lab for lab in self._succ.get(state, {}) if lab is not None}

    def closure(self, states: Iterable) -> frozenset:
        seen = set(states)
        stack = list(seen)
        while stack:
            for nxt in self.successors(stack.pop(), None):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)


def reachable_states(a: Fsa) -> set:
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        for dst in a.out(queue.popleft()).values():
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return seen


def reachable_trim(a: Fsa) -> Fsa:
    """Drop every state that cannot be reached from the initial state."""
    keep = reachable_states(a)
    return Fsa(
        keep,
        a.alphabet,
        [t for t in a.transitions() if t[0] in keep],
        a.initial,
        a.marked & keep,
    )


def coaccessible_trim(a: Fsa) -> Fsa:
    """Keep only states from which a marked state can be reached.  The
    initial state is kept even when it cannot reach one."""
    back: dict = {}
    for src, _, dst in a.transitions():
        back.setdefault(dst, set()).add(src)
    keep = set(a.marked)
    stack = list(keep)
    while stack:
        for src in back.get(stack.pop(), ()):
            if src not in keep:
                keep.add(src)
                stack.append(src)
    trans = [t for t in a.transitions() if t[0] in keep and t[2] in keep]
    return Fsa(keep | {a.initial}, a.alphabet, trans, a.initial, a.marked)


def sync_product(a: Fsa, b: Fsa) -> Fsa:
    """Reachable synchronous product; states are ``(state_a, state_b)`` pairs.

    Labels shared by both alphabets need both automata to move; a label owned
    by only one automaton moves that one alone.
    """
    shared = a.alphabet & b.alphabet
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    trans = []
    while queue:
        pa, pb = pair = queue.popleft()
        candidates = a.enabled(pa) | b.enabled(pb)
        for lab in sorted_canonical(candidates):
            if lab in shared:
                na, nb = a.step(pa, lab), b.step(pb, lab)
                if na is None or nb is None:
                    continue
            elif lab in a.alphabet:
                na, nb = a.step(pa, lab), pb
            else:
                na, nb = pa, b.step(pb, lab)
            dst = (na, nb)
            trans.append((pair, lab, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    marked = {p for p in seen if p[0] in a.marked and p[1] in b.marked}
    return Fsa(seen, a.alphabet | b.alphabet, trans, start, marked)


def determinize(n: EpsilonNfa) -> Fsa:
    """Subset construction.

    Result states are sorted tuples of member states (never empty), so the
    member set of a state is simply ``set(state)``.
    """

    def name(members: frozenset) -> tuple:
        return tuple(sorted_canonical(members))

    start = name(n.closure([n.initial]))
    seen = {start}
    queue = deque([start])
    trans = []
    while queue:
        current = queue.popleft()
        labels = set()
        for v in current:
            labels |= n.labels_at(v)
        for lab in sorted_canonical(labels):
            moved = set()
            for v in current:
                moved |= n.successors(v, lab)
            dst = name(n.closure(moved))
            trans.append((current, lab, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    marked = {y for y in seen if n.marked.intersection(y)}
    return Fsa(seen, n.alphabet, trans, start, marked)


def enumerate_language(
    a: Fsa,
    max_len: int,
    *,
    marked_only: bool = False,
    guard: int = DEFAULT_ENUMERATION_GUARD,
) -> list[tuple]:
    """Every string of ``L(a)`` (or of the marked language) up to ``max_len``
    labels, in length-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if max_len > guard:
        raise LanguageBoundExceeded(f"max_len {max_len} exceeds the enumeration guard {guard}")
    out = []
    level = [((), a.initial)]
    for depth in range(max_len + 1):
        for s, q in level:
            if not marked_only or q in a.marked:
                out.append(s)
        if depth == max_len:
            break
        nxt = []
        for s, q in level:
            row = a.out(q)
            for lab in sorted_canonical(row):
                nxt.append((s + (lab,), row[lab]))
        level = nxt
    return out


def shortest_path(a: Fsa, targets) -> tuple | None:
    """Length-lexicographically least string from the initial state to a
    state satisfying ``targets`` (a predicate or a collection)."""
    hit = targets if callable(targets) else (lambda q, _t=frozenset(targets): q in _t)
    parent = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if hit(q):
            path = []
            while parent[q] is not None:
                q, lab = parent[q]
                path.append(lab)
            return tuple(reversed(path))
        row = a.out(q)
        for lab in sorted_canonical(row):
            dst = row[lab]
            if dst not in parent:
                parent[dst] = (q, lab)
                queue.append(dst)
    return None
