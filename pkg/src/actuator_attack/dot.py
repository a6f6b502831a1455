"""Graphviz DOT text for the annotated supervisor, the product and the
labelled subset automaton.  Output is canonical: node ids follow sorted (or
breadth-first, for the subset automaton) order, so equal inputs give
byte-identical text."""
from __future__ import annotations

from .automata import Fsa, sorted_canonical
from .supervisory import EPSILON, ObsLabel, format_events
from .synthesis import (
    BOTTOM,
    TOP,
    AnnotatedSupervisor,
    GeneralizedProduct,
    MooreAttacker,
    PlantStep,
    Sink,
    describe_lf,
    describe_state,
)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _tuple_label(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(str(c) for c in v) + ")"
    return str(v)


def _edge_label(lab) -> str:
    if isinstance(lab, PlantStep):
        return str(lab)
    if isinstance(lab, ObsLabel):
        return str(lab)
    if isinstance(lab, tuple) and len(lab) == 2 and isinstance(lab[1], frozenset):
        ev, cmd = lab
        return f"({ev or 'ε'},{format_events(cmd)})"
    return str(lab) if lab != EPSILON else "ε"


def _render(name: str, fsa: Fsa, order: list, label, attrs=lambda s: {}) -> str:
    ids = {s: f"n{i}" for i, s in enumerate(order)}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    lines.append("  __start [shape=point];")
    for s in order:
        extra = "".join(f", {k}={v}" for k, v in sorted(attrs(s).items()))
        lines.append(f"  {ids[s]} [label={_quote(label(s))}{extra}];")
    lines.append(f"  __start -> {ids[fsa.initial]};")
    edges = sorted(
        ((ids[s], _edge_label(lab), ids[d]) for s, lab, d in fsa.transitions()),
        key=lambda e: (int(e[0][1:]), e[1], int(e[2][1:])),
    )
    for s, lab, d in edges:
        lines.append(f"  {s} -> {d} [label={_quote(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def annotated_supervisor_dot(sa: AnnotatedSupervisor) -> str:
    fsa = sa.fsa
    return _render(
        "annotated_supervisor",
        fsa,
        fsa.sorted_states(),
        lambda x: str(x),
        lambda x: {"shape": "doublecircle"} if x == fsa.initial else {},
    )


def product_dot(gp: GeneralizedProduct) -> str:
    fsa = gp.fsa
    order = gp.core_states() + [s for s in (TOP, BOTTOM) if s in fsa.states]

    def attrs(v):
        if v is TOP:
            return {"shape": "doubleoctagon", "style": "filled", "fillcolor": "salmon", "penwidth": 2}
        if v is BOTTOM:
            return {"shape": "box", "style": "filled", "fillcolor": "lightgray"}
        return {}

    return _render("generalized_product", fsa, order, lambda v: str(v) if isinstance(v, Sink) else _tuple_label(v), attrs)


def subset_dot(m: MooreAttacker) -> str:
    def label(y):
        return f"{describe_state(sorted_canonical(y))} | Lf={describe_lf(m.lf[y])}"

    def attrs(y):
        return {"style": "filled", "fillcolor": "salmon"} if m.lf[y] else {}

    return _render("subset_automaton", m.fsa, m.states_in_order(), label, attrs)
