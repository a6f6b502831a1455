"""Command line front end.

Exit codes: 0 success (including a "not attackable" answer), 1 invalid
instance or failed check, 2 internal error, 3 attackable when
``--fail-if-attackable`` is given.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import dot
from .attacked_loop import build_attacked_loop, no_attack, replay
from .campaign import certified_instances, run_checks
from .errors import AttackModelError
from .instance_format import (
    ProblemInstance,
    bundled_instance_names,
    dumps,
    load_bundled,
    load_instance,
    synthesis_report,
)
from .supervisory import format_events, format_observation
from .synthesis import describe_state, synthesize

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_ATTACKABLE = 0, 1, 2, 3


def resolve_instance(ref: str) -> ProblemInstance:
    """Load a file, or a bundled instance by name (``fig3``)."""
    if os.path.exists(ref):
        return load_instance(ref)
    name = os.path.basename(ref)
    if name in bundled_instance_names() or f"{name}.desa" in bundled_instance_names():
        return load_bundled(name)
    raise FileNotFoundError(f"no instance file {ref!r} and no bundled instance of that name")


def _apply_flags(inst: ProblemInstance, args) -> ProblemInstance:
    kw = {}
    if getattr(args, "repair_selfloops", False):
        kw["repair_selfloops"] = True
    if getattr(args, "strict_damage", False):
        kw["strict_damage"] = True
    if getattr(args, "max_oracle_len", None) is not None:
        kw["max_oracle_len"] = args.max_oracle_len
    return inst.with_options(**kw) if kw else inst


def _emit(args, data: dict, text: str) -> None:
    sys.stdout.write(dumps(data) if args.json else text.rstrip("\n") + "\n")


def cmd_validate(args) -> int:
    inst = _apply_flags(resolve_instance(args.instance), args)
    sr = inst.realize()
    u = inst.universe
    data = {
        "valid": True,
        "events": len(u.events),
        "plant_states": len(inst.plant.states),
        "supervisor_states": len(sr.fsa.states),
        "damage_states": len(inst.damage.states),
    }
    text = (
        f"valid: {len(u.events)} events, plant {len(inst.plant.states)} states, "
        f"supervisor {len(sr.fsa.states)} states, damage {len(inst.damage.states)} states"
    )
    _emit(args, data, text)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    inst = _apply_flags(resolve_instance(args.instance), args)
    result = synthesize(inst.plant, inst.realize(), inst.damage, strict_damage=inst.options.strict_damage)
    report = synthesis_report(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(report["attacker"]))
    v = result.verdict
    lines = [f"attackable: {str(v.attackable).lower()}"]
    if v.attackable:
        lines += [
            f"witness observation: {format_observation(v.observation)}",
            f"estimate: {describe_state(v.state)}",
            f"attacked events: {format_events(result.attacker.lf[v.state])}",
            f"attack pair: {result.pair}",
        ]
    lines.append(f"attacker: {len(result.attacker.fsa.states)} states")
    _emit(args, report, "\n".join(lines))
    if v.attackable and args.fail_if_attackable:
        return EXIT_ATTACKABLE
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.instance is None and args.seed is None:
        raise AttackModelError("verify needs an instance or --seed for a random campaign")
    if args.instance is not None:
        inst = _apply_flags(resolve_instance(args.instance), args)
        cases = [(inst.source or args.instance, inst)]
    else:
        bound = args.max_oracle_len or 6
        cases = [
            (f"random#{i}", inst)
            for i, inst in enumerate(certified_instances(args.seed, args.count, bound))
        ]
    seed = args.seed or 0
    data, lines, ok = [], [], True
    for label, inst in cases:
        results = run_checks(inst, inst.options.max_oracle_len if args.max_oracle_len is None else args.max_oracle_len, seed=seed)
        ok &= all(r.passed for r in results)
        data.append({"instance": label, "checks": [r._asdict() for r in results]})
        lines.append(label)
        lines += ["  " + r.line() for r in results]
    lines.append("all checks passed" if ok else "some checks FAILED")
    _emit(args, {"passed": ok, "instances": data}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_replay(args) -> int:
    inst = _apply_flags(resolve_instance(args.instance), args)
    sr = inst.realize()
    result = synthesize(inst.plant, sr, inst.damage, strict_damage=inst.options.strict_damage)
    attacker = result.attacker if args.attacker == "supremal" else no_attack(result.attacker)
    loop = build_attacked_loop(inst.plant, sr, attacker, inst.damage)
    events = [e for word in args.events for e in word.split()]
    trace = replay(loop, events)
    _emit(args, trace.to_json(), trace.format())
    return EXIT_OK


def cmd_export_dot(args) -> int:
    inst = _apply_flags(resolve_instance(args.instance), args)
    result = synthesize(inst.plant, inst.realize(), inst.damage, strict_damage=inst.options.strict_damage)
    graphs = {
        "annotated_supervisor": dot.annotated_supervisor_dot(result.annotated),
        "product": dot.product_dot(result.product),
        "subset": dot.subset_dot(result.attacker),
    }
    if args.which != "all":
        graphs = {args.which: graphs[args.which]}
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        written = []
        for name, text in graphs.items():
            path = os.path.join(args.out_dir, f"{name}.dot")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            written.append(path)
        _emit(args, {"written": written}, "\n".join(written))
    elif args.json:
        sys.stdout.write(dumps(graphs))
    else:
        sys.stdout.write("".join(graphs.values()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--repair-selfloops", action="store_true",
                        help="add missing unobservable self-loops to the supervisor")
    common.add_argument("--strict-damage", action="store_true",
                        help="reject a damage automaton that is not complete")
    common.add_argument("--max-oracle-len", type=int, default=None, metavar="N",
                        help="string bound for the enumeration oracle (default 6)")

    p = argparse.ArgumentParser(prog="actuator-attack", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check an instance")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("synthesize", parents=[common], help="decide attackability and build the attacker")
    s.add_argument("instance")
    s.add_argument("-o", "--output", help="write the attacker JSON here")
    s.add_argument("--fail-if-attackable", action="store_true", help="exit 3 when attackable")
    s.set_defaults(func=cmd_synthesize)

    c = sub.add_parser("verify", parents=[common], help="cross-check the pipeline against enumeration")
    c.add_argument("instance", nargs="?")
    c.add_argument("--seed", type=int, default=None, help="random campaign seed (also seeds prunings)")
    c.add_argument("--count", type=int, default=20, help="random instances when no instance is given")
    c.set_defaults(func=cmd_verify)

    r = sub.add_parser("replay", parents=[common], help="step through an event string")
    r.add_argument("instance")
    r.add_argument("events", nargs="*", help="events, separate words or one quoted string")
    r.add_argument("--attacker", choices=["supremal", "none"], default="supremal")
    r.set_defaults(func=cmd_replay)

    d = sub.add_parser("export-dot", parents=[common], help="write DOT graphs")
    d.add_argument("instance")
    d.add_argument("--out-dir", help="directory for <graph>.dot files (default: stdout)")
    d.add_argument("--which", choices=["all", "annotated_supervisor", "product", "subset"], default="all")
    d.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AttackModelError, FileNotFoundError) as exc:
        if args.json:
            payload = exc.to_dict() if isinstance(exc, AttackModelError) else {
                "error": type(exc).__name__, "message": str(exc), "line": None, "source": None}
            sys.stdout.write(dumps(payload))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - report anything else as internal
        if args.json:
            sys.stdout.write(dumps({"error": "InternalError", "message": repr(exc)}))
        else:
            print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
