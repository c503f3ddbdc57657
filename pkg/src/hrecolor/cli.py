"""Command-line front end.

Exit codes: 0 success (including a NO answer), 1 unreadable input,
2 failed precondition / verification failure / NO under ``--expect-yes``,
3 oracle state budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import PreconditionViolation, StateBudgetExceeded
from .graph_core import Graph, Instance, check_mnp
from .instances import random_instance
from .oracle import DEFAULT_MAX_STATES, bfs_scan, frozen_set, validate_sequence
from .reconfig import (
    RecoloringSequence,
    RecoloringStep,
    decide_reachable,
    enumerate_realizable,
    shortest_sequence,
)
from .topology import build_tree, enumerate_valid_family

EXIT_OK, EXIT_PARSE, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3

INSTANCE_KEYS = {"H", "G", "alpha", "beta", "q"}
GRAPH_KEYS = {"vertices", "edges"}
STEP_KEYS = {"vertex", "from", "to"}


class ParseError(ValueError):
    pass


@dataclass
class InstanceFile:
    h: Graph
    g: Graph
    alpha: dict[str, str]
    beta: dict[str, str]
    q: str | None = None

    def to_instance(self, q: str | None = None) -> Instance:
        return Instance(self.g, self.h, self.alpha, self.beta, q or self.q or "")

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "H": _graph_json(self.h),
            "G": _graph_json(self.g),
            "alpha": dict(sorted(self.alpha.items())),
            "beta": dict(sorted(self.beta.items())),
        }
        if self.q is not None:
            out["q"] = self.q
        return out


def _graph_json(g: Graph) -> dict[str, Any]:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]}


def _strict_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{where}: missing keys {sorted(missing)}")


def _parse_graph(obj: Any, where: str, allows_loops: bool) -> Graph:
    _strict_keys(obj, GRAPH_KEYS, GRAPH_KEYS, where)
    verts, edges = obj["vertices"], obj["edges"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise ParseError(f"{where}.vertices: expected a list of strings")
    if len(set(verts)) != len(verts):
        raise ParseError(f"{where}.vertices: duplicates")
    pairs = []
    for e in edges if isinstance(edges, list) else [None]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise ParseError(f"{where}.edges: each edge is a pair of vertex names")
        if e[0] not in verts or e[1] not in verts:
            raise ParseError(f"{where}.edges: {e} names an unknown vertex")
        pairs.append((e[0], e[1]))
    if not allows_loops and any(a == b for a, b in pairs):
        # surfaced as a precondition, not a parse error
        raise PreconditionViolation("G is loopless")
    return Graph.from_edges(pairs, verts, allows_loops=allows_loops)


def _parse_coloring(obj: Any, where: str) -> dict[str, str]:
    if not isinstance(obj, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in obj.items()):
        raise ParseError(f"{where}: expected an object mapping vertex names to colors")
    return dict(obj)


def parse_instance(data: Any) -> InstanceFile:
    _strict_keys(data, INSTANCE_KEYS, INSTANCE_KEYS - {"q"}, "instance")
    q = data.get("q")
    if q is not None and not isinstance(q, str):
        raise ParseError("instance.q: expected a string")
    return InstanceFile(
        h=_parse_graph(data["H"], "H", allows_loops=True),
        g=_parse_graph(data["G"], "G", allows_loops=False),
        alpha=_parse_coloring(data["alpha"], "alpha"),
        beta=_parse_coloring(data["beta"], "beta"),
        q=q,
    )


def load_instance(path: str) -> InstanceFile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    return parse_instance(data)


def parse_steps(data: Any) -> list[RecoloringStep]:
    if not isinstance(data, list):
        raise ParseError("sequence: expected a list of steps")
    steps = []
    for i, st in enumerate(data):
        _strict_keys(st, STEP_KEYS, STEP_KEYS, f"step {i}")
        if not all(isinstance(st[k], str) for k in STEP_KEYS):
            raise ParseError(f"step {i}: fields must be strings")
        try:
            steps.append(RecoloringStep(st["vertex"], st["from"], st["to"]))
        except ValueError as exc:
            raise ParseError(f"step {i}: {exc}") from exc
    return steps


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_witness(path: str | None, seq: RecoloringSequence | None) -> None:
    if path is None:
        return
    steps = [] if seq is None else [st.to_json() for st in seq.steps]
    Path(path).write_text(dumps(steps), encoding="utf-8")


# ----------------------------------------------------------------------------
# commands


def cmd_check_h(args) -> int:
    inst = load_instance(args.instance)
    bad = check_mnp(inst.h)
    if bad is None:
        print("PASS")
        return EXIT_OK
    print(f"FAIL {bad[0]} {bad[1]}")
    return EXIT_FAIL


def cmd_decide(args) -> int:
    inst = load_instance(args.instance).to_instance(args.q)
    d = decide_reachable(inst)
    if d.reachable:
        print(f"YES {len(d.sequence)}")
        write_witness(args.witness_out, d.sequence)
        return EXIT_OK
    print("NO")
    return EXIT_FAIL if args.expect_yes else EXIT_OK


def cmd_shortest(args) -> int:
    inst = load_instance(args.instance).to_instance(args.q)
    res = shortest_sequence(inst)
    if res is None:
        print("NO")
        return EXIT_FAIL if args.expect_yes else EXIT_OK
    n, seq = res
    print(n)
    write_witness(args.witness_out, seq)
    return EXIT_OK


def cmd_families(args) -> int:
    inst = load_instance(args.instance).to_instance(args.q)
    tree = build_tree(inst.g, inst.q)
    valid = enumerate_valid_family(inst.h, inst.alpha, inst.beta, tree)
    realizable = enumerate_realizable(inst, tree)
    print(f"q: {inst.q}")
    print(f"Pi: {valid.describe()}")
    print(f"Pi': {realizable.describe()}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance).to_instance(args.q)
    scan = bfs_scan(inst.g, inst.h, inst.alpha, max_states=args.max_states)
    dist = scan.distance_to(inst.beta)
    frozen = sorted(frozen_set(scan))
    decision = decide_reachable(inst)
    shortest = shortest_sequence(inst)
    engine_dist = None if shortest is None else shortest[0]
    agree = decision.reachable == (dist is not None) and engine_dist == dist
    print(f"component: {len(scan.distance)}")
    print(f"distance: {'unreachable' if dist is None else dist}")
    print(f"frozen: {' '.join(frozen) if frozen else '-'}")
    print(f"engine: {'YES' if decision.reachable else 'NO'} {'' if engine_dist is None else engine_dist}".rstrip())
    print("agreement" if agree else "DISAGREEMENT")
    return EXIT_OK if agree else EXIT_FAIL


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    try:
        steps = parse_steps(json.loads(Path(args.sequence).read_text(encoding="utf-8")))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(str(exc)) from exc
    seq = RecoloringSequence(start=inst.alpha, steps=tuple(steps))
    res = validate_sequence(inst.g, inst.h, seq)
    if not res.ok:
        print(f"FAIL at step {res.index}: {res.reason}")
        return EXIT_FAIL
    if seq.final() != inst.beta:
        print(f"FAIL at step {len(steps)}: sequence does not end in beta")
        return EXIT_FAIL
    print("OK")
    return EXIT_OK


def cmd_gen(args) -> int:
    data = random_instance(random.Random(args.seed), max_vertices=args.max_vertices)
    text = dumps(parse_instance(data).to_json())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hrecolor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def instance_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("instance")
        sp.set_defaults(func=func)
        return sp

    instance_cmd("check-h", cmd_check_h, "check the monochromatic neighborhood property of H")
    for name, func, help_ in (
        ("decide", cmd_decide, "decide whether beta is reachable from alpha"),
        ("shortest", cmd_shortest, "find a shortest recoloring sequence"),
    ):
        sp = instance_cmd(name, func, help_)
        sp.add_argument("--q", default=None)
        sp.add_argument("--witness-out", default=None)
        sp.add_argument("--expect-yes", action="store_true")
    sp = instance_cmd("families", cmd_families, "describe valid and realizable walk families")
    sp.add_argument("--q", default=None)
    sp = instance_cmd("oracle", cmd_oracle, "brute-force the solution graph and compare")
    sp.add_argument("--q", default=None)
    sp.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    sp = sub.add_parser("verify", help="validate a witness sequence")
    sp.add_argument("instance")
    sp.add_argument("sequence")
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("gen", help="emit a random valid instance")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-vertices", type=int, default=6)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionViolation as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except StateBudgetExceeded as exc:
        print(f"StateBudgetExceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
