"""Brute-force ground truth: explicit search of the solution graph.

Nothing here uses the groupoid machinery to decide anything; colorings are
tuples in ``g.vertices`` order and steps are generated straight from the
definition (a vertex may take any color adjacent to all its neighbors'
colors).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import IncompleteScan, StateBudgetExceeded
from .graph_core import Graph
from .groupoid import WalkFamily
from .reconfig import RecoloringSequence, RecoloringStep

DEFAULT_MAX_STATES = 2_000_000

Encoded = tuple  # colors in g.vertices order


@dataclass
class SolutionGraphScan:
    g: Graph
    h: Graph
    start: Encoded
    distance: dict[Encoded, int]
    parent: dict[Encoded, Encoded | None]
    complete: bool = True

    @property
    def reachable(self) -> set[Encoded]:
        return set(self.distance)

    def encode(self, sigma: Mapping[str, str]) -> Encoded:
        return tuple(sigma[v] for v in self.g.vertices)

    def decode(self, enc: Encoded) -> dict[str, str]:
        return dict(zip(self.g.vertices, enc))

    def distance_to(self, sigma: Mapping[str, str]) -> int | None:
        return self.distance.get(self.encode(sigma))

    def path_to(self, sigma: Mapping[str, str]) -> RecoloringSequence | None:
        target = self.encode(sigma)
        if target not in self.parent:
            return None
        chain = []
        cur: Encoded | None = target
        while cur is not None:
            chain.append(cur)
            cur = self.parent[cur]
        chain.reverse()
        steps = []
        for before, after in zip(chain, chain[1:]):
            (i,) = [k for k in range(len(before)) if before[k] != after[k]]
            steps.append(RecoloringStep(self.g.vertices[i], before[i], after[i]))
        return RecoloringSequence(start=self.decode(chain[0]), steps=tuple(steps))


def _neighbor_index(g: Graph) -> list[list[int]]:
    pos = {v: i for i, v in enumerate(g.vertices)}
    return [[pos[w] for w in sorted(g.adjacency[v])] for v in g.vertices]


def successors(g: Graph, h: Graph, enc: Encoded, nbr_idx=None):
    """Yield ``(i, new_color, successor)`` for every single-vertex recoloring."""
    nbr_idx = nbr_idx or _neighbor_index(g)
    for i, nbrs in enumerate(nbr_idx):
        allowed = None
        for j in nbrs:
            cand = h.adjacency[enc[j]]
            allowed = cand if allowed is None else allowed & cand
        for c in sorted(allowed or ()):
            if c != enc[i]:
                yield i, c, enc[:i] + (c,) + enc[i + 1:]


def bfs_scan(g: Graph, h: Graph, start: Mapping[str, str],
             max_states: int = DEFAULT_MAX_STATES, truncate: bool = False) -> SolutionGraphScan:
    """Breadth-first search of the component of ``start`` in the solution graph."""
    nbr_idx = _neighbor_index(g)
    s = tuple(start[v] for v in g.vertices)
    distance = {s: 0}
    parent: dict[Encoded, Encoded | None] = {s: None}
    frontier = [s]
    complete = True
    while frontier and complete:
        nxt = []
        for enc in frontier:
            for _, _, succ in successors(g, h, enc, nbr_idx):
                if succ in distance:
                    continue
                if len(distance) >= max_states:
                    if not truncate:
                        raise StateBudgetExceeded(f"more than {max_states} colorings reachable")
                    complete = False
                    break
                distance[succ] = distance[enc] + 1
                parent[succ] = enc
                nxt.append(succ)
            if not complete:
                break
        frontier = sorted(nxt)
    return SolutionGraphScan(g, h, s, distance, parent, complete)


@dataclass
class ValidationResult:
    ok: bool
    index: int | None = None  # first failing step; -1 means the start coloring
    reason: str = ""

    def __bool__(self):
        return self.ok


def _is_hom(g: Graph, h: Graph, sigma: Mapping[str, str]) -> bool:
    return all(v in sigma and sigma[v] in h.adjacency for v in g.vertices) and all(
        sigma[w] in h.adjacency[sigma[v]] for v in g.vertices for w in g.adjacency[v]
    )


def validate_sequence(g: Graph, h: Graph, s: RecoloringSequence) -> ValidationResult:
    cur = dict(s.start)
    if not _is_hom(g, h, cur):
        return ValidationResult(False, -1, "start is not a homomorphism")
    for i, st in enumerate(s.steps):
        if st.vertex not in g.adjacency:
            return ValidationResult(False, i, f"unknown vertex {st.vertex!r}")
        if cur[st.vertex] != st.from_color:
            return ValidationResult(False, i, f"{st.vertex!r} has color {cur[st.vertex]!r}, not {st.from_color!r}")
        if st.from_color == st.to_color:
            return ValidationResult(False, i, "step does not change the color")
        nxt = dict(cur)
        nxt[st.vertex] = st.to_color
        changed = [v for v in g.vertices if nxt[v] != cur[v]]
        if len(changed) != 1 or not _is_hom(g, h, nxt):
            return ValidationResult(False, i, "result is not a homomorphism")
        cur = nxt
    return ValidationResult(True)


def frozen_set(scan: SolutionGraphScan) -> set[str]:
    if not scan.complete:
        raise IncompleteScan("frozen vertices need the whole component")
    out = set()
    for i, v in enumerate(scan.g.vertices):
        if all(enc[i] == scan.start[i] for enc in scan.distance):
            out.add(v)
    return out


def _extend(walk: tuple, a: str, mid: str, b: str) -> tuple:
    """Append (a, mid, b) to a reduced walk and reduce at the seam."""
    w = list(walk) if walk else [a]
    for x in (mid, b):
        if len(w) >= 2 and w[-2] == x:
            w.pop()
        else:
            w.append(x)
    return tuple(w) if len(w) > 1 else ()


@dataclass
class TraceReport:
    ok: bool
    traced: set = field(default_factory=set)
    members: set = field(default_factory=set)
    traced_outside: set = field(default_factory=set)
    members_missing: set = field(default_factory=set)

    def __bool__(self):
        return self.ok


def realizable_walks(scan: SolutionGraphScan, beta: Mapping[str, str], q: str,
                     max_len: int, max_states: int = DEFAULT_MAX_STATES) -> set[tuple]:
    """Every reduced q-walk of length <= max_len realized by some sequence
    from the scan's start to ``beta``.

    Explores pairs (coloring, reduced walk of q so far), dropping walks that
    grow past ``max_len``.  That loses nothing: the cheapest sequence
    realizing a walk X moves q along X without backtracking, so all its
    intermediate walks are prefixes of X.
    """
    if not scan.complete:
        raise IncompleteScan("tracing needs the whole component")
    g, h = scan.g, scan.h
    nbr_idx = _neighbor_index(g)
    qi = g.vertices.index(q)
    target = scan.encode(beta)
    if target not in scan.distance:
        return set()
    start = (scan.start, ())
    seen = {start}
    queue = deque([start])
    out = set()
    while queue:
        enc, walk = queue.popleft()
        if enc == target:
            out.add(walk)
        for i, c, succ in successors(g, h, enc, nbr_idx):
            if i == qi:
                # the color every neighbor of q holds during the step
                mid = enc[nbr_idx[qi][0]]
                w2 = _extend(walk, enc[qi], mid, c)
                if len(w2) - 1 > max_len:
                    continue
            else:
                w2 = walk
            state = (succ, w2)
            if state not in seen:
                if len(seen) >= max_states:
                    raise StateBudgetExceeded("trace state budget exhausted")
                seen.add(state)
                queue.append(state)
    return out


def trace_family_check(scan: SolutionGraphScan, alpha: Mapping[str, str], beta: Mapping[str, str],
                       q: str, family: WalkFamily, member_cap: int | None = None) -> TraceReport:
    """Compare realized q-walks with a claimed family, up to ``member_cap``
    (default ``2·|V(H)| + 4``), in both directions."""
    assert scan.encode(alpha) == scan.start
    if member_cap is None:
        member_cap = 2 * len(scan.h.vertices) + 4
    traced = realizable_walks(scan, beta, q, member_cap)
    members = family.members_upto(member_cap, scan.h)
    outside = {w for w in traced if not family.contains(w, scan.h)}
    missing = members - traced
    return TraceReport(not outside and not missing, traced, members, outside, missing)
