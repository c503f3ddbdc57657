"""Graphs, colorings and the structural checks every instance must pass.

Vertices are opaque strings.  All iteration that can influence an output goes
through ``sorted`` so results are reproducible run to run.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EmptyIntersection, PreconditionViolation, UnknownVertex

Coloring = Mapping[str, str]


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    adjacency: Mapping[str, frozenset[str]]
    allows_loops: bool = False

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex identifiers")
        for v, nbrs in self.adjacency.items():
            if v not in known:
                raise UnknownVertex(f"adjacency names unknown vertex {v!r}")
            for w in nbrs:
                if w not in known:
                    raise UnknownVertex(f"edge {v!r}-{w!r} names unknown vertex {w!r}")
                if v not in self.adjacency.get(w, ()):
                    raise ValueError(f"adjacency is not symmetric on {v!r}-{w!r}")
                if w == v and not self.allows_loops:
                    raise ValueError(f"loop at {v!r} in a graph that forbids loops")

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        vertices: Iterable[str] = (),
        allows_loops: bool = False,
    ) -> "Graph":
        adj: dict[str, set[str]] = {str(v): set() for v in vertices}
        for a, b in edges:
            a, b = str(a), str(b)
            if a == b and not allows_loops:
                raise ValueError(f"loop at {a!r} in a graph that forbids loops")
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return cls(
            vertices=tuple(sorted(adj)),
            adjacency={v: frozenset(n) for v, n in adj.items()},
            allows_loops=allows_loops,
        )

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def has_edge(self, a: str, b: str) -> bool:
        return b in self.adjacency.get(a, ())

    def edges(self) -> list[tuple[str, str]]:
        """Each undirected edge once, as a sorted pair; loops as ``(v, v)``."""
        out = []
        for v in self.vertices:
            for w in sorted(self.adjacency[v]):
                if v <= w:
                    out.append((v, w))
        return out

    def has_loops(self) -> bool:
        return any(v in self.adjacency[v] for v in self.vertices)

    def __len__(self):
        return len(self.vertices)


def components(g: Graph) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in sorted(g.adjacency[v]):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def check_connected(g: Graph) -> bool:
    if not g.vertices:
        return False
    return len(components(g)) == 1


def check_mnp(h: Graph) -> tuple[str, str] | None:
    """Return ``None`` if every two distinct vertices share at most one
    neighbor, otherwise the lexicographically first violating pair."""
    verts = h.vertices
    for i, a in enumerate(verts):
        na = h.adjacency[a]
        for b in verts[i + 1:]:
            if len(na & h.adjacency[b]) > 1:
                return (a, b)
    return None


def common_neighbor_color(h: Graph, a: str, b: str) -> str:
    """The unique color adjacent to both ``a`` and ``b``.

    This is the color every neighbor of a vertex must hold while that vertex
    is recolored from ``a`` to ``b``.
    """
    if a == b:
        raise ValueError("common_neighbor_color needs two distinct colors")
    common = h.neighbors(a) & h.neighbors(b)
    if not common:
        raise EmptyIntersection(f"{a!r} and {b!r} have no common neighbor")
    assert len(common) == 1, f"MNP violated by {a!r}, {b!r}: {sorted(common)}"
    (c,) = common
    return c


def is_homomorphism(g: Graph, h: Graph, sigma: Coloring) -> bool:
    for v in g.vertices:
        if v not in sigma:
            raise UnknownVertex(f"coloring is not defined on {v!r}")
    for v, c in sigma.items():
        if v not in g.adjacency:
            raise UnknownVertex(f"coloring names unknown G-vertex {v!r}")
        if c not in h.adjacency:
            raise UnknownVertex(f"coloring uses unknown color {c!r}")
    for u, v in g.edges():
        if not h.has_edge(sigma[u], sigma[v]):
            return False
    return True


def _two_coloring(h: Graph, source: str) -> tuple[dict[str, int], bool]:
    """Side labels over the component of ``source`` and whether that
    component is bipartite (a loop counts as an odd cycle)."""
    side = {source: 0}
    bipartite = True
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in h.adjacency[v]:
            if w not in side:
                side[w] = 1 - side[v]
                queue.append(w)
            elif side[w] == side[v]:
                bipartite = False
    return side, bipartite


def even_walk_exists(h: Graph, a: str, b: str) -> bool:
    if a == b:
        return True
    side, bipartite = _two_coloring(h, a)
    if b not in side:
        return False
    return not bipartite or side[b] == 0


def parity_distances(h: Graph, source: str) -> tuple[dict[str, int], dict[str, int]]:
    """Shortest even and odd walk lengths from ``source`` to every vertex."""
    dist: tuple[dict[str, int], dict[str, int]] = ({source: 0}, {})
    queue = deque([(source, 0)])
    while queue:
        v, p = queue.popleft()
        d = dist[p][v]
        for w in sorted(h.adjacency[v]):
            if w not in dist[1 - p]:
                dist[1 - p][w] = d + 1
                queue.append((w, 1 - p))
    return dist


def shortest_walk_with_parity(h: Graph, a: str, b: str, parity: int) -> tuple[str, ...] | None:
    """A shortest walk from ``a`` to ``b`` whose length has the given parity.

    Returned as a vertex tuple; a length-0 walk is ``()``.  A shortest walk of
    fixed parity never backtracks, since deleting the backtrack keeps parity.
    """
    parent: dict[tuple[str, int], tuple[str, int] | None] = {(a, 0): None}
    queue = deque([(a, 0)])
    while queue:
        state = queue.popleft()
        if state == (b, parity):
            break
        v, p = state
        for w in sorted(h.adjacency[v]):
            nxt = (w, 1 - p)
            if nxt not in parent:
                parent[nxt] = state
                queue.append(nxt)
    if (b, parity) not in parent:
        return None
    path = []
    cur: tuple[str, int] | None = (b, parity)
    while cur is not None:
        path.append(cur[0])
        cur = parent[cur]
    path.reverse()
    return tuple(path) if len(path) > 1 else ()


@dataclass(frozen=True)
class Instance:
    """A validated reconfiguration instance: graphs, two colorings, and the
    distinguished vertex ``q`` (lexicographically smallest by default)."""

    g: Graph
    h: Graph
    alpha: Mapping[str, str]
    beta: Mapping[str, str]
    q: str = field(default="")

    def __post_init__(self):
        validate_instance(self.g, self.h, self.alpha, self.beta)
        if not self.q:
            object.__setattr__(self, "q", self.g.vertices[0])
        elif self.q not in self.g.adjacency:
            raise PreconditionViolation("q is a vertex of G", repr(self.q))


def validate_instance(g: Graph, h: Graph, alpha: Coloring, beta: Coloring) -> None:
    """Raise PreconditionViolation naming the first failing check."""
    if g.allows_loops or g.has_loops():
        raise PreconditionViolation("G is loopless")
    if not g.edges():
        raise PreconditionViolation("G has an edge")
    if not check_connected(g):
        raise PreconditionViolation("G connected")
    bad = check_mnp(h)
    if bad is not None:
        raise PreconditionViolation("H has MNP", f"colors {bad[0]!r} and {bad[1]!r} share two neighbors")
    for name, sigma in (("alpha", alpha), ("beta", beta)):
        try:
            ok = is_homomorphism(g, h, sigma)
        except UnknownVertex as exc:
            raise PreconditionViolation(f"{name} is a homomorphism", str(exc)) from None
        if not ok:
            raise PreconditionViolation(f"{name} is a homomorphism", "some edge maps to a non-edge")
