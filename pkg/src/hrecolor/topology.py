"""Spanning trees of G, topological validity, and tight closed walks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import networkx as nx

from .errors import Disconnected, EndpointMismatch
from .graph_core import Graph, shortest_walk_with_parity
from .groupoid import (
    EPS,
    Walk,
    WalkFamily,
    commutes_by_product,
    conjugate,
    gconcat,
    ginverse,
    gprod,
    map_walk,
    primitive_root,
    reduce,
    solve_conjugacy_simultaneous,
)


@dataclass(frozen=True)
class TreeData:
    """A BFS spanning tree of G rooted at ``q``.

    ``paths[v]`` is the tree path from q to v as a vertex tuple, always
    starting with q (so ``paths[q] == (q,)``; as a walk that is ε).
    """

    g: Graph
    q: str
    parent: Mapping[str, str | None]
    paths: Mapping[str, tuple[str, ...]]

    def walk_to(self, v: str) -> Walk:
        p = self.paths[v]
        return p if len(p) > 1 else EPS

    @cached_property
    def non_tree_edges(self) -> list[tuple[str, str]]:
        tree = {frozenset((v, p)) for v, p in self.parent.items() if p is not None}
        return [e for e in self.g.edges() if frozenset(e) not in tree]

    @cached_property
    def cycle_basis(self) -> list[tuple[str, ...]]:
        """One closed walk at q per non-tree edge (u, v), u < v:
        tree path to u, the edge, tree path back from v."""
        return [self.paths[u] + tuple(reversed(self.paths[v])) for u, v in self.non_tree_edges]


def build_tree(g: Graph, q: str) -> TreeData:
    parent: dict[str, str | None] = {q: None}
    paths = {q: (q,)}
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for w in sorted(g.adjacency[v]):
            if w not in parent:
                parent[w] = v
                paths[w] = paths[v] + (w,)
                queue.append(w)
    if len(parent) != len(g.vertices):
        raise Disconnected("G must be connected to have a spanning tree")
    return TreeData(g=g, q=q, parent=parent, paths=paths)


def _check_q(alpha, beta, tree: TreeData, q_walk: Walk) -> None:
    a, b = alpha[tree.q], beta[tree.q]
    if q_walk:
        ok = q_walk[0] == a and q_walk[-1] == b
    else:
        ok = a == b
    if not ok:
        raise EndpointMismatch(f"walk must run from {a!r} to {b!r}")


def basis_images(alpha, beta, tree: TreeData) -> list[tuple[Walk, Walk]]:
    return [(reduce(map_walk(alpha, c)), reduce(map_walk(beta, c))) for c in tree.cycle_basis]


def is_topologically_valid(alpha, beta, tree: TreeData, q_walk: Walk) -> bool:
    _check_q(alpha, beta, tree, q_walk)
    return all(conjugate(q_walk, a) == b for a, b in basis_images(alpha, beta, tree))


def enumerate_valid_family(h: Graph, alpha, beta, tree: TreeData) -> WalkFamily:
    """The set of topologically valid walks, in one of its four shapes."""
    start, end = alpha[tree.q], beta[tree.q]
    if shortest_walk_with_parity(h, start, end, 0) is None and \
            shortest_walk_with_parity(h, start, end, 1) is None:
        return WalkFamily.empty(start, end)
    pairs = basis_images(alpha, beta, tree)
    solved = solve_conjugacy_simultaneous(pairs, start, end)
    if solved.is_empty:
        return solved
    images = [a for a, _ in pairs if a]
    if not images:
        return WalkFamily("AllReduced", start, end)
    p = solved.member(0)
    first = images[0]
    if any(not commutes_by_product(first, other) for other in images[1:]):
        family = WalkFamily.single(p, start, end)
    else:
        root, _ = primitive_root(first)
        family = WalkFamily.coset(root, p, start, end)
    # the fold in the solver and the case analysis here must agree
    assert family == solved, (family, solved)
    return family


# ----------------------------------------------------------------------------
# tight walks


@dataclass(frozen=True)
class TightWitness:
    walk: tuple[str, ...]  # closed walk in G, first vertex repeated at the end
    vertices: frozenset[str]


def step_digraph(g: Graph, alpha) -> nx.DiGraph:
    """Arcs (u,v) -> (v,w) between oriented G-edges whose α-image does not
    backtrack, i.e. α(w) != α(u)."""
    d = nx.DiGraph()
    for u in g.vertices:
        for v in g.adjacency[u]:
            d.add_node((u, v))
            for w in g.adjacency[v]:
                if alpha[w] != alpha[u]:
                    d.add_edge((u, v), (v, w))
    return d


def find_tight_walk(g: Graph, h: Graph, alpha) -> TightWitness | None:
    """Some closed walk of G whose α-image is cyclically reduced, or None.

    Nodes with no outgoing arc are stripped repeatedly; whatever survives
    lies on or leads into a cycle, so walking forward from the smallest
    survivor must repeat a node.
    """
    d = step_digraph(g, alpha)
    out_deg = {n: d.out_degree(n) for n in d.nodes}
    queue = deque(n for n, k in out_deg.items() if k == 0)
    removed = set()
    while queue:
        n = queue.popleft()
        removed.add(n)
        for pred in d.predecessors(n):
            out_deg[pred] -= 1
            if out_deg[pred] == 0:
                queue.append(pred)
    alive = sorted(n for n in d.nodes if n not in removed)
    if not alive:
        return None
    seen: dict[tuple[str, str], int] = {}
    path = []
    node = alive[0]
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = min(s for s in d.successors(node) if s not in removed)
    cycle = path[seen[node]:]
    walk = tuple(e[0] for e in cycle) + (cycle[0][0],)
    return TightWitness(walk=walk, vertices=frozenset(walk))


def tight_vertices(g: Graph, alpha) -> frozenset[str]:
    """Every G-vertex lying on some α-tight closed walk.

    An oriented edge sits on a tight closed walk exactly when it belongs to a
    strongly connected component of the step digraph that contains a cycle.
    """
    d = step_digraph(g, alpha)
    out: set[str] = set()
    for comp in nx.strongly_connected_components(d):
        if len(comp) > 1:
            for u, v in comp:
                out.update((u, v))
    return frozenset(out)


def is_tight(alpha, closed_walk: tuple[str, ...]) -> bool:
    image = map_walk(alpha, closed_walk)
    k = len(image) - 1
    return k >= 2 and all(image[i - 1] != image[(i + 1) % k] for i in range(1, k + 1))


def tight_pinned_walk(witness: TightWitness, tree: TreeData, alpha, beta) -> Walk:
    """The only candidate ``red(α(W))^-1 · red(β(W))`` for W from a witness
    vertex to q.  Requires α and β to agree on that vertex."""
    v = min(witness.vertices)
    path = tree.walk_to(v)
    return gconcat(reduce(map_walk(alpha, path)), ginverse(reduce(map_walk(beta, path))))


def closed_walk_as_basis_product(tree: TreeData, closed_walk: tuple[str, ...]) -> Walk:
    """Rewrite a closed walk at q as a product of basis cycles (and their
    inverses) and reduce it; used to check that the basis generates."""
    index = {e: i for i, e in enumerate(tree.non_tree_edges)}
    basis = tree.cycle_basis
    out = EPS
    for u, v in zip(closed_walk, closed_walk[1:]):
        if (u, v) in index:
            piece = basis[index[(u, v)]]
        elif (v, u) in index:
            piece = tuple(reversed(basis[index[(v, u)]]))
        else:
            # tree edge: W_u · (u,v) · W_v^-1 reduces to ε
            continue
        out = gprod(out, reduce(piece))
    return out
