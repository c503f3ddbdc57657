"""Named target graphs, small-graph generators and homomorphism enumeration."""

from __future__ import annotations

import random
from typing import Iterator

import networkx as nx

from .graph_core import Graph, check_mnp


def complete(n: int, prefix: str = "") -> Graph:
    names = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges([(a, b) for i, a in enumerate(names) for b in names[i + 1:]], names)


def cycle(n: int, prefix: str = "") -> Graph:
    names = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges([(names[i], names[(i + 1) % n]) for i in range(n)], names)


def path(n: int, prefix: str = "") -> Graph:
    names = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges(zip(names, names[1:]), names)


def wedge_of_triangles() -> Graph:
    """Two triangles x-a-b and x-c-d sharing the hub x."""
    return Graph.from_edges([("x", "a"), ("a", "b"), ("b", "x"), ("x", "c"), ("c", "d"), ("d", "x")])


def triangle_with_pendant() -> Graph:
    return Graph.from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("a", "d")])


def looped_star(leaves: int = 3) -> Graph:
    edges = []
    for i in range(leaves):
        leaf = f"l{i}"
        edges += [("x", leaf), (leaf, leaf)]
    return Graph.from_edges(edges, allows_loops=True)


def looped_k2() -> Graph:
    return Graph.from_edges([("a", "b"), ("a", "a"), ("b", "b")], allows_loops=True)


def as_target(g: Graph) -> Graph:
    """The same graph flagged as a target (loops permitted)."""
    return Graph(g.vertices, g.adjacency, allows_loops=True)


def suite_targets() -> dict[str, Graph]:
    """The seven MNP targets used by the oracle-equivalence suite."""
    targets = {
        "K3": complete(3),
        "C5": cycle(5),
        "P4": path(4),
        "wedge": wedge_of_triangles(),
        "C6": cycle(6),
        "K3+pendant": triangle_with_pendant(),
        "looped-star": looped_star(3),
    }
    targets = {k: as_target(v) for k, v in targets.items()}
    for name, h in targets.items():
        assert check_mnp(h) is None, name
    return targets


def from_networkx(nxg: nx.Graph, prefix: str = "g") -> Graph:
    names = {v: f"{prefix}{i}" for i, v in enumerate(sorted(nxg.nodes))}
    return Graph.from_edges([(names[a], names[b]) for a, b in nxg.edges], names.values())


def connected_graphs(max_vertices: int = 5) -> list[Graph]:
    """Every connected simple graph on 2..max_vertices vertices, one per
    isomorphism class (taken from the networkx graph atlas, which covers up
    to seven vertices)."""
    if max_vertices > 7:
        raise ValueError("the graph atlas stops at seven vertices")
    out = []
    for nxg in nx.graph_atlas_g():
        n = nxg.number_of_nodes()
        if 2 <= n <= max_vertices and nx.is_connected(nxg):
            out.append(from_networkx(nxg))
    return out


def random_connected_graph(n: int, p: float, rng: random.Random) -> Graph:
    while True:
        nxg = nx.gnp_random_graph(n, p, seed=rng.randrange(2**31))
        if n >= 2 and nx.is_connected(nxg):
            return from_networkx(nxg)


def homomorphisms(g: Graph, h: Graph) -> Iterator[dict[str, str]]:
    """All homomorphisms G -> H by backtracking over g.vertices in BFS order."""
    order: list[str] = []
    seen = set()
    for s in g.vertices:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(g.adjacency[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    colors = h.vertices
    assign: dict[str, str] = {}

    def rec(i: int):
        if i == len(order):
            yield dict(assign)
            return
        v = order[i]
        for c in colors:
            if all(w not in assign or h.has_edge(assign[w], c) for w in g.adjacency[v]):
                assign[v] = c
                yield from rec(i + 1)
                del assign[v]

    yield from rec(0)


def random_instance(rng: random.Random, max_vertices: int = 6) -> dict:
    """A random valid instance as a plain dict (the instance-file layout)."""
    targets = suite_targets()
    while True:
        name = rng.choice(sorted(targets))
        h = targets[name]
        n = rng.randint(2, max_vertices)
        g = random_connected_graph(n, rng.uniform(0.3, 0.8), rng)
        homs = list(homomorphisms(g, h))
        if homs:
            break
    alpha, beta = rng.choice(homs), rng.choice(homs)
    return {
        "H": {"vertices": list(h.vertices), "edges": [list(e) for e in h.edges()]},
        "G": {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]},
        "alpha": alpha,
        "beta": beta,
    }
