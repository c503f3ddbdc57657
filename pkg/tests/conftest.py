from __future__ import annotations

import random

import pytest

from hrecolor.graph_core import Graph, Instance
from hrecolor.instances import (
    as_target,
    complete,
    connected_graphs,
    cycle,
    homomorphisms,
    looped_star,
    path,
    suite_targets,
    wedge_of_triangles,
)


def c10_on_c5() -> tuple[Graph, Graph, dict[str, str]]:
    """C10 wound twice around C5."""
    g = cycle(10, "g")
    h = as_target(cycle(5, "h"))
    alpha = {f"g{i}": f"h{i % 5}" for i in range(10)}
    return g, h, alpha


def k2_on_path() -> Instance:
    """K2 {u,v} on the path a-b-c, with u moving from a to c."""
    g = Graph.from_edges([("u", "v")])
    h = as_target(Graph.from_edges([("a", "b"), ("b", "c")]))
    return Instance(g, h, {"u": "a", "v": "b"}, {"u": "c", "v": "b"}, q="u")


def random_reduced_walk(h: Graph, rng: random.Random, start: str | None = None,
                        max_len: int = 10) -> tuple[str, ...]:
    """A random reduced walk (never steps straight back)."""
    v = start if start is not None else rng.choice(h.vertices)
    walk = [v]
    for _ in range(rng.randint(0, max_len)):
        nbrs = sorted(h.adjacency[walk[-1]])
        if len(walk) >= 2:
            nbrs = [w for w in nbrs if w != walk[-2]]
        if not nbrs:
            break
        walk.append(rng.choice(nbrs))
    return tuple(walk) if len(walk) > 1 else ()


def random_walk(h: Graph, rng: random.Random, start: str | None = None,
                max_len: int = 12) -> tuple[str, ...]:
    """A random walk that may backtrack."""
    v = start if start is not None else rng.choice(h.vertices)
    walk = [v]
    for _ in range(rng.randint(0, max_len)):
        walk.append(rng.choice(sorted(h.adjacency[walk[-1]])))
    return tuple(walk) if len(walk) > 1 else ()


# free-ish targets with cycles, loops and trees for groupoid tests
GROUPOID_TARGETS = {
    "K3": as_target(complete(3)),
    "wedge": as_target(wedge_of_triangles()),
    "C5": as_target(cycle(5)),
    "P4": as_target(path(4)),
    "looped-star": looped_star(3),
}


@pytest.fixture
def rng():
    return random.Random(20240611)


_SMALL_G = None
_HOMS: dict = {}


def small_graphs():
    global _SMALL_G
    if _SMALL_G is None:
        _SMALL_G = connected_graphs(5)
    return _SMALL_G


def homs_of(gi: int, name: str):
    key = (gi, name)
    if key not in _HOMS:
        _HOMS[key] = list(homomorphisms(small_graphs()[gi], suite_targets()[name]))
    return _HOMS[key]


def random_suite_instance(rng: random.Random, names=None) -> Instance:
    """A random instance over the small connected graphs and suite targets,
    with a random distinguished vertex."""
    targets = suite_targets()
    names = names or sorted(targets)
    while True:
        gi = rng.randrange(len(small_graphs()))
        name = rng.choice(names)
        homs = homs_of(gi, name)
        if homs:
            break
    g = small_graphs()[gi]
    return Instance(g, targets[name], rng.choice(homs), rng.choice(homs), q=rng.choice(g.vertices))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
