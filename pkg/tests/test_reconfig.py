from __future__ import annotations

import random

import pytest

from conftest import c10_on_c5, k2_on_path, random_suite_instance, random_walk
from hrecolor.errors import InvalidSequence, NotRealizable
from hrecolor.graph_core import Graph, Instance
from hrecolor.groupoid import EPS, gconcat, ginverse, gpower, is_reduced, length, map_walk, reduce
from hrecolor.instances import as_target, complete, cycle, homomorphisms, path
from hrecolor.oracle import bfs_scan, successors
from hrecolor.reconfig import (
    RecoloringSequence,
    RecoloringStep,
    check_and_build,
    check_sequence,
    decide_reachable,
    enumerate_realizable,
    sequence_cost,
    shortest_sequence,
    transport,
    vertex_walk,
    vertex_walks,
)
from hrecolor.topology import build_tree, find_tight_walk, tight_pinned_walk


def _c5_k3():
    g, h = cycle(5, "g"), as_target(complete(3))
    return g, h, list(homomorphisms(g, h))


def random_sequence(inst: Instance, rng: random.Random, steps: int) -> RecoloringSequence:
    """A random walk in the solution graph starting at alpha."""
    cur = tuple(inst.alpha[v] for v in inst.g.vertices)
    out = []
    for _ in range(steps):
        succ = list(successors(inst.g, inst.h, cur))
        if not succ:
            break
        i, c, nxt = rng.choice(succ)
        out.append(RecoloringStep(inst.g.vertices[i], cur[i], c))
        cur = nxt
    return RecoloringSequence(dict(inst.alpha), tuple(out))


# ---------------------------------------------------------------------------
# sequences and vertex walks


def test_step_must_change_color():
    with pytest.raises(ValueError):
        RecoloringStep("u", "a", "a")


def test_vertex_walk_of_empty_sequence():
    inst = k2_on_path()
    s = RecoloringSequence(inst.alpha)
    assert vertex_walk(inst.g, inst.h, s, "u") == EPS


def test_vertex_walk_k2_on_path():
    inst = k2_on_path()
    s = RecoloringSequence(inst.alpha, (RecoloringStep("u", "a", "c"),))
    assert vertex_walk(inst.g, inst.h, s, "u") == ("a", "b", "c")
    assert vertex_walk(inst.g, inst.h, s, "v") == EPS
    assert s.final() == inst.beta


def test_vertex_walk_c5_four_steps_replay():
    g, h, _ = _c5_k3()
    alpha = dict(zip(g.vertices, "01021"))
    steps = (
        RecoloringStep("g0", "0", "2"),
        RecoloringStep("g0", "2", "0"),
        RecoloringStep("g1", "1", "2"),
        RecoloringStep("g1", "2", "1"),
    )
    s = RecoloringSequence(alpha, steps)
    check_sequence(g, h, s)
    # the middle color of each K3 step is the remaining third color
    expected: dict[str, list[str]] = {v: [] for v in g.vertices}
    for st in steps:
        third = ({"0", "1", "2"} - {st.from_color, st.to_color}).pop()
        if not expected[st.vertex]:
            expected[st.vertex].append(st.from_color)
        expected[st.vertex] += [third, st.to_color]
    walks = vertex_walks(g, h, s)
    for v in g.vertices:
        assert walks[v] == tuple(expected[v])
    assert walks["g0"] == ("0", "1", "2", "1", "0")
    assert reduce(walks["g0"]) == EPS


def test_invalid_sequence_is_rejected():
    inst = k2_on_path()
    s = RecoloringSequence(inst.alpha, (RecoloringStep("v", "b", "a"),))
    with pytest.raises(InvalidSequence):
        vertex_walk(inst.g, inst.h, s, "v")


# ---------------------------------------------------------------------------
# transport and check_and_build


def test_transport_identity_is_empty(rng):
    for _ in range(20):
        inst = random_suite_instance(rng)
        tree = build_tree(inst.g, inst.q)
        assert all(w == EPS for w in transport(EPS, inst.alpha, inst.alpha, tree).values())


def test_transport_k2_on_path():
    inst = k2_on_path()
    table = transport(("a", "b", "c"), inst.alpha, inst.beta, build_tree(inst.g, "u"))
    assert table == {"u": ("a", "b", "c"), "v": EPS}


def test_transport_on_the_double_wind():
    g, h, alpha = c10_on_c5()
    r = ("h0", "h1", "h2", "h3", "h4", "h0")
    table = transport(gpower(r, 2), alpha, alpha, build_tree(g, "g0"))
    for v, w in table.items():
        assert length(w) == 10 and w[0] == w[-1] == alpha[v]


def test_check_and_build_k2_on_path():
    inst = k2_on_path()
    seq = check_and_build(inst, ("a", "b", "c"))
    assert seq.steps == (RecoloringStep("u", "a", "c"),)


def test_check_and_build_rejects_odd_walks():
    g, h, homs = _c5_k3()
    inst = Instance(g, h, homs[0], homs[0])
    a = homs[0]["g0"]
    b, c = sorted(h.adjacency[a])
    with pytest.raises(NotRealizable) as info:
        check_and_build(inst, (a, b, c, a))
    assert info.value.reason == "parity"


def test_check_and_build_rejects_wrong_endpoints():
    inst = k2_on_path()
    with pytest.raises(NotRealizable) as info:
        check_and_build(inst, ("c", "b", "a"))
    assert info.value.reason == "endpoints"


def test_check_and_build_refuses_to_move_tight_vertices():
    g, h, alpha = c10_on_c5()
    beta = {f"g{i}": f"h{(i + 1) % 5}" for i in range(10)}
    inst = Instance(g, h, alpha, beta, q="g0")
    q_walk = ("h0", "h4", "h3", "h2", "h1")
    with pytest.raises(NotRealizable) as info:
        check_and_build(inst, q_walk)
    assert info.value.reason == "tight"
    assert enumerate_realizable(inst).kind == "Empty"
    assert not decide_reachable(inst).reachable


def test_pinned_walk_on_identity_is_realized_by_empty_sequence():
    g, h, alpha = c10_on_c5()
    inst = Instance(g, h, alpha, alpha, q="g0")
    tree = build_tree(g, "g0")
    pinned = tight_pinned_walk(find_tight_walk(g, h, alpha), tree, alpha, alpha)
    assert pinned == EPS
    assert len(check_and_build(inst, pinned, tree)) == 0
    fam = enumerate_realizable(inst, tree)
    assert fam.kind == "Single" and fam.walk == EPS


# ---------------------------------------------------------------------------
# realizable families and decisions


def test_k2_swap_is_unreachable():
    k2g = Graph.from_edges([("u", "v")])
    k2h = as_target(Graph.from_edges([("a", "b")]))
    inst = Instance(k2g, k2h, {"u": "a", "v": "b"}, {"u": "b", "v": "a"})
    assert enumerate_realizable(inst).kind == "Empty"
    d = decide_reachable(inst)
    assert not d.reachable and d.sequence is None
    assert shortest_sequence(inst) is None


def test_c5_on_k3_identity_family():
    g, h, homs = _c5_k3()
    alpha = homs[0]
    fam = enumerate_realizable(Instance(g, h, alpha, alpha, q="g0"))
    assert fam.kind == "Coset" and fam.stride == 2 and fam.walk == EPS
    assert length(fam.root) == 3


def test_tree_identity_is_all_even():
    g = path(4, "g")
    h = as_target(complete(3))
    alpha = {"g0": "0", "g1": "1", "g2": "0", "g3": "2"}
    inst = Instance(g, h, alpha, alpha)
    assert enumerate_realizable(inst).kind == "AllEvenReduced"
    d = decide_reachable(inst)
    assert d.reachable and len(d.sequence) == 0
    assert shortest_sequence(inst)[0] == 0


def test_shortest_k2_on_path():
    n, seq = shortest_sequence(k2_on_path())
    assert n == 1 and len(seq) == 1


def winding(g: Graph, sigma) -> int:
    """Net number of turns a K3-coloring of a cycle makes around the triangle."""
    vs = list(g.vertices)
    steps = [(int(sigma[vs[(i + 1) % len(vs)]]) - int(sigma[vs[i]])) % 3 for i in range(len(vs))]
    total = sum(1 if d == 1 else -1 for d in steps)
    assert total % 3 == 0
    return total // 3


def test_c5_on_k3_components_follow_winding_number():
    g, h, homs = _c5_k3()
    assert len(homs) == 30
    assert sorted(winding(g, a) for a in homs) == [-1] * 15 + [1] * 15
    for alpha in homs:
        scan = bfs_scan(g, h, alpha)
        assert len(scan.distance) == 15
        for beta in homs:
            inst = Instance(g, h, alpha, beta)
            same = winding(g, alpha) == winding(g, beta)
            assert decide_reachable(inst).reachable == same
            res = shortest_sequence(inst)
            assert (res[0] if res else None) == scan.distance_to(beta)


# ---------------------------------------------------------------------------
# invariants


def test_transport_identity(rng):
    """red(S(v)) = red(σ0(W))^-1 · red(S(u)) · red(σl(W)) for any G-walk W from u to v."""
    probes = 0
    while probes < 300:
        inst = random_suite_instance(rng)
        seq = random_sequence(inst, rng, rng.randint(0, 12))
        walks = {v: reduce(w) for v, w in vertex_walks(inst.g, inst.h, seq).items()}
        final = seq.final()
        for _ in range(5):
            w = random_walk(inst.g, rng, max_len=8)
            if not w:
                continue
            u, v = w[0], w[-1]
            left = reduce(map_walk(inst.alpha, w))
            right = reduce(map_walk(final, w))
            assert walks[v] == gconcat(gconcat(ginverse(left), walks[u]), right)
            probes += 1


def test_emitted_sequences_are_sound(rng):
    for _ in range(150):
        inst = random_suite_instance(rng)
        d = decide_reachable(inst)
        res = shortest_sequence(inst)
        assert d.reachable == (res is not None)
        if not d.reachable:
            continue
        tree = build_tree(inst.g, inst.q)
        for seq, q_walk in ((d.sequence, d.q_walk), (res[1], None)):
            check_sequence(inst.g, inst.h, seq)
            assert seq.final() == inst.beta
            walks = vertex_walks(inst.g, inst.h, seq)
            for w in walks.values():
                assert w == EPS or is_reduced(w)
                assert length(w) % 2 == 0
            if q_walk is not None:
                assert walks[inst.q] == q_walk
            table = transport(walks[inst.q], inst.alpha, inst.beta, tree)
            assert table == walks
        assert res[0] == sequence_cost(vertex_walks(inst.g, inst.h, res[1])[inst.q], inst.alpha, inst.beta, tree)


def test_oracle_geodesics_have_reduced_walks(rng):
    for _ in range(80):
        inst = random_suite_instance(rng)
        scan = bfs_scan(inst.g, inst.h, inst.alpha)
        for enc in rng.sample(sorted(scan.distance), min(5, len(scan.distance))):
            seq = scan.path_to(scan.decode(enc))
            for w in vertex_walks(inst.g, inst.h, seq).values():
                assert w == EPS or is_reduced(w)


def test_family_members_are_realizable(rng):
    for _ in range(100):
        inst = random_suite_instance(rng)
        tree = build_tree(inst.g, inst.q)
        fam = enumerate_realizable(inst, tree)
        for x in sorted(fam.members_upto(2 * len(inst.h.vertices) + 4, inst.h))[:15]:
            seq = check_and_build(inst, x, tree)
            assert vertex_walks(inst.g, inst.h, seq)[inst.q] == x
