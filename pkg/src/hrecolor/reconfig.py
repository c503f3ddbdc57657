"""Realizability of walks, sequence construction, reachability, shortest paths.

Every function takes an :class:`~hrecolor.graph_core.Instance`, which
bundles G, H, the two colorings and the distinguished vertex q.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import (
    EndpointMismatch,
    InternalValidationFailure,
    InvalidSequence,
    NotRealizable,
)
from .graph_core import (
    Graph,
    Instance,
    common_neighbor_color,
    components,
    even_walk_exists,
    is_homomorphism,
    shortest_walk_with_parity,
)
from .groupoid import (
    EPS,
    Walk,
    WalkFamily,
    concat,
    core_length,
    cyclic_reduce,
    gconcat,
    ginverse,
    gprod,
    is_reduced,
    is_torsion,
    length,
    map_walk,
    reduce,
)
from .topology import (
    TreeData,
    build_tree,
    enumerate_valid_family,
    find_tight_walk,
    is_topologically_valid,
    tight_pinned_walk,
    tight_vertices,
)


@dataclass(frozen=True)
class RecoloringStep:
    vertex: str
    from_color: str
    to_color: str

    def __post_init__(self):
        if self.from_color == self.to_color:
            raise ValueError(f"step on {self.vertex!r} does not change its color")

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "from": self.from_color, "to": self.to_color}


@dataclass(frozen=True)
class RecoloringSequence:
    start: Mapping[str, str]
    steps: tuple[RecoloringStep, ...] = ()

    def __len__(self):
        return len(self.steps)

    def colorings(self):
        cur = dict(self.start)
        yield dict(cur)
        for st in self.steps:
            cur[st.vertex] = st.to_color
            yield dict(cur)

    def final(self) -> dict[str, str]:
        cur = dict(self.start)
        for st in self.steps:
            cur[st.vertex] = st.to_color
        return cur


def check_sequence(g: Graph, h: Graph, s: RecoloringSequence) -> None:
    """Raise InvalidSequence unless every step is legal."""
    cur = dict(s.start)
    if not is_homomorphism(g, h, cur):
        raise InvalidSequence("start coloring is not a homomorphism")
    for i, st in enumerate(s.steps):
        if cur.get(st.vertex) != st.from_color:
            raise InvalidSequence(f"step {i}: {st.vertex!r} does not have color {st.from_color!r}")
        for w in g.adjacency[st.vertex]:
            if not h.has_edge(cur[w], st.to_color):
                raise InvalidSequence(f"step {i}: {st.vertex!r} -> {st.to_color!r} breaks edge to {w!r}")
        cur[st.vertex] = st.to_color


def vertex_walk(g: Graph, h: Graph, s: RecoloringSequence, v: str) -> Walk:
    """The walk in H traced by the colors of ``v`` along the sequence."""
    return vertex_walks(g, h, s)[v]


def vertex_walks(g: Graph, h: Graph, s: RecoloringSequence) -> dict[str, Walk]:
    check_sequence(g, h, s)
    out: dict[str, Walk] = {v: EPS for v in g.vertices}
    for st in s.steps:
        mid = common_neighbor_color(h, st.from_color, st.to_color)
        out[st.vertex] = concat(out[st.vertex], (st.from_color, mid, st.to_color))
    return out


# ----------------------------------------------------------------------------
# the constructive characterization


def transport(q_walk: Walk, alpha, beta, tree: TreeData) -> dict[str, Walk]:
    """``S_v = red(α(W_v))^-1 · Q · red(β(W_v))`` for every vertex v."""
    out = {}
    for v in tree.g.vertices:
        path = tree.walk_to(v)
        a = reduce(map_walk(alpha, path))
        b = reduce(map_walk(beta, path))
        out[v] = gprod(ginverse(a), q_walk, b)
    return out


def sequence_cost(q_walk: Walk, alpha, beta, tree: TreeData) -> int:
    return sum(length(w) for w in transport(q_walk, alpha, beta, tree).values()) // 2


def _arrow_order(g: Graph, table: Mapping[str, Walk]) -> list[str] | None:
    """Topological order of the arrow relation (Kahn, smallest vertex first);
    None if the relation has a cycle."""
    succ: dict[str, list[str]] = {v: [] for v in g.vertices}
    indeg = {v: 0 for v in g.vertices}
    for u, v in g.edges():
        su, sv = table[u], table[v]
        if not su or not sv:
            continue
        # u -> v when S_v starts at the second vertex of S_u
        if sv[0] == su[1]:
            assert su[0] != sv[1]
            succ[u].append(v)
            indeg[v] += 1
        else:
            assert su[0] == sv[1]
            succ[v].append(u)
            indeg[u] += 1
    heap = [v for v, k in indeg.items() if k == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == len(g.vertices) else None


def _round_robin(order: Sequence[str], table: Mapping[str, Walk]) -> list[RecoloringStep]:
    steps = []
    longest = max((len(w) for w in table.values()), default=0)
    for r in range(1, longest // 2 + 1):
        for v in order:
            s = table[v]
            if 2 * r < len(s):
                steps.append(RecoloringStep(v, s[2 * r - 2], s[2 * r]))
    return steps


def check_and_build(inst: Instance, q_walk: Walk, tree: TreeData | None = None,
                    tight: frozenset[str] | None = None) -> RecoloringSequence:
    """Build a sequence from α to β whose reduced walk at q is ``q_walk``.

    Raises NotRealizable with reason ``parity``, ``topology`` or ``tight``.
    The returned sequence has every vertex walk reduced, hence is the
    shortest among sequences realizing ``q_walk``.
    """
    g, alpha, beta = inst.g, inst.alpha, inst.beta
    tree = tree or build_tree(g, inst.q)
    if not is_reduced(q_walk) and q_walk != EPS:
        raise ValueError("q_walk must be reduced")
    if length(q_walk) % 2:
        raise NotRealizable("parity", "walk has odd length")
    try:
        valid = is_topologically_valid(alpha, beta, tree, q_walk)
    except EndpointMismatch as exc:
        raise NotRealizable("endpoints", str(exc)) from None
    if not valid:
        raise NotRealizable("topology")
    table = transport(q_walk, alpha, beta, tree)
    if tight is None:
        tight = tight_vertices(g, alpha)
    for v in sorted(tight):
        if table[v]:
            raise NotRealizable("tight", f"{v!r} lies on a tight closed walk but must move")
    order = _arrow_order(g, table)
    if order is None:
        raise NotRealizable("tight", "arrow relation has a cycle")
    seq = RecoloringSequence(start=dict(alpha), steps=tuple(_round_robin(order, table)))
    _self_check(inst, seq, table)
    return seq


def _self_check(inst: Instance, seq: RecoloringSequence, table: Mapping[str, Walk]) -> None:
    try:
        check_sequence(inst.g, inst.h, seq)
    except InvalidSequence as exc:
        raise InternalValidationFailure(f"emitted sequence is invalid: {exc}") from exc
    if seq.final() != dict(inst.beta):
        raise InternalValidationFailure("emitted sequence does not end in beta")
    walks = vertex_walks(inst.g, inst.h, seq)
    for v, walk in table.items():
        if walks[v] != walk:
            raise InternalValidationFailure(f"vertex walk of {v!r} differs from the table")


# ----------------------------------------------------------------------------
# families of realizable walks


def enumerate_realizable(inst: Instance, tree: TreeData | None = None) -> WalkFamily:
    g, h, alpha, beta = inst.g, inst.h, inst.alpha, inst.beta
    tree = tree or build_tree(g, inst.q)
    start, end = alpha[inst.q], beta[inst.q]
    witness = find_tight_walk(g, h, alpha)
    if witness is not None:
        if any(alpha[v] != beta[v] for v in witness.vertices):
            return WalkFamily.empty(start, end)
        pinned = tight_pinned_walk(witness, tree, alpha, beta)
        try:
            check_and_build(inst, pinned, tree)
        except NotRealizable:
            return WalkFamily.empty(start, end)
        return WalkFamily.single(pinned, start, end)
    return parity_filter(h, enumerate_valid_family(h, alpha, beta, tree))


def parity_filter(h: Graph, fam: WalkFamily) -> WalkFamily:
    """Keep the even-length members of a family of valid walks."""
    if fam.kind == "Empty":
        return fam
    if fam.kind == "Single":
        return fam if length(fam.walk) % 2 == 0 else WalkFamily.empty(fam.start, fam.end)
    if fam.kind == "AllReduced":
        if not even_walk_exists(h, fam.start, fam.end):
            return WalkFamily.empty(fam.start, fam.end)
        return WalkFamily("AllEvenReduced", fam.start, fam.end)
    assert fam.kind == "Coset"
    r_odd = core_length(fam.root) % 2 == 1
    p_odd = length(fam.walk) % 2 == 1
    if not r_odd:
        return WalkFamily.empty(fam.start, fam.end) if p_odd else fam
    p = gconcat(fam.root, fam.walk) if p_odd else fam.walk
    return WalkFamily.coset(fam.root, p, fam.start, fam.end, stride=2)


@dataclass
class Decision:
    reachable: bool
    family: WalkFamily
    sequence: RecoloringSequence | None = None
    q_walk: Walk | None = None


def _components_differ(inst: Instance) -> bool:
    comp = {v: i for i, c in enumerate(components(inst.h)) for v in c}
    return comp[inst.alpha[inst.q]] != comp[inst.beta[inst.q]]


def witness_walk(h: Graph, fam: WalkFamily) -> Walk | None:
    """A canonical member of a realizable family, or None if it is empty."""
    if fam.kind == "Empty":
        return None
    if fam.kind == "Single":
        return fam.walk
    if fam.kind == "Coset":
        return min((fam.member(0), fam.member(-1)), key=lambda w: (length(w), w))
    w = shortest_walk_with_parity(h, fam.start, fam.end, 0)
    if fam.kind == "AllReduced" and w is None:
        w = shortest_walk_with_parity(h, fam.start, fam.end, 1)
    return w


def decide_reachable(inst: Instance) -> Decision:
    start, end = inst.alpha[inst.q], inst.beta[inst.q]
    if _components_differ(inst):
        return Decision(False, WalkFamily.empty(start, end))
    tree = build_tree(inst.g, inst.q)
    fam = enumerate_realizable(inst, tree)
    q_walk = witness_walk(inst.h, fam)
    if q_walk is None:
        return Decision(False, fam)
    seq = check_and_build(inst, q_walk, tree)
    return Decision(True, fam, seq, q_walk)


# ----------------------------------------------------------------------------
# shortest sequences


def _coset_candidates(inst: Instance, tree: TreeData, fam: WalkFamily):
    """Members of a Coset family in order of |n|, stopping once a length
    lower bound on every further member exceeds the best cost seen."""
    if is_torsion(fam.root):
        yield from (fam.member(0), fam.member(1))
        return
    dec = cyclic_reduce(fam.root)
    r = length(dec.core) * fam.stride
    # |X_v · R0^k · Y_v| >= |k|·r - |X_v| - |Y_v|, X_v and Y_v fixed per v
    slack = 0
    for v in inst.g.vertices:
        path = tree.walk_to(v)
        a = reduce(map_walk(inst.alpha, path))
        b = reduce(map_walk(inst.beta, path))
        slack += length(a) + length(b) + 2 * length(dec.conjugator) + length(fam.walk)
    n_vertices = len(inst.g.vertices)
    minimum = 2 * n_vertices + length(fam.walk)
    best = None
    n = 0
    while True:
        lower = (n * r * n_vertices - slack) / 2
        if n > minimum and best is not None and lower > best:
            return
        for k in ((0,) if n == 0 else (-n, n)):
            x = fam.member(k)
            cost = yield x
            if cost is not None and (best is None or cost < best):
                best = cost
        n += 1


def _prefixes(w: Walk) -> list[Walk]:
    return [EPS] + [w[: i + 1] for i in range(1, len(w))]


def _all_even_candidates(inst: Instance, tree: TreeData) -> set[Walk]:
    """Candidate walks ``red(P1 · M · P2)`` for the unrestricted case."""
    h = inst.h
    start, end = inst.alpha[inst.q], inst.beta[inst.q]
    lefts: set[Walk] = set()
    rights: set[Walk] = set()
    for v in inst.g.vertices:
        path = tree.walk_to(v)
        lefts.update(_prefixes(reduce(map_walk(inst.alpha, path))))
        rights.update(ginverse(p) for p in _prefixes(reduce(map_walk(inst.beta, path))))

    @lru_cache(maxsize=None)
    def connector(a: str, b: str, parity: int):
        return shortest_walk_with_parity(h, a, b, parity)

    out = set()
    for p1 in lefts:
        tail = p1[-1] if p1 else start
        for p2 in rights:
            head = p2[0] if p2 else end
            for parity in (0, 1):
                m = connector(tail, head, parity)
                if m is None:
                    continue
                if not m and tail != head:
                    continue
                q_walk = gprod(p1, m, p2)
                if length(q_walk) % 2 == 0:
                    out.add(q_walk)
    return out


def shortest_sequence(inst: Instance) -> tuple[int, RecoloringSequence] | None:
    """Minimum number of steps from α to β and a sequence achieving it."""
    if _components_differ(inst):
        return None
    tree = build_tree(inst.g, inst.q)
    fam = enumerate_realizable(inst, tree)
    alpha, beta = inst.alpha, inst.beta

    def cost(w: Walk) -> int:
        return sequence_cost(w, alpha, beta, tree)

    if fam.kind == "Empty":
        return None
    if fam.kind == "Single":
        best = fam.walk
    elif fam.kind == "Coset":
        gen = _coset_candidates(inst, tree, fam)
        scored = []
        x = next(gen)
        while True:
            c = cost(x)
            scored.append((c, x))
            try:
                x = gen.send(c)
            except StopIteration:
                break
        best = min(scored)[1]
    else:
        assert fam.kind == "AllEvenReduced"
        best = min(_all_even_candidates(inst, tree), key=lambda w: (cost(w), w))
    seq = check_and_build(inst, best, tree)
    if len(seq) != cost(best):
        raise InternalValidationFailure("sequence length differs from its vertex-walk cost")
    return len(seq), seq
