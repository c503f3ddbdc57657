"""Reduced walks and the fundamental groupoid of a graph.

A walk is a tuple of vertices ``(v0, v1, ..., vk)``; the empty walk is ``()``
and is composable with anything.  A loop edge at ``v`` shows up as ``v, v``.
Backtracking means ``v[i-1] == v[i+1]``, which also covers traversing the
same loop twice in a row because a loop edge is its own inverse.

Loops make the groupoid non-free: a loop ``(a, a)`` has order two.  The
conjugacy and root machinery below handles those torsion elements
explicitly (their cyclic core is a single loop edge).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BasepointMismatch, EmptyWalk, EndpointMismatch, NotClosed

Walk = tuple  # tuple[str, ...]
EPS: Walk = ()


def reduce(w: Sequence[str]) -> Walk:
    stack: list[str] = []
    for v in w:
        if len(stack) >= 2 and stack[-2] == v:
            stack.pop()
        else:
            stack.append(v)
    return tuple(stack) if len(stack) > 1 else EPS


def is_reduced(w: Sequence[str]) -> bool:
    return len(w) != 1 and all(w[i - 1] != w[i + 1] for i in range(1, len(w) - 1))


def length(w: Sequence[str]) -> int:
    return max(len(w) - 1, 0)


def is_closed(w: Sequence[str]) -> bool:
    return not w or w[0] == w[-1]


def concat(x: Sequence[str], y: Sequence[str]) -> Walk:
    """Plain (unreduced) concatenation; ``()`` glues to anything."""
    if not x:
        return tuple(y)
    if not y:
        return tuple(x)
    if x[-1] != y[0]:
        raise EndpointMismatch(f"walk ending at {x[-1]!r} cannot continue from {y[0]!r}")
    return tuple(x) + tuple(y[1:])


def gconcat(x: Walk, y: Walk) -> Walk:
    """Groupoid product ``x · y``: reduce the concatenation."""
    if not x:
        return y
    if not y:
        return x
    if x[-1] != y[0]:
        raise EndpointMismatch(f"walk ending at {x[-1]!r} cannot continue from {y[0]!r}")
    # x and y are already reduced, so cancellation only happens at the seam.
    i = 0
    n, m = len(x), len(y)
    while i + 1 < n and i + 1 < m and x[n - 2 - i] == y[i + 1]:
        i += 1
    return reduce(x[: n - i] + y[i + 1:]) if i else x + y[1:]


def gprod(*walks: Walk) -> Walk:
    out = EPS
    for w in walks:
        out = gconcat(out, w)
    return out


def ginverse(x: Walk) -> Walk:
    return tuple(reversed(x))


def gpower(r: Walk, n: int) -> Walk:
    if n == 0 or not r:
        return EPS
    if n < 0:
        r, n = ginverse(r), -n
    if n == 1:
        return r
    if r[0] != r[-1]:
        raise NotClosed("only closed walks have powers beyond +-1")
    out = EPS
    base = r
    # square-and-multiply; gconcat is associative
    while n:
        if n & 1:
            out = gconcat(out, base)
        n >>= 1
        if n:
            base = gconcat(base, base)
    return out


def map_walk(sigma: Mapping[str, str], w: Sequence[str]) -> Walk:
    return tuple(sigma[v] for v in w) if len(w) > 1 else EPS


@dataclass(frozen=True)
class CyclicDecomposition:
    """``original == gprod(ginverse(conjugator), core, conjugator)``."""

    conjugator: Walk
    core: Walk


def is_cyclically_reduced(c: Walk) -> bool:
    """Reduced, closed, and not backtracking across the wraparound.

    A single loop edge ``(a, a)`` is treated as cyclically reduced: it is the
    shortest element of its conjugacy class even though the edge is its own
    inverse.
    """
    if not c:
        return True
    if c[0] != c[-1] or not is_reduced(c):
        return False
    return len(c) == 2 or c[1] != c[-2]


def cyclic_reduce(c: Walk) -> CyclicDecomposition:
    if not is_closed(c):
        raise NotClosed("cyclic reduction needs a closed walk")
    c = reduce(c)
    k = 0
    # peel matching first/last edges while the remainder is still a walk
    while len(c) - 2 * k >= 4 and c[1 + k] == c[-2 - k]:
        k += 1
    core = c[k: len(c) - k]
    conj = ginverse(c[: k + 1]) if k else EPS
    return CyclicDecomposition(conjugator=conj, core=core)


def _smallest_period(seq: Sequence[str]) -> int:
    """Smallest p with seq[i] == seq[i+p] for all i (KMP border array)."""
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    return n - fail[-1] if n else 0


def primitive_root(c: Walk) -> tuple[Walk, int]:
    """``(R, n)`` with ``c == gpower(R, n)`` and ``n`` maximal.

    For a torsion element (conjugate of a loop) the answer is ``(c, 1)``.
    """
    if not c:
        raise EmptyWalk("the empty walk has no primitive root")
    if not is_closed(c):
        raise NotClosed("only closed walks have primitive roots")
    dec = cyclic_reduce(c)
    core = dec.core
    edges = len(core) - 1
    if edges == 1:
        return c, 1
    # period over the cyclic vertex sequence v0..v_{k-1} (v_k == v0)
    p = _smallest_period(core[:-1])
    if edges % p:
        p = edges
    root_core = core[: p + 1]
    root = gprod(ginverse(dec.conjugator), root_core, dec.conjugator)
    return root, edges // p


def core_length(r: Walk) -> int:
    return length(cyclic_reduce(r).core)


def is_torsion(r: Walk) -> bool:
    """True for the non-trivial elements of order two (conjugates of loops)."""
    return bool(r) and core_length(r) == 1


def _basepoint(c: Walk) -> str | None:
    return c[0] if c else None


def commutes_by_product(c1: Walk, c2: Walk) -> bool:
    return gconcat(c1, c2) == gconcat(c2, c1)


def commutes_by_roots(c1: Walk, c2: Walk) -> bool:
    if not c1 or not c2:
        return True
    r1, _ = primitive_root(c1)
    r2, _ = primitive_root(c2)
    return r1 == r2 or r1 == ginverse(r2)


def commutes(c1: Walk, c2: Walk) -> bool:
    for c in (c1, c2):
        if not is_closed(c):
            raise NotClosed("commutation is defined for closed walks")
    b1, b2 = _basepoint(c1), _basepoint(c2)
    if b1 is not None and b2 is not None and b1 != b2:
        raise BasepointMismatch(f"closed at {b1!r} and {b2!r}")
    by_product = commutes_by_product(c1, c2)
    assert by_product == commutes_by_roots(c1, c2), (c1, c2)
    return by_product


def canonical_root(r: Walk) -> Walk:
    """Pick between ``r`` and its inverse: the lexicographically smaller."""
    inv = ginverse(r)
    return min(r, inv)


# ----------------------------------------------------------------------------
# walk families


@dataclass(frozen=True)
class WalkFamily:
    """A possibly infinite set of reduced walks from ``start`` to ``end``.

    ``kind`` is one of ``Empty``, ``Single``, ``Coset``, ``AllReduced``,
    ``AllEvenReduced``.  A Coset stands for ``{R^(stride*n) · P | n in Z}``
    with ``R`` primitive and closed at ``start``; ``stride`` is 1 or 2.
    """

    kind: str
    start: str
    end: str
    walk: Walk = EPS  # the Q of Single, the P of Coset
    root: Walk = EPS
    stride: int = 1

    KINDS = ("Empty", "Single", "Coset", "AllReduced", "AllEvenReduced")

    def __post_init__(self):
        assert self.kind in self.KINDS, self.kind
        if self.kind in ("Single", "Coset"):
            _check_endpoints(self.walk, self.start, self.end)
        if self.kind == "Coset":
            assert self.root and self.root[0] == self.root[-1] == self.start
            assert self.stride in (1, 2)

    @classmethod
    def empty(cls, start: str, end: str) -> "WalkFamily":
        return cls("Empty", start, end)

    @classmethod
    def single(cls, q: Walk, start: str, end: str) -> "WalkFamily":
        return cls("Single", start, end, walk=q)

    @classmethod
    def coset(cls, root: Walk, p: Walk, start: str, end: str, stride: int = 1) -> "WalkFamily":
        root = canonical_root(root)
        if is_torsion(root) and stride == 2:
            return cls.single(p, start, end)
        return cls("Coset", start, end, walk=p, root=root, stride=stride)

    @property
    def is_empty(self) -> bool:
        return self.kind == "Empty"

    def member(self, n: int = 0) -> Walk:
        """The n-th member of a Coset (``n == 0`` is the base walk)."""
        if self.kind == "Single":
            return self.walk
        if self.kind == "Coset":
            return gconcat(gpower(self.root, self.stride * n), self.walk)
        raise ValueError(f"member() is not defined for {self.kind}")

    def coset_exponent(self, x: Walk) -> int | None:
        """``n`` with ``x == member(n)`` for a Coset, else None."""
        assert self.kind == "Coset"
        try:
            d = gconcat(x, ginverse(self.walk))
        except EndpointMismatch:
            return None
        if not d:
            return 0
        if not is_closed(d) or d[0] != self.start:
            return None
        if not commutes_by_product(d, self.root):
            return None
        if is_torsion(self.root):
            k = 1 if d == self.root else None
        else:
            droot, n = primitive_root(d)
            if droot == self.root:
                k = n
            elif droot == ginverse(self.root):
                k = -n
            else:
                return None
        if k is None or k % self.stride:
            return None
        return k // self.stride

    def contains(self, x: Walk, h=None) -> bool:
        """Membership; ``h`` (the target graph) is consulted only to check
        that ``x`` is a genuine walk for the AllReduced kinds."""
        if not is_reduced(x) and x != EPS:
            return False
        if not _has_endpoints(x, self.start, self.end):
            return False
        if h is not None and any(not h.has_edge(a, b) for a, b in zip(x, x[1:])):
            return False
        if self.kind == "Empty":
            return False
        if self.kind == "Single":
            return x == self.walk
        if self.kind == "Coset":
            return self.coset_exponent(x) is not None
        if self.kind == "AllReduced":
            return True
        return length(x) % 2 == 0

    def members_upto(self, max_len: int, h=None) -> set[Walk]:
        """All members of length at most ``max_len``.

        The AllReduced kinds need ``h`` to enumerate reduced walks.
        """
        if self.kind == "Empty":
            return set()
        if self.kind == "Single":
            return {self.walk} if length(self.walk) <= max_len else set()
        if self.kind == "Coset":
            out = set()
            if is_torsion(self.root):
                for n in (0, 1):
                    x = self.member(n)
                    if length(x) <= max_len:
                        out.add(x)
                return out
            r = core_length(self.root) * self.stride
            slack = length(self.walk) + length(self.root)
            bound = (max_len + slack) // r + 1
            for n in range(-bound, bound + 1):
                x = self.member(n)
                if length(x) <= max_len:
                    out.add(x)
            return out
        if h is None:
            raise ValueError("enumerating all reduced walks needs the graph")
        even = self.kind == "AllEvenReduced"
        return {
            w for w in reduced_walks(h, self.start, max_len)
            if _has_endpoints(w, self.start, self.end) and (not even or length(w) % 2 == 0)
        }

    def describe(self) -> str:
        if self.kind == "Single":
            return f"Single{{Q={_fmt(self.walk)}}}"
        if self.kind == "Coset":
            power = "n" if self.stride == 1 else "2n"
            return f"Coset{{R^{power}·P | R={_fmt(self.root)}, P={_fmt(self.walk)}}}"
        return self.kind

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "from": self.start, "to": self.end}
        if self.kind == "Single":
            out["Q"] = list(self.walk)
        if self.kind == "Coset":
            out["R"] = list(self.root)
            out["P"] = list(self.walk)
            out["stride"] = self.stride
        return out


def _fmt(w: Walk) -> str:
    return "ε" if not w else "[" + ",".join(w) + "]"


def _has_endpoints(w: Walk, start: str, end: str) -> bool:
    if not w:
        return start == end
    return w[0] == start and w[-1] == end


def _check_endpoints(w: Walk, start: str, end: str) -> None:
    if not _has_endpoints(w, start, end):
        raise EndpointMismatch(f"walk {_fmt(w)} does not run from {start!r} to {end!r}")


def reduced_walks(h, start: str, max_len: int) -> Iterator[Walk]:
    """Every reduced walk in ``h`` from ``start`` of length <= max_len,
    including the empty walk."""
    yield EPS
    stack = [(start,)]
    while stack:
        w = stack.pop()
        if len(w) > 1:
            yield w
        if len(w) - 1 >= max_len:
            continue
        for nxt in sorted(h.adjacency[w[-1]], reverse=True):
            if len(w) >= 2 and w[-2] == nxt:
                continue
            stack.append(w + (nxt,))


# ----------------------------------------------------------------------------
# conjugacy


def conjugate(q: Walk, a: Walk) -> Walk:
    """``q^-1 · a · q``."""
    return gprod(ginverse(q), a, q)


def _rotation_offset(core_a: Walk, core_b: Walk) -> int | None:
    """Smallest s >= 0 with core_b equal to core_a rotated to start at v_s."""
    ka, kb = len(core_a) - 1, len(core_b) - 1
    if ka != kb:
        return None
    if ka == 1:
        return 0 if core_a == core_b else None
    a, b = list(core_a[:-1]), list(core_b[:-1])
    doubled = a + a
    # KMP search of b in doubled a
    fail = [0] * ka
    k = 0
    for i in range(1, ka):
        while k and b[i] != b[k]:
            k = fail[k - 1]
        if b[i] == b[k]:
            k += 1
        fail[i] = k
    k = 0
    for i, ch in enumerate(doubled):
        while k and ch != b[k]:
            k = fail[k - 1]
        if ch == b[k]:
            k += 1
        if k == ka:
            return i - ka + 1
    return None


def solve_conjugacy_single(a: Walk, b: Walk, start: str, end: str) -> WalkFamily:
    """All reduced ``Q`` from ``start`` to ``end`` with ``b == Q^-1 · a · Q``."""
    for w, base in ((a, start), (b, end)):
        if w and (w[0] != base or w[-1] != base):
            raise BasepointMismatch(f"{_fmt(w)} is not closed at {base!r}")
    if not a or not b:
        return WalkFamily("AllReduced", start, end) if a == b else WalkFamily.empty(start, end)
    da, db = cyclic_reduce(a), cyclic_reduce(b)
    s = _rotation_offset(da.core, db.core)
    if s is None:
        return WalkFamily.empty(start, end)
    t = da.core[: s + 1] if s else EPS
    q0 = gprod(ginverse(da.conjugator), t, db.conjugator)
    assert conjugate(q0, a) == b
    root, _ = primitive_root(a)
    return WalkFamily.coset(root, q0, start, end)


def _power_scan_bound(root: Walk, a: Walk, b: Walk) -> int:
    """How far to scan n when looking for ``root^-n · a · root^n == b``.

    With ``root = U^-1 · R0 · U`` (R0 cyclically reduced of length r) and
    ``a`` not commuting with ``root``, every |n| above this bound gives a
    conjugate longer than ``b``.
    """
    dec = cyclic_reduce(root)
    u = dec.conjugator
    r = length(dec.core)
    a2 = gprod(u, a, ginverse(u))
    b2 = gprod(u, b, ginverse(u))
    la, lb = length(a2), length(b2)
    return max(la // r + 1, (lb + 2 * la) // (2 * r) + 2) + 1


def _restrict(fam: WalkFamily, a: Walk, b: Walk) -> WalkFamily:
    """Members of ``fam`` that also satisfy ``b == Q^-1 · a · Q``."""
    if fam.kind == "Empty":
        return fam
    if fam.kind == "AllReduced":
        return solve_conjugacy_single(a, b, fam.start, fam.end)
    if fam.kind == "Single":
        return fam if conjugate(fam.walk, a) == b else WalkFamily.empty(fam.start, fam.end)
    assert fam.kind == "Coset" and fam.stride == 1
    if commutes_by_product(a, fam.root):
        return fam if conjugate(fam.walk, a) == b else WalkFamily.empty(fam.start, fam.end)
    if is_torsion(fam.root):
        candidates = [0, 1]
    else:
        target = gprod(fam.walk, b, ginverse(fam.walk))
        bound = _power_scan_bound(fam.root, a, target)
        candidates = sorted(range(-bound, bound + 1), key=lambda n: (abs(n), n))
    hits = [x for x in map(fam.member, candidates) if conjugate(x, a) == b]
    if not hits:
        return WalkFamily.empty(fam.start, fam.end)
    assert len(set(hits)) == 1, hits
    return WalkFamily.single(hits[0], fam.start, fam.end)


def solve_conjugacy_simultaneous(
    pairs: Iterable[tuple[Walk, Walk]], start: str, end: str
) -> WalkFamily:
    """Reduced ``Q`` with ``b_i == Q^-1 · a_i · Q`` for every pair.

    Equations are folded in one at a time: the first nontrivial one yields a
    coset of the centralizer, and each later one either keeps the coset
    (when its left side commutes with the root), or pins at most one member.
    """
    fam = WalkFamily("AllReduced", start, end)
    for a, b in pairs:
        fam = _restrict(fam, a, b)
        if fam.is_empty:
            break
    return fam
