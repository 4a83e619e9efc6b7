"""Finite strict partial orders on ``1..n`` stored as bitmask rows.

Element ``x`` corresponds to bit ``x`` of a Python int, so ``P.up[x]`` is the
set of elements strictly above ``x``.  Index 0 of every row tuple is unused.

Total orders are plain tuples of labels (smallest first); a realiser is a
sequence of such tuples.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


class CycleError(ValueError):
    """Raised when the arcs handed to :func:`from_dag` contain a directed cycle."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    n: int
    up: tuple[int, ...]

    def __post_init__(self):
        if len(self.up) != self.n + 1:
            raise ValueError("row tuple must have length n + 1")

    @cached_property
    def down(self) -> tuple[int, ...]:
        rows = [0] * (self.n + 1)
        for x in range(1, self.n + 1):
            bx = 1 << x
            for y in bits(self.up[x]):
                rows[y] |= bx
        return tuple(rows)

    @cached_property
    def full_mask(self) -> int:
        return ((1 << (self.n + 1)) - 1) ^ 1

    @property
    def elements(self) -> range:
        return range(1, self.n + 1)

    def less(self, x: int, y: int) -> bool:
        """``x <_P y``."""
        return bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or self.less(x, y) or self.less(y, x)

    def relations(self) -> list[tuple[int, int]]:
        return [(x, y) for x in self.elements for y in bits(self.up[x])]

    def num_relations(self) -> int:
        return sum(popcount(r) for r in self.up)

    def to_matrix(self) -> np.ndarray:
        """Dense 0-indexed boolean matrix ``M[x-1, y-1] = x <_P y``."""
        m = np.zeros((self.n, self.n), dtype=bool)
        for x, y in self.relations():
            m[x - 1, y - 1] = True
        return m

    def check(self) -> None:
        """Assert the strict partial order axioms (used by tests)."""
        for x in self.elements:
            if self.up[x] >> x & 1:
                raise AssertionError(f"reflexive at {x}")
            for y in bits(self.up[x]):
                if self.up[y] >> x & 1:
                    raise AssertionError(f"not antisymmetric at {x},{y}")
                if self.up[y] & ~self.up[x]:
                    raise AssertionError(f"not transitive at {x},{y}")

    @classmethod
    def chain(cls, n: int) -> Poset:
        return from_dag(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def antichain(cls, n: int) -> Poset:
        return cls(n, (0,) * (n + 1))


def _check_label(n: int, x: int) -> None:
    if not 1 <= x <= n:
        raise IndexError(f"element {x} out of range 1..{n}")


def from_dag(n: int, arcs: Iterable[tuple[int, int]]) -> Poset:
    """Transitive closure of an acyclic arc set on ``1..n``."""
    out: list[list[int]] = [[] for _ in range(n + 1)]
    indeg = [0] * (n + 1)
    for u, v in arcs:
        _check_label(n, u)
        _check_label(n, v)
        if u == v:
            raise CycleError(f"loop at {u}")
        out[u].append(v)
        indeg[v] += 1
    order = []
    queue = deque(x for x in range(1, n + 1) if indeg[x] == 0)
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(order) != n:
        raise CycleError("arc digraph contains a directed cycle")
    up = [0] * (n + 1)
    for x in reversed(order):
        m = 0
        for y in out[x]:
            m |= up[y] | (1 << y)
        up[x] = m
    return Poset(n, tuple(up))


def from_matrix(m: np.ndarray) -> Poset:
    """Close a 0-indexed boolean arc matrix."""
    src, dst = np.nonzero(m)
    return from_dag(m.shape[0], zip((src + 1).tolist(), (dst + 1).tolist()))


def up_set(P: Poset, S: Iterable[int], closed: bool = True) -> frozenset[int]:
    """``U_P[S]``; with ``closed=False`` the elements of ``S`` are removed."""
    return _reach(P, S, P.up, closed)


def down_set(P: Poset, S: Iterable[int], closed: bool = True) -> frozenset[int]:
    return _reach(P, S, P.down, closed)


def _reach(P: Poset, S: Iterable[int], rows: tuple[int, ...], closed: bool) -> frozenset[int]:
    s = 0
    m = 0
    for x in S:
        _check_label(P.n, x)
        s |= 1 << x
        m |= rows[x]
    m |= s
    if not closed:
        m &= ~s
    return frozenset(bits(m))


def up_mask(P: Poset, mask: int) -> int:
    m = mask
    for x in bits(mask):
        m |= P.up[x]
    return m


def down_mask(P: Poset, mask: int) -> int:
    m = mask
    for x in bits(mask):
        m |= P.down[x]
    return m


def dual(P: Poset) -> Poset:
    return Poset(P.n, P.down)


def induced(P: Poset, S: Iterable[int]) -> tuple[Poset, tuple[int, ...]]:
    """Suborder on ``S`` relabelled ``1..|S|`` in increasing label order.

    Returns the suborder and ``labels`` with ``labels[i - 1]`` the original
    label of new element ``i``.
    """
    labels = tuple(sorted(set(S)))
    if not labels:
        raise ValueError("induced suborder of an empty set")
    for x in labels:
        _check_label(P.n, x)
    index = {x: i for i, x in enumerate(labels, start=1)}
    smask = to_mask(labels)
    up = [0]
    for x in labels:
        up.append(to_mask(index[y] for y in bits(P.up[x] & smask)))
    return Poset(len(labels), tuple(up)), labels


def lift(order: Sequence[int], labels: Sequence[int]) -> tuple[int, ...]:
    """Map a total order of an induced suborder back to original labels."""
    return tuple(labels[i - 1] for i in order)


def cover_relations(P: Poset) -> list[tuple[int, int]]:
    """Arcs ``(x, y)`` of the Hasse diagram, oriented from smaller to larger."""
    arcs = []
    for x in P.elements:
        above = P.up[x]
        covered = 0
        for y in bits(above):
            covered |= P.up[y]
        arcs.extend((x, y) for y in bits(above & ~covered))
    return arcs


def cover_graph(P: Poset) -> dict[int, set[int]]:
    """Undirected cover graph as an adjacency dict; see :func:`cover_relations` for orientation."""
    adj: dict[int, set[int]] = {x: set() for x in P.elements}
    for x, y in cover_relations(P):
        adj[x].add(y)
        adj[y].add(x)
    return adj


def comparability_graph(P: Poset) -> dict[int, set[int]]:
    return {x: set(bits(P.up[x] | P.down[x])) for x in P.elements}


def width(P: Poset) -> int:
    """Largest antichain size, via a minimum chain cover (Dilworth / König)."""
    if P.n == 0:
        return 0
    rel = P.relations()
    if not rel:
        return P.n
    rows = np.fromiter((x - 1 for x, _ in rel), dtype=np.int64, count=len(rel))
    cols = np.fromiter((y - 1 for _, y in rel), dtype=np.int64, count=len(rel))
    graph = csr_matrix((np.ones(len(rel), dtype=np.int8), (rows, cols)), shape=(P.n, P.n))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return P.n - int(np.count_nonzero(match >= 0))


def width_brute_force(P: Poset) -> int:
    """Exponential reference implementation of :func:`width`."""
    best = 1 if P.n else 0
    comp = [P.up[x] | P.down[x] for x in range(P.n + 1)]
    for k in range(2, P.n + 1):
        found = False
        for sub in combinations(P.elements, k):
            m = to_mask(sub)
            if all(not comp[x] & m for x in sub):
                found = True
                break
        if not found:
            break
        best = k
    return best


def _check_order(L: Sequence[int], n: int) -> None:
    if len(L) != n or sorted(L) != list(range(1, n + 1)):
        raise ValueError(f"order is not a permutation of 1..{n}")


def is_linear_extension(L: Sequence[int], P: Poset) -> bool:
    _check_order(L, P.n)
    seen = 0
    for x in L:
        if P.down[x] & ~seen:
            return False
        seen |= 1 << x
    return True


def is_realiser(R: Sequence[Sequence[int]], P: Poset) -> bool:
    """True iff every order extends ``P`` and the orders intersect to ``P``."""
    if not R:
        raise ValueError("empty realiser")
    for L in R:
        if not is_linear_extension(L, P):
            return False
    if P.n <= 1:
        return True
    # earlier[x]: elements placed before x in at least one order
    earlier = [0] * (P.n + 1)
    for L in R:
        seen = 0
        for x in L:
            earlier[x] |= seen
            seen |= 1 << x
    for x in P.elements:
        # each y incomparable to x must precede x in some order
        incomparable = P.full_mask & ~(P.up[x] | P.down[x] | (1 << x))
        if incomparable & ~earlier[x]:
            return False
    return True


def is_realiser_brute_force(R: Sequence[Sequence[int]], P: Poset) -> bool:
    """Definition check: the intersection of the orders equals ``P``."""
    if not R:
        raise ValueError("empty realiser")
    for L in R:
        _check_order(L, P.n)
    pos = [{x: i for i, x in enumerate(L)} for L in R]
    for x in P.elements:
        for y in P.elements:
            if x == y:
                continue
            in_all = all(p[x] < p[y] for p in pos)
            if in_all != P.less(x, y):
                return False
    return True


# ---------------------------------------------------------------- graphs

@dataclass(frozen=True)
class ComponentClass:
    tag: str
    vertices: int
    edges: int
    bicyclic_profile: bool | None = None


def connected_components(adj: dict[int, set[int]]) -> list[frozenset[int]]:
    seen: set[int] = set()
    comps = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def _two_core(adj: dict[int, set[int]], comp: frozenset[int]) -> dict[int, set[int]]:
    core = {v: set(adj[v]) & comp for v in comp}
    leaves = [v for v, nb in core.items() if len(nb) <= 1]
    while leaves:
        v = leaves.pop()
        if v not in core:
            continue
        for w in core.pop(v):
            core[w].discard(v)
            if len(core[w]) == 1:
                leaves.append(w)
    return core


def classify_component(adj: dict[int, set[int]], component: Iterable[int]) -> ComponentClass:
    """Tag a connected vertex set of ``adj`` by its edge surplus over a tree.

    For bicyclic components the degree profile of the 2-core is reported: two
    vertices of degree three or one of degree four, all others degree two.
    """
    comp = frozenset(component)
    if not comp:
        raise ValueError("empty component")
    reached = {next(iter(comp))}
    stack = list(reached)
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in comp and w not in reached:
                reached.add(w)
                stack.append(w)
    if reached != comp:
        raise ValueError("component is not connected")
    nv = len(comp)
    ne = sum(len(adj[v] & comp) for v in comp) // 2
    surplus = ne - nv
    if surplus == -1:
        return ComponentClass("tree", nv, ne)
    if surplus == 0:
        return ComponentClass("unicyclic", nv, ne)
    if surplus == 1:
        degs = sorted(len(nb) for nb in _two_core(adj, comp).values())
        big = [d for d in degs if d != 2]
        return ComponentClass("bicyclic", nv, ne, big in ([3, 3], [4]))
    return ComponentClass("multicyclic", nv, ne)


# ---------------------------------------------------------------- text IO

def format_poset(P: Poset, relations: bool = False) -> str:
    """Serialise as ``n <count>`` followed by one arc per line.

    Cover arcs are written by default; the reader re-closes them.
    """
    arcs = P.relations() if relations else cover_relations(P)
    lines = [f"n {P.n}"] + [f"{x} {y}" for x, y in sorted(arcs)]
    return "\n".join(lines) + "\n"


def parse_poset(text: str) -> Poset:
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith("#")]
    if not lines or lines[0][0] != "n" or len(lines[0]) != 2:
        raise ValueError("poset file must start with 'n <count>'")
    n = int(lines[0][1])
    arcs = []
    for ln in lines[1:]:
        if len(ln) != 2:
            raise ValueError(f"bad arc line: {' '.join(ln)!r}")
        arcs.append((int(ln[0]), int(ln[1])))
    return from_dag(n, arcs)


def read_poset(path: str | Path) -> Poset:
    return parse_poset(Path(path).read_text())


def write_poset(P: Poset, path: str | Path, relations: bool = False) -> None:
    Path(path).write_text(format_poset(P, relations))


def format_realiser(R: Sequence[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, L)) + "\n" for L in R)


def parse_realiser(text: str) -> list[tuple[int, ...]]:
    return [tuple(int(t) for t in ln.split()) for ln in text.splitlines() if ln.strip()]


def read_realiser(path: str | Path) -> list[tuple[int, ...]]:
    return parse_realiser(Path(path).read_text())


def write_realiser(R: Sequence[Sequence[int]], path: str | Path) -> None:
    Path(path).write_text(format_realiser(R))


def format_edges(edges: Iterable[tuple[int, int]]) -> str:
    return "".join(f"{u} {v}\n" for u, v in edges)


def parse_set(text: str) -> frozenset[int]:
    return frozenset(int(t) for ln in text.splitlines() for t in ln.split())
