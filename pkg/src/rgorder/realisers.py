"""Realiser constructions from order decompositions.

Every construction assembles a family of total orders block by block, checks
the hook condition (for each ``x`` not below ``y`` some order puts ``y``
ahead of all of ``U[x]``), and turns the family into linear extensions with
the left-shift transform.  Outputs are verified with ``is_realiser`` before
they are returned.

All realisers here are written in the labels of the ambient poset, so a
realiser of ``P[S]`` is a list of orderings of ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .dimension import DEFAULT_KMAX, realiser_of, sub_realiser
from .poset import (
    Poset,
    bits,
    classify_component,
    connected_components,
    cover_graph,
    down_set,
    dual,
    induced,
    is_realiser,
    lift,
    to_mask,
    up_set,
)
from .random_orders import BipartiteOrder

Order = tuple[int, ...]


class HookConditionError(ValueError):
    def __init__(self, x: int, y: int):
        super().__init__(f"no order puts {y} ahead of U[{x}]")
        self.pair = (x, y)


class PreconditionError(ValueError):
    pass


class SubRealiserError(ValueError):
    pass


def _check_family(P: Poset, F: Sequence[Sequence[int]]) -> None:
    if not F:
        raise ValueError("empty order family")
    target = list(P.elements)
    for L in F:
        if sorted(L) != target:
            raise ValueError(f"order is not a permutation of 1..{P.n}")


def check_hook_condition(P: Poset, F: Sequence[Sequence[int]]) -> tuple[bool, tuple[int, int] | None]:
    """Check the hook condition exhaustively.

    Returns ``(True, None)`` or ``(False, (x, y))`` for the first violating
    pair in lexicographic order.
    """
    _check_family(P, F)
    n = P.n
    # prefix[L][i]: mask of the first i elements of L
    prefixes = []
    positions = []
    for L in F:
        pre = [0] * (n + 1)
        pos = [0] * (n + 1)
        for i, x in enumerate(L):
            pre[i + 1] = pre[i] | (1 << x)
            pos[x] = i
        prefixes.append(pre)
        positions.append(pos)
    for x in P.elements:
        ux = P.up[x] | (1 << x)
        covered = 0
        for pre, pos in zip(prefixes, positions):
            first = min(pos[u] for u in bits(ux))
            covered |= pre[first]
        missing = P.full_mask & ~ux & ~covered
        if missing:
            return False, (x, (missing & -missing).bit_length() - 1)
    return True, None


def base_extension(P: Poset) -> Order:
    """Smallest-label-first linear extension, used to break ties."""
    placed = 0
    order = []
    remaining = list(P.elements)
    while remaining:
        for i, x in enumerate(remaining):
            if not P.down[x] & ~placed:
                order.append(x)
                placed |= 1 << x
                del remaining[i]
                break
    return tuple(order)


def leftshift_realiser(P: Poset, F: Sequence[Sequence[int]], base: Sequence[int] | None = None) -> list[Order]:
    """Turn a hook family into a realiser of the same size.

    Each order ``L`` is replaced by the sort on (position in ``L`` of the
    first element of ``U[x]``, position in ``base``).  The key is monotone
    along ``P`` and ``base`` is a linear extension, so the result extends
    ``P``; a hook ``y <_L U[x]`` survives as ``y`` before ``x``.
    """
    ok, bad = check_hook_condition(P, F)
    if not ok:
        raise HookConditionError(*bad)
    base = tuple(base) if base is not None else base_extension(P)
    tie = {x: i for i, x in enumerate(base)}
    out = []
    for L in F:
        pos = {x: i for i, x in enumerate(L)}
        key = {x: min(pos[u] for u in bits(P.up[x] | (1 << x))) for x in P.elements}
        out.append(tuple(sorted(P.elements, key=lambda x: (key[x], tie[x]))))
    return out


# ---------------------------------------------------------------- helpers

def restrict(L: Iterable[int], S) -> Order:
    return tuple(x for x in L if x in S)


def concat(ground: Iterable[int], *blocks: Iterable[int]) -> Order:
    """Blocks in sequence, keeping only the first occurrence of each element."""
    seen = set()
    out = []
    for block in blocks:
        for x in block:
            if x not in seen:
                seen.add(x)
                out.append(x)
    if seen != set(ground) or len(out) != len(seen):
        raise ValueError("blocks do not cover the ground set exactly")
    return tuple(out)


def _check_sub(P: Poset, S, R: Sequence[Sequence[int]], name: str) -> None:
    S = frozenset(S)
    if not R:
        raise SubRealiserError(f"{name}: empty realiser")
    for L in R:
        if frozenset(L) != S or len(L) != len(S):
            raise SubRealiserError(f"{name}: order does not list the suborder's elements")
    if not S:
        return
    sub, labels = induced(P, S)
    index = {x: i for i, x in enumerate(labels, start=1)}
    if not is_realiser([tuple(index[x] for x in L) for L in R], sub):
        raise SubRealiserError(f"{name}: not a realiser of the suborder")


def _finalise(P: Poset, ground, family: list[Order]) -> list[Order]:
    """Hook check and left-shift on ``P[ground]``; result in ``P``'s labels."""
    sub, labels = induced(P, ground)
    index = {x: i for i, x in enumerate(labels, start=1)}
    local = [tuple(index[x] for x in L) for L in family]
    out = [lift(L, labels) for L in leftshift_realiser(sub, local)]
    if not is_realiser([tuple(index[x] for x in L) for L in out], sub):  # pragma: no cover
        raise RuntimeError("construction produced an invalid realiser")
    return out


IDENTITY: Callable[[Iterable[int]], Order] = lambda S: tuple(sorted(S))  # noqa: E731


# ---------------------------------------------------------------- bipartite split

def bipartite_split(order: BipartiteOrder, S_A, R1: Sequence[Sequence[int]], R2: Sequence[Sequence[int]]) -> list[Order]:
    """Realiser of size ``|R1| + |R2|`` from realisers of ``P[U[S_A]]`` and ``P[A u B - S_A]``.

    Order ``j`` of part ``i`` is ``L^|(A - A_i)``, then ``L^|(B - B_i)``, then
    ``R_i[j]``; ``A_1 = S_A``, ``A_2 = A - S_A``, ``B_i = U(A_i)`` and ``L^``
    is the identity.  Elements lying both in a head block and in the ground
    set of ``R_i`` are placed by ``R_i[j]``: ordering them by ``L^`` instead
    fails for elements of ``B`` with nothing below them.
    """
    P = order.poset
    S_A = frozenset(S_A)
    if not S_A <= order.A:
        raise PreconditionError("S_A must be a subset of A")
    A, B = order.A, order.B
    V = frozenset(P.elements)
    P1 = up_set(P, S_A)
    P2 = V - S_A
    _check_sub(P, P1, R1, "R1")
    _check_sub(P, P2, R2, "R2")
    A_parts = (S_A, A - S_A)
    B_parts = (up_set(P, S_A, closed=False), up_set(P, A - S_A, closed=False))
    family = []
    for A_i, B_i, ground, R in zip(A_parts, B_parts, (P1, P2), (R1, R2)):
        # elements of the sub-realiser's ground set keep its order
        head = IDENTITY((A - A_i) - ground) + IDENTITY((B - B_i) - ground)
        family.extend(concat(V, head, L) for L in R)
    return _finalise(P, V, family)


def bipartite_split_dual(order: BipartiteOrder, S_B, R1: Sequence[Sequence[int]], R2: Sequence[Sequence[int]]) -> list[Order]:
    """Same bound with ``S_B`` in the upper part: ``R1`` realises ``P[D[S_B]]``."""
    S_B = frozenset(S_B)
    if not S_B <= order.B:
        raise PreconditionError("S_B must be a subset of B")
    flipped = BipartiteOrder(dual(order.poset), order.B, order.A)
    rev = lambda R: [tuple(reversed(L)) for L in R]  # noqa: E731
    return rev(bipartite_split(flipped, S_B, rev(R1), rev(R2)))


# ---------------------------------------------------------------- general split

def _split_sets(P: Poset, S):
    S = frozenset(S)
    for x in S:
        if not 1 <= x <= P.n:
            raise PreconditionError(f"element {x} out of range")
    U = up_set(P, S) - S if S else frozenset()
    D = down_set(P, S) - S if S else frozenset()
    return S, U, D


def general_split_first(P: Poset, S, R1: Sequence[Sequence[int]], R2: Sequence[Sequence[int]]) -> list[Order]:
    """Realiser of ``P`` of size ``2(|R1| + |R2|)``.

    ``R1`` realises ``P[D[S] u U[S]]`` and ``R2`` realises ``P[V - S]``.  With
    ``W`` the elements incomparable to all of ``S`` the family is
    ``R2[0]|W + R1[j]``, ``R1[j] + R2[0]|W``, ``R1[0]|S + R2[i]`` and
    ``R2[i] + R1[0]|S``.
    """
    S, U, D = _split_sets(P, S)
    V = frozenset(P.elements)
    core = S | U | D
    W = V - core
    _check_sub(P, core, R1, "R1")
    _check_sub(P, V - S, R2, "R2")
    w_block = restrict(R2[0], W)
    s_block = restrict(R1[0], S)
    family = [concat(V, w_block, L) for L in R1]
    family += [concat(V, L, w_block) for L in R1]
    family += [concat(V, s_block, L) for L in R2]
    family += [concat(V, L, s_block) for L in R2]
    return _finalise(P, V, family)


def general_split_second(P: Poset, S, R1: Sequence[Sequence[int]], R2: Sequence[Sequence[int]],
                         R3: Sequence[Sequence[int]]) -> list[Order]:
    """Realiser of ``P[D[S] u U[S]]`` of size ``|R1| + |R2| + |R3|``.

    ``R1``, ``R2``, ``R3`` realise ``P[D[S]]``, ``P[U[S]]`` and ``P[U u D]``
    where ``U = U[S] - S`` and ``D = D[S] - S``.  The family is
    ``R1[0]|(D - U) + R2[j]``, ``R1[i] + R2[0]|(U - D)`` and ``R3[k] + R1[0]|S``.
    """
    S, U, D = _split_sets(P, S)
    core = S | U | D
    _check_sub(P, D | S, R1, "R1")
    _check_sub(P, U | S, R2, "R2")
    _check_sub(P, U | D, R3, "R3")
    if not core:
        return [()] * (len(R1) + len(R2) + len(R3))
    d_block = restrict(R1[0], D - U)
    u_block = restrict(R2[0], U - D)
    s_block = restrict(R1[0], S)
    family = [concat(core, d_block, L) for L in R2]
    family += [concat(core, L, u_block) for L in R1]
    family += [concat(core, L, s_block) for L in R3]
    return _finalise(P, core, family)


# ---------------------------------------------------------------- unicyclic

class CoverGraphError(ValueError):
    pass


@dataclass(frozen=True)
class UnicyclicParts:
    top: int
    cycle: frozenset[int]
    W: frozenset[int]
    R: frozenset[int]


def unicyclic_parts(P: Poset) -> UnicyclicParts:
    """Locate the cycle, its chosen maximal element and the split ``W[x]``, ``R``."""
    adj = cover_graph(P)
    comps = connected_components(adj)
    if len(comps) != 1:
        raise CoverGraphError("cover graph is disconnected")
    cls = classify_component(adj, comps[0])
    if cls.tag != "unicyclic":
        raise CoverGraphError(f"cover graph is {cls.tag}, not unicyclic")
    core = {v: set(adj[v]) for v in adj}
    leaves = [v for v, nb in core.items() if len(nb) <= 1]
    while leaves:
        v = leaves.pop()
        if v not in core:
            continue
        for w in core.pop(v):
            core[w].discard(v)
            if len(core[w]) == 1:
                leaves.append(w)
    cycle = frozenset(core)
    cmask = to_mask(cycle)
    top = min(x for x in cycle if not P.up[x] & cmask)
    ups = [u for u in sorted(adj[top]) if P.less(top, u)]
    W = {top}
    for u in ups:
        stack = [u]
        W.add(u)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w != top and w not in W:
                    W.add(w)
                    stack.append(w)
    return UnicyclicParts(top, cycle, frozenset(W), frozenset(P.elements) - frozenset(W))


def brightwell_unicyclic(P: Poset, k_max: int = 3) -> list[Order]:
    """Four-order realiser of a poset whose cover graph is connected and unicyclic.

    Realisers of the two acyclic pieces come from the exact solver.
    """
    parts = unicyclic_parts(P)
    V = frozenset(P.elements)
    W, R, x = parts.W, parts.R, parts.top
    sigma = _pad(sub_realiser(P, W, k_max), 3)
    tau = _pad(sub_realiser(P, R, k_max), 3)
    Ux = up_set(P, [x])
    Dx = down_set(P, [x], closed=False)
    family = [concat(V, t, s) for s, t in zip(sigma, tau)]
    family.append(concat(V, IDENTITY(W - Ux), IDENTITY(Dx), IDENTITY(Ux), IDENTITY(R - Dx)))
    return _finalise(P, V, family)


def _pad(R: list[Order], k: int) -> list[Order]:
    if len(R) > k:
        raise RuntimeError(f"expected a realiser of size at most {k}, got {len(R)}")
    return R + [R[0]] * (k - len(R))


# ---------------------------------------------------------------- co-sparse

@dataclass(frozen=True)
class CosparseReduction:
    """The reduced order ``P'`` on elements not comparable to a whole part.

    ``reduced`` is relabelled ``1..m`` (``labels`` maps back) or ``None``
    when every element is comparable to the whole opposite part.
    """

    parent: BipartiteOrder
    A_full: frozenset[int]
    B_full: frozenset[int]
    reduced: BipartiteOrder | None
    labels: tuple[int, ...]

    def lift(self, R_reduced: Sequence[Sequence[int]]) -> list[Order]:
        """Lift a realiser of ``reduced`` (in its own labels) to ``d + 1`` orders of the parent."""
        P = self.parent.poset
        V = frozenset(P.elements)
        if self.reduced is None:
            R_reduced = [()]
        elif not is_realiser(R_reduced, self.reduced.poset):
            raise SubRealiserError("not a realiser of the reduced order")
        Rl = [lift(L, self.labels) for L in R_reduced]
        a_full = IDENTITY(self.A_full)
        b_full = IDENTITY(self.B_full)
        out = [concat(V, a_full, L, b_full) for L in Rl]
        first = Rl[0]
        out.append(concat(
            V,
            restrict(first, self.parent.A - self.A_full),
            a_full[::-1],
            b_full[::-1],
            restrict(first, self.parent.B - self.B_full),
        ))
        if not is_realiser(out, P):  # pragma: no cover
            raise RuntimeError("co-sparse lift produced an invalid realiser")
        return out


def cosparse_reduction(order: BipartiteOrder) -> CosparseReduction:
    P = order.poset
    amask = to_mask(order.A)
    bmask = to_mask(order.B)
    A_full = frozenset(a for a in order.A if not bmask & ~P.up[a])
    B_full = frozenset(b for b in order.B if not amask & ~P.down[b])
    rest = frozenset(P.elements) - A_full - B_full
    if not rest:
        return CosparseReduction(order, A_full, B_full, None, ())
    sub, labels = induced(P, rest)
    index = {x: i for i, x in enumerate(labels, start=1)}
    reduced = BipartiteOrder(
        sub,
        frozenset(index[a] for a in order.A - A_full),
        frozenset(index[b] for b in order.B - B_full),
    )
    return CosparseReduction(order, A_full, B_full, reduced, labels)


def cosparse_realiser(order: BipartiteOrder, k_max: int = DEFAULT_KMAX) -> list[Order]:
    red = cosparse_reduction(order)
    R = [()] if red.reduced is None else realiser_of(red.reduced.poset, k_max)
    return red.lift(R)
