"""Exact order dimension by backtracking over reversible sets.

``dim P <= k`` iff the critical pairs of ``P`` split into ``k`` reversible
sets.  Each colour class keeps the transitive closure of ``P`` plus the
reversal arcs assigned to it, so adding a pair is a constant number of
bitmask sweeps and a conflict shows up as an existing opposite relation.

When backtracking for a given ``k`` passes ``SAT_AFTER_NODES`` nodes, the
same decision question goes to a CDCL SAT solver (``python-sat``), which is
far better at refuting ``k`` on instances of dimension ``k + 1``.  Either
way the witness is checked with ``is_realiser``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .poset import Poset, bits, induced, is_realiser, lift

DEFAULT_KMAX = 8


class BudgetExceeded(RuntimeError):
    """The dimension is larger than the search cap ``k_max``."""


def incomparable_pairs(P: Poset) -> list[tuple[int, int]]:
    out = []
    for x in P.elements:
        inc = P.full_mask & ~(P.up[x] | P.down[x] | (1 << x))
        out.extend((x, y) for y in bits(inc))
    return out


def critical_pairs(P: Poset) -> list[tuple[int, int]]:
    """Incomparable ``(x, y)`` with ``D(x) <= D(y)`` and ``U(y) <= U(x)``.

    A family of linear extensions is a realiser iff it puts ``y`` before
    ``x`` for every critical pair, so these are all the solver colours.
    """
    out = []
    for x, y in incomparable_pairs(P):
        if not P.down[x] & ~P.down[y] and not P.up[y] & ~P.up[x]:
            out.append((x, y))
    return out


class _Closure:
    """Transitive closure of ``P`` plus a growing set of extra arcs."""

    __slots__ = ("up", "down")

    def __init__(self, up: list[int], down: list[int]):
        self.up = up
        self.down = down

    @classmethod
    def of(cls, P: Poset) -> _Closure:
        return cls(list(P.up), list(P.down))

    def copy(self) -> _Closure:
        return _Closure(self.up[:], self.down[:])

    def before(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def can_reverse(self, x: int, y: int) -> bool:
        return not self.up[x] >> y & 1

    def reverse(self, x: int, y: int) -> None:
        """Force ``y`` before ``x``; caller checks :meth:`can_reverse` first."""
        lo = self.down[y] | (1 << y)
        hi = self.up[x] | (1 << x)
        for a in bits(lo):
            self.up[a] |= hi
        for b in bits(hi):
            self.down[b] |= lo

    def linear_extension(self, n: int) -> tuple[int, ...]:
        """Smallest-label-first topological order of the closure."""
        placed = 0
        order = []
        remaining = list(range(1, n + 1))
        while remaining:
            for i, x in enumerate(remaining):
                if not self.down[x] & ~placed:
                    order.append(x)
                    placed |= 1 << x
                    del remaining[i]
                    break
            else:  # pragma: no cover - closure is acyclic by construction
                raise RuntimeError("closure has a cycle")
        return tuple(order)


def is_reversible(P: Poset, S: Sequence[tuple[int, int]]) -> bool:
    """Can one linear extension place ``y`` before ``x`` for all ``(x, y)`` in ``S``?"""
    cl = _Closure.of(P)
    for x, y in S:
        if x == y or P.less(x, y) or P.less(y, x):
            raise ValueError(f"pair ({x}, {y}) is not incomparable")
        if not cl.can_reverse(x, y):
            return False
        cl.reverse(x, y)
    return True


def _conflict(P: Poset, a: tuple[int, int], b: tuple[int, int]) -> bool:
    # reversing both closes y -> x <= y' -> x' <= y
    (x, y), (x2, y2) = a, b
    le = lambda u, v: u == v or P.less(u, v)  # noqa: E731
    return le(x, y2) and le(x2, y)


def _clique_lower_bound(P: Poset, pairs: list[tuple[int, int]]) -> int:
    if not pairs:
        return 1
    adj = {p: {q for q in pairs if q != p and _conflict(P, p, q)} for p in pairs}
    best = 1
    for start in sorted(pairs, key=lambda p: (-len(adj[p]), p))[:20]:
        clique = [start]
        cand = set(adj[start])
        while cand:
            nxt = max(sorted(cand), key=lambda q: len(adj[q] & cand))
            clique.append(nxt)
            cand &= adj[nxt]
        best = max(best, len(clique))
    return best


@dataclass
class DimensionResult:
    dimension: int | None
    witness: list[tuple[int, ...]] | None
    lower_bound: int
    exceeded: bool = False
    nodes: int = field(default=0, repr=False)

    @property
    def solved(self) -> bool:
        return not self.exceeded


class _NodeLimit(Exception):
    pass


def _colour(P: Poset, pairs: list[tuple[int, int]], k: int, degree: dict,
            node_limit: int | None = None) -> tuple[list[_Closure] | None, int]:
    nodes = 0

    def search(classes: list[_Closure], todo: list[tuple[int, int]]):
        nonlocal nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _NodeLimit
        best = None
        best_opts = None
        rest = []
        for x, y in todo:
            if any(cl.before(y, x) for cl in classes):
                continue
            opts = [i for i, cl in enumerate(classes) if cl.can_reverse(x, y)]
            if len(classes) < k:
                opts.append(len(classes))
            if not opts:
                return None
            rest.append((x, y))
            key = (len(opts), -degree[(x, y)], (x, y))
            if best is None or key < best:
                best, best_opts = key, opts
        if best is None:
            return classes
        pair = best[2]
        rest.remove(pair)
        x, y = pair
        for i in best_opts:
            trial = [cl if j != i else cl.copy() for j, cl in enumerate(classes)]
            if i == len(classes):
                trial.append(_Closure.of(P))
            trial[i].reverse(x, y)
            found = search(trial, rest)
            if found is not None:
                return found
        return None

    return search([], list(pairs)), nodes


def _twin_classes(P: Poset) -> list[list[int]]:
    groups: dict[tuple[int, int], list[int]] = {}
    for x in P.elements:
        groups.setdefault((P.down[x], P.up[x]), []).append(x)
    return list(groups.values())


def _solve_connected(P: Poset, k_max: int) -> DimensionResult:
    """Solve one comparability component, first collapsing twins.

    Twins (same strict down- and up-set) do not change a dimension of at
    least 2: each copy sits next to its representative, after it in the first
    order and before it in the second.
    """
    classes = _twin_classes(P)
    if len(classes) == P.n:
        return _solve_reduced(P, k_max)
    reps = [g[0] for g in classes]
    sub, labels = induced(P, reps)
    res = _solve_reduced(sub, k_max)
    if res.exceeded:
        return res
    witness = [lift(L, labels) for L in res.witness]
    if len(witness) < 2:
        witness.append(witness[0])
    copies = {g[0]: g[1:] for g in classes}
    out = []
    for j, L in enumerate(witness):
        seq = []
        for x in L:
            extra = copies[x]
            seq.extend([x, *extra] if j == 0 else [*reversed(extra), x] if j == 1 else [x, *extra])
        out.append(tuple(seq))
    return DimensionResult(max(2, res.dimension), out, max(2, res.lower_bound), nodes=res.nodes)


def _sat_orders(P: Poset, pairs: list[tuple[int, int]], k: int) -> list[tuple[int, ...]] | None:
    """Decide ``k`` linear extensions covering ``pairs`` with a CDCL solver.

    One boolean per class and unordered incomparable pair says which comes
    first; transitivity is clausal.  Returns the orders or ``None`` if unsat.
    """
    from pysat.solvers import Solver

    n = P.n
    var: dict[tuple[int, int, int], int] = {}
    for i in range(k):
        for a in range(1, n + 1):
            for b in bits(P.full_mask & ~(P.up[a] | P.down[a] | (1 << a))):
                if a < b:
                    var[i, a, b] = len(var) + 1

    def before(i: int, a: int, b: int):
        if P.up[a] >> b & 1:
            return True
        if P.down[a] >> b & 1:
            return False
        return var[i, a, b] if a < b else -var[i, b, a]

    with Solver(name="cadical153") as solver:
        for i in range(k):
            for b in range(1, n + 1):
                for a in range(1, n + 1):
                    if a == b:
                        continue
                    ab = before(i, a, b)
                    if ab is False:
                        continue
                    for c in range(1, n + 1):
                        if c == a or c == b:
                            continue
                        bc = before(i, b, c)
                        ac = before(i, a, c)
                        if bc is False or ac is True:
                            continue
                        clause = [-lit for lit in (ab, bc) if lit is not True]
                        if ac is not False:
                            clause.append(ac)
                        if not clause:
                            return None
                        solver.add_clause(clause)
        for x, y in pairs:
            solver.add_clause([before(i, y, x) for i in range(k)])
        x, y = pairs[0]
        solver.add_clause([before(0, y, x)])
        if not solver.solve():
            return None
        model = set(lit for lit in solver.get_model() if lit > 0)
    orders = []
    for i in range(k):
        rank = {a: sum(1 for b in range(1, n + 1) if b != a and _holds(before(i, b, a), model))
                for a in range(1, n + 1)}
        orders.append(tuple(sorted(rank, key=rank.get)))
    return orders


def _holds(lit, model: set[int]) -> bool:
    if isinstance(lit, bool):
        return lit
    return lit in model if lit > 0 else -lit not in model


SAT_AFTER_NODES = 400


def _solve_reduced(P: Poset, k_max: int) -> DimensionResult:
    pairs = critical_pairs(P)
    if not pairs:
        return DimensionResult(1, [_Closure.of(P).linear_extension(P.n)], 1)
    degree = {p: sum(_conflict(P, p, q) for q in pairs if q != p) for p in pairs}
    lb = max(2, _clique_lower_bound(P, pairs))
    total = 0
    for k in range(lb, k_max + 1):
        try:
            classes, nodes = _colour(P, pairs, k, degree, SAT_AFTER_NODES)
            total += nodes
            witness = None if classes is None else [cl.linear_extension(P.n) for cl in classes]
        except _NodeLimit:
            # hard refutation: hand this k to clause learning
            total += SAT_AFTER_NODES
            witness = _sat_orders(P, pairs, k)
        if witness is not None:
            while len(witness) < 2:
                witness.append(witness[0])
            return DimensionResult(len(witness), witness, lb, nodes=total)
    return DimensionResult(None, None, max(lb, k_max + 1), exceeded=True, nodes=total)


def comparability_components(P: Poset) -> list[tuple[int, ...]]:
    seen = 0
    comps = []
    for x in P.elements:
        if seen >> x & 1:
            continue
        comp = 1 << x
        frontier = comp
        while frontier:
            grow = 0
            for y in bits(frontier):
                grow |= P.up[y] | P.down[y]
            frontier = grow & ~comp
            comp |= grow
        seen |= comp
        comps.append(tuple(bits(comp)))
    return comps


def exact_dimension(P: Poset, k_max: int = DEFAULT_KMAX) -> DimensionResult:
    """Minimum realiser size of ``P`` (chains and the empty order count as 1).

    A disjoint union of several comparability components has dimension
    ``max(2, max component dimension)``; components are solved separately and
    glued, the first order listing components forwards, the second backwards.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if P.n <= 1:
        return DimensionResult(1, [tuple(P.elements)], 1)
    comps = comparability_components(P)
    if len(comps) == 1:
        res = _solve_connected(P, k_max)
        if res.dimension == 1:
            res.witness = res.witness[:1]
        return _checked(res, P)
    if k_max < 2:
        return DimensionResult(None, None, 2, exceeded=True)
    parts = []
    lb = 2
    nodes = 0
    for comp in comps:
        sub, labels = induced(P, comp)
        res = _solve_connected(sub, k_max) if sub.n > 1 else DimensionResult(1, [(1,)], 1)
        nodes += res.nodes
        lb = max(lb, res.lower_bound)
        if res.exceeded:
            return DimensionResult(None, None, lb, exceeded=True, nodes=nodes)
        parts.append([lift(L, labels) for L in res.witness])
    d = max(2, max(len(w) for w in parts))
    witness = []
    for j in range(d):
        seq = [w[j] if j < len(w) else w[0] for w in parts]
        if j == 1:
            seq.reverse()
        witness.append(tuple(x for L in seq for x in L))
    return _checked(DimensionResult(d, witness, lb, nodes=nodes), P)


def _checked(res: DimensionResult, P: Poset) -> DimensionResult:
    if res.witness is not None and not is_realiser(res.witness, P):  # pragma: no cover
        raise RuntimeError("solver produced an invalid witness")
    return res


def realiser_of(P: Poset, k_max: int = DEFAULT_KMAX) -> list[tuple[int, ...]]:
    """Minimum realiser of ``P``; raises if the dimension exceeds ``k_max``."""
    if P.n == 0:
        return [()]
    res = exact_dimension(P, k_max)
    if res.exceeded:
        raise BudgetExceeded(f"dimension exceeds k_max={k_max}")
    return res.witness


def sub_realiser(P: Poset, S, k_max: int = DEFAULT_KMAX) -> list[tuple[int, ...]]:
    """Minimum realiser of ``P[S]`` written in the original labels of ``P``."""
    S = sorted(set(S))
    if not S:
        return [()]
    sub, labels = induced(P, S)
    return [lift(L, labels) for L in realiser_of(sub, k_max)]
