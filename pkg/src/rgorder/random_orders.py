"""Seeded samplers for random graph orders and the threshold sets built on them.

All randomness goes through :class:`numpy.random.Generator` with the PCG64
bit generator.  A trial's stream is seeded by ``SeedSequence([seed, trial])``
so trial ``i`` sees the same bits whether trials run serially or in a pool.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .poset import Poset, bits, down_set, from_dag, popcount, up_set

RNG_ALGORITHM = "PCG64"
DEFAULT_K = 240.0


@dataclass(frozen=True)
class ModelSpec:
    model: str
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("gnp", "bipartite"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @classmethod
    def from_c(cls, model: str, n: int, c: float, seed: int = 0) -> ModelSpec:
        """Build a spec with ``p = c / n``, clamped to 1 with a warning."""
        p = c / n
        if p > 1.0:
            warnings.warn(f"c={c} exceeds n={n}; clamping p to 1", stacklevel=2)
            p = 1.0
        return cls(model, n, p, seed)

    @property
    def c(self) -> float:
        return self.p * self.n

    def to_json(self) -> str:
        return json.dumps({"model": self.model, "n": self.n, "p": self.p, "seed": self.seed})

    @classmethod
    def from_dict(cls, d: dict) -> ModelSpec:
        seed = int(d.get("seed", 0))
        if "c" in d:
            return cls.from_c(d["model"], int(d["n"]), float(d["c"]), seed)
        if "p" in d:
            return cls(d["model"], int(d["n"]), float(d["p"]), seed)
        raise ValueError("model spec needs 'c' or 'p'")

    @classmethod
    def from_json(cls, text: str) -> ModelSpec:
        return cls.from_dict(json.loads(text))


def trial_rng(seed: int, trial: int | None = None) -> np.random.Generator:
    entropy = [seed] if trial is None else [seed, trial]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class SampledOrder:
    poset: Poset
    edges: tuple[tuple[int, int], ...]
    spec: ModelSpec

    @property
    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {x: set() for x in self.poset.elements}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class BipartiteOrder:
    """A poset whose relations all run from part ``A`` to part ``B``."""

    poset: Poset
    A: frozenset[int]
    B: frozenset[int]

    def __post_init__(self):
        if self.A & self.B or (self.A | self.B) != frozenset(self.poset.elements):
            raise ValueError("A and B must partition the ground set")
        bmask = sum(1 << b for b in self.B)
        for x in self.poset.elements:
            above = self.poset.up[x]
            if above and (x in self.B or above & ~bmask):
                raise ValueError(f"relation from {x} does not run A -> B")

    @property
    def n(self) -> int:
        return self.poset.n

    @classmethod
    def infer(cls, P: Poset) -> BipartiteOrder:
        """Parts from a height-two order: elements with something below go to ``B``."""
        B = frozenset(x for x in P.elements if P.down[x])
        return cls(P, frozenset(P.elements) - B, B)


@dataclass(frozen=True)
class SampledBipartite:
    order: BipartiteOrder
    edges: tuple[tuple[int, int], ...]
    spec: ModelSpec

    @property
    def poset(self) -> Poset:
        return self.order.poset

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.order.poset.elements, 0)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def sample_gnp_order(spec: ModelSpec, trial: int | None = None) -> SampledOrder:
    """Random graph order of ``G(n, p)`` with each edge oriented low -> high label."""
    if spec.model != "gnp":
        raise ValueError("spec model must be 'gnp'")
    rng = trial_rng(spec.seed, trial)
    n, p = spec.n, spec.p
    edges = []
    for i in range(1, n):
        hits = np.flatnonzero(rng.random(n - i) < p)
        edges.extend((i, i + 1 + int(j)) for j in hits)
    return SampledOrder(from_dag(n, edges), tuple(edges), spec)


def sample_bipartite_order(spec: ModelSpec, trial: int | None = None) -> SampledBipartite:
    """Random bipartite order of ``B(n, n, p)``: parts ``1..n`` below ``n+1..2n``."""
    if spec.model != "bipartite":
        raise ValueError("spec model must be 'bipartite'")
    rng = trial_rng(spec.seed, trial)
    n, p = spec.n, spec.p
    hit = rng.random((n, n)) < p
    ai, bj = np.nonzero(hit)
    edges = tuple(zip((ai + 1).tolist(), (bj + n + 1).tolist()))
    up = [0] * (2 * n + 1)
    for a, b in edges:
        up[a] |= 1 << b
    P = Poset(2 * n, tuple(up))
    order = BipartiteOrder(P, frozenset(range(1, n + 1)), frozenset(range(n + 1, 2 * n + 1)))
    return SampledBipartite(order, edges, spec)


def sample(spec: ModelSpec, trial: int | None = None) -> SampledOrder | SampledBipartite:
    if spec.model == "gnp":
        return sample_gnp_order(spec, trial)
    return sample_bipartite_order(spec, trial)


def standard_example(m: int) -> BipartiteOrder:
    """``a_i < b_j`` iff ``i != j``; ``a_i`` is label ``i`` and ``b_j`` is ``m + j``."""
    if m < 2:
        raise ValueError("standard example needs m >= 2")
    up = [0] * (2 * m + 1)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i != j:
                up[i] |= 1 << (m + j)
    P = Poset(2 * m, tuple(up))
    return BipartiteOrder(P, frozenset(range(1, m + 1)), frozenset(range(m + 1, 2 * m + 1)))


@dataclass(frozen=True)
class ThresholdParams:
    """Threshold constants for the high-degree / large-cone element sets.

    ``mode="bipartite"`` uses ``alpha = K c``; ``mode="gnp"`` uses
    ``alpha = K c e^c`` and the cutoff ``10 K c alpha`` on ``|D[x] u U[x]|``.
    ``threshold`` overrides the derived cutoff in either mode.
    """

    c: float
    K: float = DEFAULT_K
    mode: str = "bipartite"
    threshold: float | None = field(default=None)

    def __post_init__(self):
        if self.mode not in ("bipartite", "gnp"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.K <= 0:
            raise ValueError("K must be positive")

    @property
    def alpha(self) -> float:
        if self.mode == "bipartite":
            return self.K * self.c
        return self.K * self.c * math.exp(self.c)

    @property
    def cutoff(self) -> float:
        if self.threshold is not None:
            return self.threshold
        if self.mode == "bipartite":
            return self.alpha
        return 10 * self.K * self.c * self.alpha


def threshold_sets(order, edges: Iterable[tuple[int, int]] | None, params: ThresholdParams):
    """High-degree sets ``(S_A, S_B)`` (bipartite) or large-cone set ``S`` (gnp).

    ``order`` is a :class:`BipartiteOrder` in bipartite mode and a
    :class:`Poset` in gnp mode; ``edges`` is only read in bipartite mode.
    """
    cut = params.cutoff
    if params.mode == "bipartite":
        if not isinstance(order, BipartiteOrder):
            raise TypeError("bipartite mode needs a BipartiteOrder")
        deg = dict.fromkeys(order.poset.elements, 0)
        for u, v in edges or ():
            deg[u] += 1
            deg[v] += 1
        SA = frozenset(a for a in order.A if deg[a] >= cut)
        SB = frozenset(b for b in order.B if deg[b] >= cut)
        return SA, SB
    if isinstance(order, BipartiteOrder):
        raise TypeError("gnp mode needs a plain Poset")
    P: Poset = order
    return frozenset(
        x for x in P.elements if popcount(P.up[x] | P.down[x]) + 1 >= cut
    )


@dataclass(frozen=True)
class ComplementStats:
    isolated_edges: int
    A_full: frozenset[int]
    B_full: frozenset[int]
    A_rest: int
    B_rest: int


def bipartite_complement_stats(order: BipartiteOrder) -> ComplementStats:
    """Statistics of the bipartite complement of the order's graph.

    ``isolated_edges`` counts complement components of order exactly two;
    ``A_full``/``B_full`` are the elements comparable to the whole other part.
    """
    P = order.poset
    amask = sum(1 << a for a in order.A)
    bmask = sum(1 << b for b in order.B)
    # complement neighbourhoods
    cn = {a: bmask & ~P.up[a] for a in order.A}
    cn.update({b: amask & ~P.down[b] for b in order.B})
    isolated = 0
    for a in order.A:
        nb = cn[a]
        if popcount(nb) == 1:
            b = nb.bit_length() - 1
            if cn[b] == 1 << a:
                isolated += 1
    A_full = frozenset(a for a in order.A if not cn[a])
    B_full = frozenset(b for b in order.B if not cn[b])
    return ComplementStats(
        isolated, A_full, B_full, len(order.A) - len(A_full), len(order.B) - len(B_full)
    )


def complement_isolated_edges(spec: ModelSpec, trial: int | None = None) -> int:
    """Isolated edges of the complement of ``B(n, n, p)``, straight from the adjacency matrix.

    Draws the same stream as :func:`sample_bipartite_order`, so it agrees
    with :func:`bipartite_complement_stats` on the sampled order.
    """
    if spec.model != "bipartite":
        raise ValueError("spec model must be 'bipartite'")
    rng = trial_rng(spec.seed, trial)
    miss = ~(rng.random((spec.n, spec.n)) < spec.p)
    rows = miss.sum(axis=1) == 1
    cols = miss.sum(axis=0) == 1
    return int((miss & rows[:, None] & cols[None, :]).sum())


def expected_isolated_edges(n: int, q: float) -> float:
    return n * n * q * (1 - q) ** (2 * (n - 1))


def updown_size(P: Poset, x: int) -> int:
    """``|D[x] u U[x]|`` (closed cones, so ``x`` counts once)."""
    return len(up_set(P, [x]) | down_set(P, [x]))


def max_updown_size(P: Poset) -> int:
    return max((popcount(P.up[x] | P.down[x]) + 1 for x in P.elements), default=0)
