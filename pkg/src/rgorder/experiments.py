"""Monte Carlo harness: per-trial observables, structural checks and plot data.

Trials are independent and seeded by ``(seed, trial)``, so a run produces the
same records file whatever the worker count.  Records are JSON lines in trial
order; the summary is a small CSV of means, standard errors and pass rates.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from scipy import stats

from .dimension import DEFAULT_KMAX, exact_dimension
from .numerics import bipartite_lower_curve, gnp_lower_curve, solve_alpha, upset_distribution
from .poset import (
    Poset,
    bits,
    classify_component,
    connected_components,
    cover_relations,
    down_set,
    induced,
    popcount,
    width,
)
from .random_orders import (
    DEFAULT_K,
    BipartiteOrder,
    ModelSpec,
    ThresholdParams,
    bipartite_complement_stats,
    max_updown_size,
    sample,
    threshold_sets,
    trial_rng,
)

SCHEMA_VERSION = 1
CHECKS = ("dim", "width", "ds_structure", "reversal_capacity", "incomparable_density", "isolated_edges")
_MODE_ONLY = {"ds_structure": "gnp", "reversal_capacity": "bipartite", "isolated_edges": "bipartite"}
GRAPH_CLASSES = ("tree", "unicyclic", "bicyclic", "multicyclic")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class ExperimentConfig:
    spec: ModelSpec
    trials: int
    checks: tuple[str, ...]
    k_max: int = DEFAULT_KMAX
    K: float = DEFAULT_K
    output: str = "results/experiment"
    workers: int = 1
    threshold: float | None = None
    xi: float = 0.1
    extensions: int = 100
    epsilon: float = 0.1
    dim_max_n: int = 40

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.checks:
            raise ConfigError("checks must be nonempty")
        for name in self.checks:
            if name not in CHECKS:
                raise ConfigError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
            mode = _MODE_ONLY.get(name)
            if mode and mode != self.spec.model:
                raise ConfigError(f"check {name!r} needs model {mode!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not 0 < self.xi <= 0.5:
            raise ConfigError("xi must lie in (0, 1/2]")

    @property
    def threshold_params(self) -> ThresholdParams:
        return ThresholdParams(self.spec.c, self.K, self.spec.model, self.threshold)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spec"] = json.loads(self.spec.to_json())
        d["checks"] = list(self.checks)
        return {"schema": SCHEMA_VERSION, **d}

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        schema = d.pop("schema", None)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema {schema!r}; expected {SCHEMA_VERSION}")
        try:
            spec = ModelSpec.from_dict(d.pop("spec"))
            checks = tuple(d.pop("checks"))
            return cls(spec=spec, checks=checks, **d)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad config: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(data)


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class DsStructure:
    classes: dict[str, int]
    cover_subgraph_ok: bool
    S_size: int
    D_size: int


def check_ds_structure(P: Poset, edges, params: ThresholdParams) -> DsStructure:
    """Classify cover-graph components of ``P[D[S]]`` and test they use sampled edges only."""
    if params.mode != "gnp" or isinstance(P, BipartiteOrder):
        raise TypeError("ds structure check needs a gnp order and gnp threshold params")
    S = threshold_sets(P, None, params)
    D = down_set(P, S) if S else frozenset()
    classes = dict.fromkeys(GRAPH_CLASSES, 0)
    if not D:
        return DsStructure(classes, True, 0, 0)
    sub, labels = induced(P, D)
    arcs = [(labels[u - 1], labels[v - 1]) for u, v in cover_relations(sub)]
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    ok = all((min(u, v), max(u, v)) in edge_set for u, v in arcs)
    adj: dict[int, set[int]] = {x: set() for x in D}
    for u, v in arcs:
        adj[u].add(v)
        adj[v].add(u)
    for comp in connected_components(adj):
        classes[classify_component(adj, comp).tag] += 1
    return DsStructure(classes, ok, len(S), len(D))


@dataclass(frozen=True)
class ReversalStats:
    max_reversed: int
    mean_reversed: float
    exceed_fraction: float
    bound: float
    adversarial: int


def _count_reversed(order: BipartiteOrder, L) -> int:
    P = order.poset
    placed_b = 0
    total = 0
    for x in L:
        if x in order.B:
            placed_b |= 1 << x
        else:
            total += popcount(placed_b & ~P.up[x])
    return total


def random_topological_extension(P: Poset, rng: np.random.Generator) -> tuple[int, ...]:
    """Topological sort with a uniformly random choice among available elements."""
    indeg = [0] + [popcount(P.down[x]) for x in P.elements]
    avail = [x for x in P.elements if not indeg[x]]
    out = []
    while avail:
        i = int(rng.integers(len(avail)))
        avail[i], avail[-1] = avail[-1], avail[i]
        x = avail.pop()
        out.append(x)
        for y in bits(P.up[x]):
            indeg[y] -= 1
            if not indeg[y]:
                avail.append(y)
    return tuple(out)


def greedy_reversing_extension(order: BipartiteOrder) -> tuple[int, ...]:
    """Linear extension built greedily to reverse many incomparable ``A x B`` pairs.

    Placing ``b`` gains the unplaced ``a`` incomparable to it; placing ``a``
    forfeits the unplaced ``b`` incomparable to it.  Best score first, ties by label.
    """
    P = order.poset
    un_a = sum(1 << a for a in order.A)
    un_b = sum(1 << b for b in order.B)
    placed = 0
    out = []
    remaining = set(P.elements)
    while remaining:
        best = None
        for x in sorted(remaining):
            if P.down[x] & ~placed:
                continue
            if x in order.B:
                score = popcount(un_a & ~P.down[x])
            else:
                score = -popcount(un_b & ~P.up[x])
            if best is None or score > best[0]:
                best = (score, x)
        x = best[1]
        out.append(x)
        remaining.discard(x)
        placed |= 1 << x
        un_a &= ~(1 << x)
        un_b &= ~(1 << x)
    return tuple(out)


def check_reversal_capacity(order: BipartiteOrder, extensions_sample: int, epsilon: float,
                            rng: np.random.Generator | None = None, c: float | None = None) -> ReversalStats:
    """Reversed incomparable ``A x B`` pairs over sampled extensions against ``2(1+eps) alpha_c n^2``.

    ``c`` defaults to the realised mean degree ``|relations| / |A|``; with
    ``c <= 0`` the bound is infinite.
    """
    if not isinstance(order, BipartiteOrder):
        raise TypeError("reversal capacity needs a BipartiteOrder")
    if extensions_sample < 1:
        raise ValueError("need at least one sampled extension")
    rng = rng if rng is not None else trial_rng(0)
    n = len(order.A)
    if c is None:
        c = order.poset.num_relations() / n if n else 0.0
    bound = 2 * (1 + epsilon) * solve_alpha(c) * n * n if c > 0 else math.inf
    counts = [_count_reversed(order, random_topological_extension(order.poset, rng))
              for _ in range(extensions_sample)]
    adv = _count_reversed(order, greedy_reversing_extension(order))
    exceed = sum(k > bound for k in counts + [adv]) / (len(counts) + 1)
    return ReversalStats(max(counts), float(np.mean(counts)), exceed, bound, adv)


def check_incomparable_density(order, mode: str, xi: float | None = None) -> float:
    """Incomparable ``A x B`` pairs over ``n^2`` (bipartite) or ``A' x B'`` over ``m^2`` (gnp).

    In gnp mode ``A'`` and ``B'`` are the ``m = floor(xi n)`` smallest and largest labels.
    """
    if mode == "bipartite":
        if not isinstance(order, BipartiteOrder):
            raise TypeError("bipartite mode needs a BipartiteOrder")
        P = order.poset
        bmask = sum(1 << b for b in order.B)
        inc = sum(popcount(bmask & ~P.up[a]) for a in order.A)
        return inc / (len(order.A) * len(order.B))
    if mode != "gnp":
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(order, BipartiteOrder) or xi is None:
        raise TypeError("gnp mode needs a plain Poset and xi")
    P: Poset = order
    m = int(math.floor(xi * P.n))
    if m < 1 or 2 * m > P.n:
        raise ValueError("xi n must give two disjoint nonempty blocks")
    bmask = sum(1 << b for b in range(P.n - m + 1, P.n + 1))
    inc = sum(popcount(bmask & ~P.up[a]) for a in range(1, m + 1))
    return inc / (m * m)


# ---------------------------------------------------------------- trials

@dataclass
class TrialRecord:
    trial: int
    trial_seed: list[int]
    model: str
    n: int
    p: float
    c: float
    incomparable_pair_count: int
    max_updown_size: int
    width: int | None = None
    dimension: int | None = None
    dim_exceeded: bool = False
    isolated_edge_count: int | None = None
    ds_component_classes: dict[str, int] | None = None
    check_outcomes: dict[str, dict[str, Any]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> TrialRecord:
        return cls(**json.loads(line))


def run_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    spec = config.spec
    drawn = sample(spec, trial)
    P = drawn.poset
    N = P.n
    rec = TrialRecord(
        trial=trial, trial_seed=[spec.seed, trial], model=spec.model, n=spec.n, p=spec.p, c=spec.c,
        incomparable_pair_count=N * (N - 1) // 2 - P.num_relations(),
        max_updown_size=max_updown_size(P),
    )
    out = rec.check_outcomes
    for name in config.checks:
        if name == "dim":
            if N > config.dim_max_n:
                out[name] = {"status": "skipped", "value": None}
                continue
            res = exact_dimension(P, config.k_max)
            rec.dimension, rec.dim_exceeded = res.dimension, res.exceeded
            out[name] = {"status": "exceeded" if res.exceeded else "solved", "value": res.dimension}
        elif name == "width":
            rec.width = width(P)
            out[name] = {"status": "stat", "value": rec.width}
        elif name == "ds_structure":
            ds = check_ds_structure(P, drawn.edges, config.threshold_params)
            rec.ds_component_classes = ds.classes
            out[name] = {"status": "pass" if ds.cover_subgraph_ok else "fail", "hard": True,
                         "value": {"S": ds.S_size, "D": ds.D_size,
                                   "bicyclic_or_worse": ds.classes["bicyclic"] + ds.classes["multicyclic"]}}
        elif name == "reversal_capacity":
            rs = check_reversal_capacity(drawn.order, config.extensions, config.epsilon,
                                         trial_rng(spec.seed, trial), spec.c)
            out[name] = {"status": "pass" if rs.exceed_fraction == 0 else "fail",
                         "value": asdict(rs) | {"bound": rs.bound if math.isfinite(rs.bound) else None}}
        elif name == "incomparable_density":
            if spec.model == "bipartite":
                ratio = check_incomparable_density(drawn.order, "bipartite")
            else:
                ratio = check_incomparable_density(P, "gnp", config.xi)
            out[name] = {"status": "stat", "value": ratio}
        elif name == "isolated_edges":
            rec.isolated_edge_count = bipartite_complement_stats(drawn.order).isolated_edges
            out[name] = {"status": "stat", "value": rec.isolated_edge_count}
    return rec


def _run_packed(args) -> TrialRecord:
    return run_trial(*args)


# ---------------------------------------------------------------- runs

@dataclass
class ExperimentResult:
    records: list[TrialRecord]
    summary: list[dict[str, Any]]
    records_path: Path | None
    summary_path: Path | None
    hard_failures: int
    spot_checked: int


def _mean_se(values: list[float]) -> tuple[float, float]:
    k = len(values)
    if not k:
        return math.nan, math.nan
    mean = math.fsum(values) / k
    if k == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (k - 1)
    return mean, math.sqrt(var / k)


def summarise(records: list[TrialRecord]) -> list[dict[str, Any]]:
    """Rows ``metric, count, mean, stderr``; pass rates and histograms are fractions."""
    rows = []
    for metric in ("incomparable_pair_count", "max_updown_size", "width", "dimension", "isolated_edge_count"):
        vals = [getattr(r, metric) for r in records if getattr(r, metric) is not None]
        if vals:
            m, se = _mean_se([float(v) for v in vals])
            rows.append({"metric": metric, "count": len(vals), "mean": m, "stderr": se})
    dims = [r.dimension for r in records if r.dimension is not None]
    for d in sorted(set(dims)):
        frac = dims.count(d) / len(dims)
        rows.append({"metric": f"dimension={d}", "count": dims.count(d), "mean": frac,
                     "stderr": math.sqrt(frac * (1 - frac) / len(dims))})
    exceeded = sum(r.dim_exceeded for r in records)
    if exceeded:
        rows.append({"metric": "dimension_exceeded", "count": exceeded, "mean": exceeded / len(records), "stderr": 0.0})
    names = sorted({k for r in records for k in r.check_outcomes})
    for name in names:
        outs = [r.check_outcomes[name] for r in records if name in r.check_outcomes]
        graded = [o["status"] == "pass" for o in outs if o["status"] in ("pass", "fail")]
        if graded:
            rate = sum(graded) / len(graded)
            rows.append({"metric": f"check:{name}:pass_rate", "count": len(graded), "mean": rate,
                         "stderr": math.sqrt(rate * (1 - rate) / len(graded))})
        if name in ("incomparable_density",):
            m, se = _mean_se([o["value"] for o in outs])
            rows.append({"metric": f"check:{name}:ratio", "count": len(outs), "mean": m, "stderr": se})
    ds = [r.ds_component_classes for r in records if r.ds_component_classes is not None]
    if ds:
        bad = sum(1 for h in ds if h["bicyclic"] + h["multicyclic"])
        frac = bad / len(ds)
        rows.append({"metric": "ds_bicyclic_or_worse", "count": len(ds), "mean": frac,
                     "stderr": math.sqrt(frac * (1 - frac) / len(ds))})
    return rows


def _write_summary(rows: list[dict[str, Any]], path: Path) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["metric", "count", "mean", "stderr"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def run_experiment(config: ExperimentConfig, workers: int | None = None, write: bool = True,
                   spot_check: float = 0.05) -> ExperimentResult:
    """Run all trials, write ``<output>.jsonl`` and ``<output>_summary.csv``.

    A deterministic ``spot_check`` fraction of records (every k-th trial) is
    recomputed serially and compared; a mismatch raises ``RuntimeError``.
    """
    workers = workers or config.workers
    jobs = [(config, i) for i in range(config.trials)]
    if workers > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_packed, jobs, chunksize=max(1, config.trials // (4 * workers))))
    else:
        records = [run_trial(config, i) for i in range(config.trials)]

    checked = 0
    if spot_check > 0:
        step = max(1, round(1 / spot_check))
        for i in range(0, config.trials, step):
            if run_trial(config, i).to_json() != records[i].to_json():  # pragma: no cover
                raise RuntimeError(f"trial {i} is not reproducible from its seed")
            checked += 1

    hard = sum(1 for r in records for o in r.check_outcomes.values() if o.get("hard") and o["status"] == "fail")
    summary = summarise(records)
    rec_path = sum_path = None
    if write:
        stem = Path(config.output)
        try:
            stem.parent.mkdir(parents=True, exist_ok=True)
            rec_path = stem.with_name(stem.name + ".jsonl")
            sum_path = stem.with_name(stem.name + "_summary.csv")
            with rec_path.open("w") as fh:
                for r in records:
                    fh.write(r.to_json() + "\n")
            _write_summary(summary, sum_path)
        except OSError as exc:
            raise ConfigError(f"cannot write output under {stem}: {exc}") from exc
    return ExperimentResult(records, summary, rec_path, sum_path, hard, checked)


# ---------------------------------------------------------------- up-set law

EXHAUSTIVE_MAX_VERTICES = 7


@dataclass
class PmfReport:
    sizeV: int
    sizeU: int
    q: Any
    mode: str
    observed: list
    expected: list
    max_abs_error: float
    exact_match: bool | None = None
    chi2: float | None = None
    pvalue: float | None = None


_enum_cache: dict[tuple[int, int], np.ndarray] = {}


def _enumerate_counts(sizeV: int, sizeU: int) -> np.ndarray:
    """``counts[e, s]`` = number of graphs with ``e`` edges whose up-set from ``V`` meets ``U`` in ``s``."""
    key = (sizeV, sizeU)
    if key in _enum_cache:
        return _enum_cache[key]
    m = sizeV + sizeU
    pairs = [(i, j) for j in range(m) for i in range(j)]
    M = len(pairs)
    g = np.arange(1 << M, dtype=np.uint32)
    reached = [np.ones(g.shape, dtype=bool) for _ in range(sizeV)]
    for j in range(sizeV, m):
        r = np.zeros(g.shape, dtype=bool)
        for idx, (i, jj) in enumerate(pairs):
            if jj == j:
                r |= reached[i] & ((g >> np.uint32(idx)) & np.uint32(1)).astype(bool)
        reached.append(r)
    s = np.zeros(g.shape, dtype=np.int64)
    for j in range(sizeV, m):
        s += reached[j]
    e = np.bitwise_count(g).astype(np.int64)
    counts = np.bincount(e * (sizeU + 1) + s, minlength=(M + 1) * (sizeU + 1)).reshape(M + 1, sizeU + 1)
    _enum_cache[key] = counts
    return counts


def exhaustive_upset_distribution(sizeV: int, sizeU: int, q) -> list[Fraction]:
    """Exact law of ``|U_P[V] & U|`` by enumerating every graph on ``V u U``.

    Labels ``1..|V|`` form ``V`` and the rest ``U``; every vertex pair is a
    potential edge, present with probability ``1 - q``.
    """
    m = sizeV + sizeU
    if sizeV < 1 or sizeU < 0:
        raise ValueError("need sizeV >= 1 and sizeU >= 0")
    if m > EXHAUSTIVE_MAX_VERTICES:
        raise ValueError(f"exhaustive mode allows at most {EXHAUSTIVE_MAX_VERTICES} vertices")
    q = Fraction(q)
    p = 1 - q
    counts = _enumerate_counts(sizeV, sizeU)
    M = counts.shape[0] - 1
    weights = [p ** e * q ** (M - e) for e in range(M + 1)]
    return [sum((int(counts[e, s]) * weights[e] for e in range(M + 1)), Fraction(0)) for s in range(sizeU + 1)]


def sample_upset_sizes(sizeV: int, sizeU: int, q: float, trials: int, rng: np.random.Generator) -> np.ndarray:
    m = sizeV + sizeU
    reached = np.zeros((trials, m), dtype=bool)
    reached[:, :sizeV] = True
    p = 1 - float(q)
    for j in range(sizeV, m):
        hit = rng.random((trials, j)) < p
        reached[:, j] = (hit & reached[:, :j]).any(axis=1)
    return reached[:, sizeV:].sum(axis=1)


def verify_pmf(sizeV: int, sizeU: int, q, mode: str = "exhaustive", trials: int = 100_000,
               seed: int = 0) -> PmfReport:
    """Compare the closed-form up-set law with enumeration or simulation."""
    if mode == "exhaustive":
        qf = Fraction(q)
        obs = exhaustive_upset_distribution(sizeV, sizeU, qf)
        exp = upset_distribution(sizeU, sizeV, qf, exact=True)
        err = max(abs(float(a - b)) for a, b in zip(obs, exp))
        return PmfReport(sizeV, sizeU, qf, mode, obs, exp, err, exact_match=obs == exp)
    if mode != "montecarlo":
        raise ValueError(f"unknown mode {mode!r}")
    sizes = sample_upset_sizes(sizeV, sizeU, float(q), trials, trial_rng(seed))
    obs_counts = np.bincount(sizes, minlength=sizeU + 1).astype(float)
    exp = np.array(upset_distribution(sizeU, sizeV, float(q)))
    exp_counts = exp * trials
    # pool sparse bins so every expected count is at least 5
    keep = exp_counts >= 5
    o = list(obs_counts[keep]) + ([obs_counts[~keep].sum()] if (~keep).any() else [])
    e = list(exp_counts[keep]) + ([exp_counts[~keep].sum()] if (~keep).any() else [])
    if len(o) > 1:
        e = np.array(e) * (sum(o) / sum(e))
        chi2, pval = stats.chisquare(o, e)
    else:
        chi2, pval = 0.0, 1.0
    obs = list(obs_counts / trials)
    err = float(np.max(np.abs(obs_counts / trials - exp)))
    return PmfReport(sizeV, sizeU, float(q), mode, obs, list(exp), err, chi2=float(chi2), pvalue=float(pval))


# ---------------------------------------------------------------- plot data

PLOT_KINDS = ("bipartite-lower", "gnp-lower", "dim-vs-c", "pmf")
PLOT_COLUMNS = {
    "bipartite-lower": ["c", "value"],
    "gnp-lower": ["c", "value", "xi", "beta"],
    "dim-vs-c": ["c", "trials", "mean_dimension", "stderr", "min", "max", "exceeded"],
    "pmf": ["s", "probability"],
}


def parse_range(text: str) -> tuple[float, float, float]:
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"range must look like a:b:step, got {text!r}") from exc
    if step <= 0 or b < a:
        raise ValueError("need a <= b and step > 0")
    return a, b, step


def grid(a: float, b: float, step: float) -> list[float]:
    k = int(math.floor((b - a) / step + 1e-9))
    return [round(a + i * step, 10) for i in range(k + 1)]


def plot_rows(kind: str, **params) -> list[dict[str, Any]]:
    if kind == "bipartite-lower":
        a, b, step = params.get("c_range", (2.0, 30.0, 0.1))
        return [{"c": c, "value": bipartite_lower_curve(c)} for c in grid(a, b, step)]
    if kind == "gnp-lower":
        a, b, step = params.get("c_range", (10.5, 49.5, 0.5))
        rows = []
        for c in grid(a, b, step):
            res = gnp_lower_curve(c, params.get("xi_rule", "inv15log"))
            rows.append({"c": c, "value": res.bound, "xi": res.xi, "beta": res.beta})
        return rows
    if kind == "dim-vs-c":
        a, b, step = params.get("c_range", (0.5, 3.0, 0.5))
        model, n = params.get("model", "gnp"), int(params.get("n", 30))
        trials, seed = int(params.get("trials", 20)), int(params.get("seed", 0))
        k_max = int(params.get("k_max", DEFAULT_KMAX))
        rows = []
        for c in grid(a, b, step):
            cfg = ExperimentConfig(ModelSpec.from_c(model, n, c, seed), trials, ("dim",), k_max=k_max)
            recs = run_experiment(cfg, write=False, spot_check=0).records
            dims = [r.dimension for r in recs if r.dimension is not None]
            m, se = _mean_se([float(d) for d in dims])
            rows.append({"c": c, "trials": trials, "mean_dimension": m, "stderr": se,
                         "min": min(dims, default=None), "max": max(dims, default=None),
                         "exceeded": sum(r.dim_exceeded for r in recs)})
        return rows
    if kind == "pmf":
        sizeU, sizeV, q = int(params["sizeU"]), int(params["sizeV"]), params["q"]
        dist = upset_distribution(sizeU, sizeV, q, exact=bool(params.get("exact", False)))
        return [{"s": s, "probability": v} for s, v in enumerate(dist)]
    raise ValueError(f"unknown plot kind {kind!r}; choose from {', '.join(PLOT_KINDS)}")


def write_csv(rows: list[dict[str, Any]], columns: list[str], path: str | Path | None) -> str:
    """Write rows as CSV to ``path`` (or return the text when ``path`` is None)."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r[k] for k in columns})
    text = buf.getvalue()
    if path is not None:
        path = Path(path)
        if path.parent and not path.parent.exists():
            os.makedirs(path.parent, exist_ok=True)
        path.write_text(text)
    return text


def emit_plot_data(kind: str, path: str | Path | None = None, **params) -> str:
    """Regenerate one plot's data as CSV with the columns in ``PLOT_COLUMNS[kind]``."""
    rows = plot_rows(kind, **params)
    return write_csv(rows, PLOT_COLUMNS[kind], path)


__all__ = [
    "CHECKS", "PLOT_COLUMNS", "PLOT_KINDS", "ConfigError", "DsStructure", "ExperimentConfig",
    "ExperimentResult", "PmfReport", "ReversalStats", "TrialRecord",
    "check_ds_structure", "check_incomparable_density", "check_reversal_capacity", "emit_plot_data",
    "exhaustive_upset_distribution", "greedy_reversing_extension", "load_config", "parse_range",
    "random_topological_extension", "run_experiment", "run_trial", "summarise", "verify_pmf",
]
