import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from rgorder.dimension import exact_dimension
from rgorder.numerics import bipartite_lower_curve, gnp_lower_curve, upset_distribution
from rgorder.poset import Poset, is_linear_extension
from rgorder.random_orders import ModelSpec, ThresholdParams, sample, standard_example, trial_rng
from rgorder.experiments import (
    CHECKS,
    PLOT_COLUMNS,
    ConfigError,
    ExperimentConfig,
    TrialRecord,
    check_ds_structure,
    check_incomparable_density,
    check_reversal_capacity,
    emit_plot_data,
    exhaustive_upset_distribution,
    greedy_reversing_extension,
    load_config,
    parse_range,
    random_topological_extension,
    run_experiment,
    run_trial,
    verify_pmf,
)


def _cfg(tmp_path, **kw):
    base = dict(spec=ModelSpec.from_c("gnp", 12, 2.0, 3), trials=6, checks=("dim", "width"),
                output=str(tmp_path / "run"))
    base.update(kw)
    return ExperimentConfig(**base)


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


# ---------------------------------------------------------------- config

def test_config_round_trip(tmp_path):
    cfg = _cfg(tmp_path, checks=("dim", "ds_structure"), threshold=4.0)
    d = cfg.to_dict()
    assert d["schema"] == 1
    assert ExperimentConfig.from_dict(json.loads(json.dumps(d))) == cfg
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(d))
    assert load_config(path) == cfg


@pytest.mark.parametrize("bad", [
    dict(trials=0),
    dict(checks=()),
    dict(checks=("dim", "nonsense")),
    dict(checks=("isolated_edges",)),  # bipartite only
    dict(workers=0),
])
def test_config_rejects(tmp_path, bad):
    with pytest.raises(ConfigError):
        _cfg(tmp_path, **bad)


def test_config_schema_and_io_errors(tmp_path):
    d = _cfg(tmp_path).to_dict()
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({k: v for k, v in d.items() if k != "schema"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(d | {"schema": 2})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(d | {"bogus": 1})
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.json")
    assert set(CHECKS) >= {"dim", "width"}


# ---------------------------------------------------------------- runs

def test_empty_gnp_gives_antichain(tmp_path):
    cfg = _cfg(tmp_path, spec=ModelSpec("gnp", 6, 0.0), trials=1,
               checks=("dim", "width", "ds_structure", "incomparable_density"), threshold=2.0, xi=0.2)
    res = run_experiment(cfg)
    rec = res.records[0]
    assert rec.dimension == 2 and rec.width == 6 and rec.incomparable_pair_count == 15
    assert rec.check_outcomes["ds_structure"]["status"] == "pass"
    assert rec.check_outcomes["incomparable_density"]["value"] == 1.0
    assert res.hard_failures == 0


def test_records_and_summary_written(tmp_path):
    res = run_experiment(_cfg(tmp_path))
    lines = res.records_path.read_text().splitlines()
    assert len(lines) == 6
    assert [TrialRecord.from_json(ln).to_json() for ln in lines] == lines
    rows = _csv(res.summary_path.read_text())
    assert list(rows[0]) == ["metric", "count", "mean", "stderr"]
    metrics = {r["metric"] for r in rows}
    assert {"dimension", "width"} <= metrics
    hist = [r for r in rows if r["metric"].startswith("dimension=")]
    assert math.isclose(sum(float(r["mean"]) for r in hist), 1.0)


def test_rerun_is_byte_identical(tmp_path):
    a = run_experiment(_cfg(tmp_path, output=str(tmp_path / "a")))
    b = run_experiment(_cfg(tmp_path, output=str(tmp_path / "b")))
    c = run_experiment(_cfg(tmp_path, output=str(tmp_path / "c")), workers=2)
    texts = {p.read_bytes() for p in (a.records_path, b.records_path, c.records_path)}
    assert len(texts) == 1
    assert a.summary_path.read_bytes() == c.summary_path.read_bytes()


def test_records_recomputable_from_seed(tmp_path):
    cfg = _cfg(tmp_path, spec=ModelSpec.from_c("bipartite", 6, 3.0, 11), trials=40,
               checks=("dim", "width", "isolated_edges", "incomparable_density"))
    res = run_experiment(cfg, write=False)
    assert res.spot_checked == 2
    for rec in res.records[::7]:
        P = sample(cfg.spec, rec.trial).poset
        assert rec.dimension == exact_dimension(P).dimension
        assert rec.trial_seed == [11, rec.trial]
    dims = [r.dimension for r in res.records]
    assert all(d is not None and 2 <= d <= 6 for d in dims)


def test_large_bipartite_run_skips_dimension(tmp_path):
    cfg = _cfg(tmp_path, spec=ModelSpec.from_c("bipartite", 50, 3.0, 1), trials=200, checks=("dim", "width"))
    res = run_experiment(cfg, write=False)
    assert all(r.check_outcomes["dim"]["status"] == "skipped" for r in res.records)
    assert all(r.width is not None and r.width >= 50 for r in res.records)
    # the width column reproduces on a fresh serial rerun
    again = [run_trial(cfg, t).width for t in range(0, 200, 37)]
    assert again == [res.records[t].width for t in range(0, 200, 37)]


def test_run_experiment_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ConfigError):
        run_experiment(_cfg(tmp_path, output=str(blocker / "sub" / "run")))


def test_sparse_gnp_dimension_small(tmp_path):
    cfg = _cfg(tmp_path, spec=ModelSpec.from_c("gnp", 200, 0.8, 5), trials=20, checks=("dim",), dim_max_n=200)
    res = run_experiment(cfg, write=False)
    assert all(r.dimension is not None and r.dimension <= 4 for r in res.records)


# ---------------------------------------------------------------- structural checks

def test_ds_structure_examples():
    empty = sample(ModelSpec("gnp", 8, 0.0))
    ds = check_ds_structure(empty.poset, empty.edges, ThresholdParams(1.0, mode="gnp", threshold=2))
    assert ds.cover_subgraph_ok and ds.S_size == 0 and sum(ds.classes.values()) == 0
    chain = sample(ModelSpec("gnp", 6, 1.0))
    ds = check_ds_structure(chain.poset, chain.edges, ThresholdParams(1.0, mode="gnp", threshold=6))
    assert ds.S_size == 6 and ds.D_size == 6
    assert ds.classes["tree"] == 1 and ds.cover_subgraph_ok


def test_ds_structure_mode_mismatch():
    drawn = sample(ModelSpec("bipartite", 4, 0.5))
    with pytest.raises(TypeError):
        check_ds_structure(drawn.order, drawn.edges, ThresholdParams(1.0, mode="gnp"))
    g = sample(ModelSpec("gnp", 4, 0.5))
    with pytest.raises(TypeError):
        check_ds_structure(g.poset, g.edges, ThresholdParams(1.0))


def test_ds_structure_cover_edges_are_sampled():
    for t in range(10):
        drawn = sample(ModelSpec.from_c("gnp", 300, 2.0, 2), t)
        ds = check_ds_structure(drawn.poset, drawn.edges, ThresholdParams(2.0, mode="gnp", threshold=8))
        assert ds.cover_subgraph_ok and ds.D_size >= ds.S_size


def test_random_extensions_are_linear():
    P = sample(ModelSpec.from_c("gnp", 40, 3.0, 1)).poset
    rng = trial_rng(4)
    for _ in range(20):
        assert is_linear_extension(random_topological_extension(P, rng), P)
    order = sample(ModelSpec("bipartite", 8, 0.4, 2)).order
    assert is_linear_extension(greedy_reversing_extension(order), order.poset)


def test_reversal_capacity_examples():
    full = sample(ModelSpec("bipartite", 5, 1.0)).order
    rs = check_reversal_capacity(full, 20, 0.1)
    assert rs.max_reversed == 0 and rs.adversarial == 0 and rs.exceed_fraction == 0
    empty = sample(ModelSpec("bipartite", 2, 0.0)).order
    rs = check_reversal_capacity(empty, 50, 0.1)
    assert rs.bound == math.inf and 0 <= rs.max_reversed <= 4 and rs.adversarial == 4
    # S_3: greedy puts all b first except those forced later
    rs = check_reversal_capacity(standard_example(3), 10, 0.1, c=2.0)
    assert rs.bound == pytest.approx(2 * 1.1 * 1.0 * 9)


def test_reversal_capacity_mode_mismatch():
    with pytest.raises(TypeError):
        check_reversal_capacity(Poset.chain(3), 5, 0.1)


def test_reversal_capacity_desk_scale():
    order = sample(ModelSpec.from_c("bipartite", 300, 4.0, 0)).order
    rs = check_reversal_capacity(order, 1000, 0.1, trial_rng(0), c=4.0)
    assert rs.exceed_fraction == 0
    assert rs.max_reversed <= rs.adversarial < rs.bound


def test_incomparable_density_examples():
    assert check_incomparable_density(sample(ModelSpec("bipartite", 5, 0.0)).order, "bipartite") == 1.0
    assert check_incomparable_density(sample(ModelSpec("bipartite", 5, 1.0)).order, "bipartite") == 0.0
    assert check_incomparable_density(Poset.antichain(10), "gnp", 0.2) == 1.0
    assert check_incomparable_density(Poset.chain(10), "gnp", 0.2) == 0.0
    with pytest.raises(TypeError):
        check_incomparable_density(Poset.chain(4), "bipartite")
    with pytest.raises(ValueError):
        check_incomparable_density(Poset.chain(4), "other")


def test_incomparable_density_gnp_desk_scale():
    spec = ModelSpec.from_c("gnp", 3000, 2.0, 0)
    ratios = [check_incomparable_density(sample(spec, t).poset, "gnp", 0.1) for t in range(20)]
    assert all(0.9 <= r <= 1.0 for r in ratios)


# ---------------------------------------------------------------- pmf verification

def test_verify_pmf_single_edge():
    rep = verify_pmf(1, 1, Fraction(1, 4))
    assert rep.exact_match and rep.observed == [Fraction(1, 4), Fraction(3, 4)]


def test_verify_pmf_enumeration_examples():
    rep = verify_pmf(1, 2, Fraction(1, 2))
    assert rep.exact_match and rep.max_abs_error == 0
    assert rep.observed == [Fraction(1, 4), Fraction(3, 8), Fraction(3, 8)]
    rep = verify_pmf(2, 4, Fraction(1, 3))
    assert rep.exact_match and sum(rep.observed) == 1


def test_exhaustive_limits():
    with pytest.raises(ValueError):
        exhaustive_upset_distribution(4, 4, Fraction(1, 2))
    with pytest.raises(ValueError):
        verify_pmf(2, 2, 0.5, mode="other")


def test_verify_pmf_monte_carlo():
    rep = verify_pmf(3, 20, 0.9, mode="montecarlo", trials=50_000, seed=3)
    assert rep.pvalue > 1e-3 and rep.max_abs_error < 0.01
    assert rep.expected == pytest.approx(upset_distribution(20, 3, 0.9))


# ---------------------------------------------------------------- plot data

def test_bipartite_plot_data(tmp_path):
    text = emit_plot_data("bipartite-lower", tmp_path / "b.csv", c_range=(2.0, 30.0, 0.1))
    rows = _csv((tmp_path / "b.csv").read_text())
    assert _csv(text) == rows and list(rows[0]) == PLOT_COLUMNS["bipartite-lower"]
    assert (float(rows[0]["c"]), float(rows[0]["value"])) == (2.0, 0.5)
    vals = [float(r["value"]) for r in rows]
    assert len(rows) == 281 and all(a < b for a, b in zip(vals, vals[1:]))
    assert float(rows[-1]["value"]) == pytest.approx(bipartite_lower_curve(30.0), abs=1e-12)


def test_gnp_plot_data_recomputes():
    rows = _csv(emit_plot_data("gnp-lower", c_range=(10.5, 12.5, 1.0)))
    assert [float(r["c"]) for r in rows] == [10.5, 11.5, 12.5]
    for r in rows:
        again = gnp_lower_curve(float(r["c"]))
        assert float(r["value"]) == pytest.approx(again.bound, rel=1e-12)
        assert float(r["xi"]) == pytest.approx(1 / (15 * math.log(float(r["c"]))))


def test_pmf_and_dim_plot_data():
    rows = _csv(emit_plot_data("pmf", sizeU=4, sizeV=2, q=Fraction(1, 2), exact=True))
    assert [r["s"] for r in rows] == ["0", "1", "2", "3", "4"]
    assert sum(Fraction(r["probability"]) for r in rows) == 1
    rows = _csv(emit_plot_data("dim-vs-c", c_range=(0.5, 1.0, 0.5), n=10, trials=4))
    assert list(rows[0]) == PLOT_COLUMNS["dim-vs-c"] and len(rows) == 2
    assert all(1 <= float(r["mean_dimension"]) <= 4 for r in rows)


def test_plot_errors():
    with pytest.raises(ValueError):
        emit_plot_data("histogram")
    with pytest.raises(ValueError):
        parse_range("2:1:0.1")
    with pytest.raises(ValueError):
        parse_range("2-30")
    assert parse_range("2:30:0.1") == (2.0, 30.0, 0.1)
