import json
import subprocess
import sys

import pytest

import rgorder.experiments as ex
from rgorder.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_INPUT, EXIT_OK, main
from rgorder.poset import from_dag, is_realiser, parse_realiser, read_poset, write_poset
from rgorder.random_orders import ModelSpec, standard_example


@pytest.fixture
def s3(tmp_path):
    path = tmp_path / "s3.txt"
    write_poset(standard_example(3).poset, path)
    return path


def test_dim_with_witness(s3, tmp_path, capsys):
    out = tmp_path / "R.txt"
    assert main(["dim", str(s3), "--witness", str(out)]) == EXIT_OK
    assert "dimension 3" in capsys.readouterr().out
    assert is_realiser(parse_realiser(out.read_text()), read_poset(s3))


def test_dim_budget_exceeded(s3, capsys):
    assert main(["dim", str(s3), "--kmax", "2"]) == EXIT_BUDGET
    assert "exceeded" in capsys.readouterr().out


def test_dim_bad_input(tmp_path, capsys):
    assert main(["dim", str(tmp_path / "nope.txt")]) == EXIT_INPUT
    bad = tmp_path / "cyc.txt"
    bad.write_text("n 2\n1 2\n2 1\n")
    assert main(["dim", str(bad)]) == EXIT_INPUT
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("kind,extra", [
    ("bipartite-split", ["1\n2\n"]),
    ("general-split", ["3\n"]),
    ("cosparse", [None]),
])
def test_construct(kind, extra, s3, tmp_path):
    args = ["construct", kind, str(s3), "--out", str(tmp_path / "R.txt")]
    if extra[0] is not None:
        (tmp_path / "S.txt").write_text(extra[0])
        args += ["--set", str(tmp_path / "S.txt")]
    assert main(args) == EXIT_OK
    assert is_realiser(parse_realiser((tmp_path / "R.txt").read_text()), read_poset(s3))


def test_construct_general_second_and_unicyclic(tmp_path, capsys):
    crown = tmp_path / "crown.txt"
    write_poset(from_dag(6, [(1, 4), (1, 5), (2, 5), (2, 6), (3, 6), (3, 4)]), crown)
    assert main(["construct", "unicyclic", str(crown)]) == EXIT_OK
    R = parse_realiser(capsys.readouterr().out)
    assert len(R) <= 4 and is_realiser(R, read_poset(crown))
    (tmp_path / "S.txt").write_text("1\n")
    assert main(["construct", "general-split", str(crown), "--part", "second",
                 "--set", str(tmp_path / "S.txt")]) == EXIT_OK


def test_construct_errors(s3, tmp_path):
    s2 = tmp_path / "s2.txt"
    write_poset(standard_example(2).poset, s2)
    assert main(["construct", "unicyclic", str(s2)]) == EXIT_INPUT  # cover graph is a matching
    (tmp_path / "S.txt").write_text("9\n")
    assert main(["construct", "general-split", str(s3), "--set", str(tmp_path / "S.txt")]) == EXIT_INPUT
    (tmp_path / "S.txt").write_text("4\n")  # not in A
    assert main(["construct", "bipartite-split", str(s3), "--set", str(tmp_path / "S.txt")]) == EXIT_INPUT


def test_alpha(capsys):
    assert main(["alpha", "--c", "2"]) == EXIT_OK
    assert float(capsys.readouterr().out) == pytest.approx(1.0, abs=1e-10)
    assert main(["alpha", "--c", "-1"]) == EXIT_INPUT


def test_bound_csv(tmp_path, capsys):
    assert main(["bound", "bipartite", "--c-range", "2:3:0.5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "c,value" and lines[1] == "2.0,0.5" and len(lines) == 4
    out = tmp_path / "g.csv"
    assert main(["bound", "gnp", "--c-range", "30:30:1", "--csv", str(out)]) == EXIT_OK
    assert out.read_text().splitlines()[0] == "c,value,xi,beta"
    assert main(["bound", "bipartite", "--c-range", "1:3:0.5"]) == EXIT_INPUT


def test_pmf(capsys):
    assert main(["pmf", "upset", "--sizeU", "2", "--sizeV", "1", "--q", "1/2", "--exact"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["s,probability", "0,1/4", "1,3/8", "2,3/8"]
    assert main(["pmf", "downset", "--sizeU", "1", "--sizeV", "2", "--q", "0.5"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 4
    assert main(["pmf", "upset", "--sizeU", "2", "--sizeV", "0", "--q", "0.5"]) == EXIT_INPUT
    assert main(["pmf", "upset", "--sizeU", "2", "--sizeV", "1", "--q", "x"]) == EXIT_INPUT


def _config(tmp_path, checks=("dim", "width")):
    cfg = ex.ExperimentConfig(ModelSpec.from_c("gnp", 10, 2.0, 1), 4, checks, output=str(tmp_path / "r"),
                              threshold=3.0)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    return path


def test_experiment_run(tmp_path):
    path = _config(tmp_path)
    assert main(["experiment", "run", str(path)]) == EXIT_OK
    first = (tmp_path / "r.jsonl").read_bytes()
    assert main(["experiment", "run", str(path), "--workers", "2", "--output", str(tmp_path / "w")]) == EXIT_OK
    assert (tmp_path / "w.jsonl").read_bytes() == first
    assert (tmp_path / "w_summary.csv").exists()


def test_experiment_run_errors(tmp_path, monkeypatch):
    assert main(["experiment", "run", str(tmp_path / "missing.json")]) == EXIT_INPUT
    (tmp_path / "bad.json").write_text(json.dumps({"schema": 1, "spec": {"model": "gnp", "n": 5, "p": 0.1},
                                                    "trials": 1, "checks": ["unknown"]}))
    assert main(["experiment", "run", str(tmp_path / "bad.json")]) == EXIT_INPUT
    # a failing deterministic check is a hard failure
    path = _config(tmp_path, checks=("ds_structure",))
    monkeypatch.setattr(ex, "check_ds_structure",
                        lambda *a: ex.DsStructure(dict.fromkeys(ex.GRAPH_CLASSES, 0), False, 1, 1))
    assert main(["experiment", "run", str(path)]) == EXIT_CHECK


def test_verify_pmf(capsys):
    assert main(["experiment", "verify-pmf", "--sizeV", "2", "--sizeU", "3", "--q", "1/3"]) == EXIT_OK
    assert "exact match: True" in capsys.readouterr().out
    assert main(["experiment", "verify-pmf", "--sizeV", "2", "--sizeU", "8", "--q", "0.7",
                 "--mode", "montecarlo", "--trials", "20000"]) == EXIT_OK
    assert main(["experiment", "verify-pmf", "--sizeV", "4", "--sizeU", "4", "--q", "1/2"]) == EXIT_INPUT


def test_plot(tmp_path, capsys):
    assert main(["plot", "bipartite-lower", "--out", str(tmp_path / "b.csv")]) == EXIT_OK
    assert (tmp_path / "b.csv").read_text().splitlines()[1] == "2.0,0.5"
    assert main(["plot", "pmf", "--sizeU", "3", "--sizeV", "1", "--q", "1/2", "--exact"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == "s,probability"
    assert main(["plot", "dim-vs-c", "--c-range", "1:1:1", "--n", "8", "--trials", "3"]) == EXIT_OK
    assert main(["plot", "pmf"]) == EXIT_INPUT


def test_sample(tmp_path):
    out, edges, spec = tmp_path / "p.txt", tmp_path / "e.txt", tmp_path / "s.json"
    assert main(["sample", "--model", "bipartite", "--n", "5", "--c", "2", "--seed", "3",
                 "--out", str(out), "--edges", str(edges), "--spec", str(spec)]) == EXIT_OK
    P = read_poset(out)
    assert P.n == 10 and P.num_relations() == len(edges.read_text().splitlines())
    assert json.loads(spec.read_text())["seed"] == 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rgorder.cli", "alpha", "--c", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and 0 < float(proc.stdout) < 1
