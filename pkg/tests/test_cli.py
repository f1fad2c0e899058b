import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from mdiffnet import io
from mdiffnet.cli import main
from mdiffnet.covariance import sample_covariance
from mdiffnet.oracle import lambda_max

SIM_FILES = ["x.csv", "y.csv", "truth.json", "omega_x.csv", "omega_y.csv"]


def simulate(out, *extra, seed=3):
    argv = ["simulate", "--kind", "er", "--p", "10", "--m", "2", "--n", "100",
            "--delta-prob", "0.2", "--seed", str(seed), "--out", str(out), *extra]
    assert main(argv) == 0
    return out


@pytest.fixture(scope="module")
def sim(tmp_path_factory):
    return simulate(tmp_path_factory.mktemp("sim"))


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    return err[0]


def test_simulate_outputs(sim):
    rows = read_csv(sim / "x.csv")
    assert len(rows) == 101 and len(rows[0]) == 20
    assert rows[0][:3] == ["n1_a1", "n1_a2", "n2_a1"]
    truth = io.read_json(sim / "truth.json")
    assert {"edges", "gamma", "spec", "seed"} <= truth.keys()
    manifest = io.read_json(sim / "manifest.json")
    assert manifest["command"] == "simulate"
    assert manifest["seed"] == 3
    assert all(Path(f).exists() for f in manifest["outputs"])
    om = io.read_matrix(sim / "omega_x.csv")
    assert om.shape == (20, 20)


def test_simulate_byte_identical(tmp_path, sim):
    again = simulate(tmp_path / "again")
    for f in SIM_FILES:
        assert (again / f).read_bytes() == (sim / f).read_bytes()


def test_simulate_zero_delta(tmp_path):
    out = tmp_path / "z"
    assert main(["simulate", "--p", "6", "--m", "2", "--n", "10", "--delta-prob", "0",
                 "--seed", "1", "--out", str(out)]) == 0
    assert io.read_json(out / "truth.json")["edges"] == []


def test_simulate_draws_and_records_seed(tmp_path):
    out = tmp_path / "s"
    assert main(["simulate", "--p", "5", "--m", "1", "--n", "5", "--out", str(out)]) == 0
    assert isinstance(io.read_json(out / "manifest.json")["seed"], int)


def test_simulate_ba(tmp_path):
    out = tmp_path / "ba"
    assert main(["simulate", "--kind", "ba", "--p", "12", "--m", "2", "--n", "20",
                 "--seed", "4", "--out", str(out)]) == 0
    assert len(io.read_json(out / "truth.json")["graph_edges"]) == 12


def test_unwritable_out(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["simulate", "--p", "4", "--m", "1", "--n", "5", "--seed", "0",
                 "--out", str(blocker / "sub")])
    assert code != 0
    line = error_line(capsys)
    assert line.startswith("mdiffnet: error[io]:") and "sub" in line


def test_estimate_outputs(sim, tmp_path):
    out = tmp_path / "e"
    assert main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2",
                 "--lambda", "0.1", "--check-kkt", "--out", str(out)]) == 0
    delta = io.read_matrix(out / "delta.csv")
    np.testing.assert_array_equal(delta, delta.T)
    rep = io.read_json(out / "report.json")
    assert rep["lambda"] == 0.1 and rep["report"]["solver"] == "admm"
    kkt = io.read_json(out / "kkt.json")
    assert kkt["max_inactive_violation"] >= 0
    edges = read_csv(out / "edges.csv")
    assert edges[0] == ["k", "l", "norm"]
    assert len(edges) - 1 == rep["n_edges"]
    manifest = io.read_json(out / "manifest.json")
    assert sorted(manifest["outputs"])[0].endswith("delta.csv")


def test_estimate_identical_inputs(sim, tmp_path):
    out = tmp_path / "same"
    assert main(["estimate", str(sim / "x.csv"), str(sim / "x.csv"), "--m", "2",
                 "--lambda", "0.01", "--out", str(out)]) == 0
    assert read_csv(out / "edges.csv") == [["k", "l", "norm"]]


def test_estimate_above_lambda_max(sim, tmp_path):
    sx = sample_covariance(io.read_dataset(sim / "x.csv", 2))
    sy = sample_covariance(io.read_dataset(sim / "y.csv", 2))
    lam = lambda_max(sx, sy, 2)
    for solver in ("admm", "pgd"):
        out = tmp_path / solver
        assert main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2",
                     "--lambda", repr(lam), "--solver", solver, "--out", str(out)]) == 0
        assert read_csv(out / "edges.csv") == [["k", "l", "norm"]]


def test_estimate_bic_records_table(sim, tmp_path):
    out = tmp_path / "bic"
    assert main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2",
                 "--bic", "--grid-size", "4", "--out", str(out)]) == 0
    rep = io.read_json(out / "report.json")
    assert len(rep["bic"]["rows"]) == 4
    assert rep["lambda"] == rep["bic"]["best_lambda"]
    assert "scaling" in rep["bic"]


def test_estimate_sa_and_pgd(sim, tmp_path):
    out = tmp_path / "sa"
    assert main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2", "--sa",
                 "--solver", "pgd", "--lambda", "0.05", "--out", str(out)]) == 0
    rep = io.read_json(out / "report.json")
    assert rep["mode"] == "sa" and rep["report"]["solver"] == "pgd"


def test_estimate_lambda_xor_bic(sim, tmp_path, capsys):
    code = main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2",
                 "--out", str(tmp_path / "n")])
    assert code == 2
    assert error_line(capsys).startswith("mdiffnet: error[argument]:")


def test_estimate_parse_error_has_line(sim, tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    lines = (sim / "x.csv").read_text().splitlines()
    lines[3] = lines[3].replace(",", ",abc,", 1)
    bad.write_text("\n".join(lines) + "\n")
    code = main(["estimate", str(bad), str(sim / "y.csv"), "--m", "2",
                 "--lambda", "0.1", "--out", str(tmp_path / "o")])
    assert code == 4
    line = error_line(capsys)
    assert line.startswith("mdiffnet: error[parse]:") and "bad.csv:4" in line


def test_estimate_m_not_dividing(sim, tmp_path, capsys):
    code = main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "3",
                 "--lambda", "0.1", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error[argument]" in error_line(capsys)


def test_estimate_missing_file(tmp_path, capsys):
    code = main(["estimate", str(tmp_path / "nope.csv"), str(tmp_path / "nope.csv"),
                 "--m", "1", "--lambda", "0.1", "--out", str(tmp_path / "o")])
    assert code == 3
    assert "error[io]" in error_line(capsys)


def test_estimate_edges_deterministic(sim, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"d{i}"
        assert main(["estimate", str(sim / "x.csv"), str(sim / "y.csv"), "--m", "2",
                     "--lambda", "0.08", "--out", str(out)]) == 0
        outs.append((out / "edges.csv").read_bytes())
    assert outs[0] == outs[1]


def _roc(sim, out, *extra):
    assert main(["roc", str(sim / "x.csv"), str(sim / "y.csv"), str(sim / "truth.json"),
                 "--m", "2", "--out", str(out), *extra]) == 0
    rows = read_csv(out / "roc.csv")
    assert rows[0] == ["lambda", "tpr", "fpr", "f1"]
    return np.array(rows[1:], dtype=float)


def test_roc_single_lambda(sim, tmp_path):
    assert _roc(sim, tmp_path / "r1", "--lambdas", "0.1").shape == (1, 4)


def test_roc_grid_contains_lambda_max(sim, tmp_path):
    rows = _roc(sim, tmp_path / "r2", "--grid-size", "6")
    assert np.all(np.diff(rows[:, 0]) < 0)
    assert rows[0, 1] == 0.0 and rows[0, 2] == 0.0


def test_roc_admm_vs_pgd(sim, tmp_path):
    grid = ["--grid-size", "10", "--lambda-min-ratio", "0.05"]
    a = _roc(sim, tmp_path / "ra", *grid, "--solver", "admm")
    b = _roc(sim, tmp_path / "rb", *grid, "--solver", "pgd")
    np.testing.assert_array_equal(a[:, 0], b[:, 0])
    assert np.max(np.abs(a[:, 3] - b[:, 3])) <= 0.1


def test_roc_bad_truth(sim, tmp_path, capsys):
    bad = tmp_path / "t.json"
    bad.write_text("{\"edges\": 5}")
    code = main(["roc", str(sim / "x.csv"), str(sim / "y.csv"), str(bad), "--m", "2",
                 "--out", str(tmp_path / "o")])
    assert code == 4
    assert "error[parse]" in error_line(capsys)


def _write_feature(path, values):
    header = [f"site{j + 1}" for j in range(values.shape[1])]
    io.write_rows(path, header, [[float(v) for v in row] for row in values])


def test_preprocess(tmp_path, rng):
    T = 30
    _write_feature(tmp_path / "pm.csv", rng.uniform(1, 50, size=(T, 3)))
    _write_feature(tmp_path / "temp.csv", rng.uniform(-10, 30, size=(T, 3)))
    cfg = {"features": [{"name": "pm", "path": "pm.csv"},
                        {"name": "temp", "path": "temp.csv", "offset": 273.15,
                         "columns": ["site1", "site2", "site3"]}],
           "positivity_floor": 1e-6}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    out = tmp_path / "out"
    assert main(["preprocess", "--config", str(tmp_path / "cfg.json"), "--out", str(out)]) == 0
    d = io.read_dataset(out / "x.csv", 3)
    assert (d.n, d.p) == (T - 1, 2)
    np.testing.assert_allclose(np.mean(d.samples ** 2, axis=0), 1.0, atol=1e-10)
    assert io.read_json(out / "manifest.json")["command"] == "preprocess"


def test_preprocess_constant_feature(tmp_path, capsys):
    _write_feature(tmp_path / "c.csv", np.full((10, 2), 4.0))
    (tmp_path / "cfg.json").write_text(json.dumps({"features": [{"name": "wind", "path": "c.csv"}]}))
    code = main(["preprocess", "--config", str(tmp_path / "cfg.json"), "--out", str(tmp_path / "o")])
    assert code == 6
    line = error_line(capsys)
    assert "error[degenerate]" in line and "wind" in line and "scaling" in line


def test_preprocess_negative_value(tmp_path, capsys):
    _write_feature(tmp_path / "n.csv", np.array([[1.0], [2.0], [-1.0], [3.0]]))
    (tmp_path / "cfg.json").write_text(json.dumps({"features": [{"name": "rain", "path": "n.csv"}]}))
    code = main(["preprocess", "--config", str(tmp_path / "cfg.json"), "--out", str(tmp_path / "o")])
    assert code == 5
    assert "rain" in error_line(capsys)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mdiffnet", "estimate", "a.csv", "b.csv",
                           "--m", "1", "--lambda", "1", "--out", str(tmp_path)],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 3
    assert proc.stderr.count("\n") == 1 and proc.stderr.startswith("mdiffnet: error[io]")
