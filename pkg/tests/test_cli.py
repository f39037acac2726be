import json

import numpy as np
import pytest

from specglasso.cli import main
from specglasso.exceptions import InvalidInputError
from specglasso.experiment import (
    ExperimentConfig, estimate_panel, parse_frequency, read_panel, resolve_frequency, run_experiment,
)
from specglasso.simulate import DgpSpec, build_dgp, simulate_path


def test_frequency_parsing():
    assert resolve_frequency("pi/2", 1200)[0] == 300
    assert resolve_frequency("j=5", 100)[0] == 5
    j, om, _ = resolve_frequency("0", 200)
    assert j == 0 and om == 0
    assert parse_frequency("1.5") == ("radians", 1.5)
    assert parse_frequency("j=-3") == ("index", -3)
    with pytest.raises(InvalidInputError):
        parse_frequency("half")


def test_simulate_then_estimate_round_trip(tmp_path, capsys):
    csv_path = tmp_path / "panel.csv"
    assert main(["simulate", "--dgp", "VAR1", "--p", "3", "--n", "300", "--seed", "4", "--out", str(csv_path)]) == 0
    names, X = read_panel(csv_path)
    assert names == ["X1", "X2", "X3"]
    model = build_dgp(DgpSpec("VAR1", 3, 300))
    assert np.array_equal(X, simulate_path(model, 300, seed=4))
    out = tmp_path / "est"
    assert main(["estimate", str(csv_path), "--freq", "pi/2", "--out", str(out)]) == 0
    printed = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert printed["frequency_index"] == 75
    saved = json.loads((out / "estimate.json").read_text())
    mem = estimate_panel(X, "pi/2")["path"].selected.theta
    np.testing.assert_array_equal(np.array(saved["theta_re"]) + 1j * np.array(saved["theta_im"]), mem)
    assert (out / "edges.csv").read_text().startswith("k,l,source,target,abs_partial_coherence")


def test_estimate_bad_files(tmp_path, capsys):
    header = tmp_path / "h.csv"
    header.write_text("a,b,c\n")
    assert main(["estimate", str(header)]) == 2
    assert "no data" in capsys.readouterr().err
    bad = tmp_path / "b.csv"
    bad.write_text("a,b\n1,2\n3,x\n")
    assert main(["estimate", str(bad)]) == 2
    assert "row 3, column 2" in capsys.readouterr().err
    assert main(["estimate", str(tmp_path / "missing.csv")]) == 2
    with pytest.raises(InvalidInputError):
        read_panel(header)


def test_experiment_errors(tmp_path, capsys):
    assert main(["experiment", "--dgp", "VARMA22", "--p", "7", "--out", str(tmp_path / "x")]) == 2
    assert "divisible by 5" in capsys.readouterr().err
    assert main(["experiment", "--lambda-grid", "many", "--out", str(tmp_path / "x")]) == 2
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["--config", str(cfg), "experiment"]) == 2


def _run(out, **kw):
    cfg = ExperimentConfig(dgp=DgpSpec("WhiteNoise", 5, 100), frequencies=["0", "j=7"],
                           methods=["cglasso", "nodewise", "inverse_periodogram"], lambda_grid=(10, 2.0),
                           replicates=2, output_dir=str(out), **kw)
    return run_experiment(cfg)


def test_experiment_outputs_deterministic(tmp_path):
    _run(tmp_path / "a")
    _run(tmp_path / "b", threads=2)
    for name in ("summary.csv", "per_replicate.csv", "config.json"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        if name == "config.json":
            a, b = json.loads(a), json.loads(b)
            for d in (a, b):
                d.pop("threads"), d.pop("output_dir")
        assert a == b, name
    for f in (tmp_path / "a" / "estimates").rglob("*.json"):
        assert f.read_bytes() == (tmp_path / "b" / f.relative_to(tmp_path / "a")).read_bytes()
    assert (tmp_path / "a" / "timings.csv").exists()


def test_cli_experiment_and_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 5, "n": 100, "replicates": 1, "lambda_grid": "8:2"}))
    out = tmp_path / "run"
    assert main(["--config", str(cfg), "experiment", "--freq", "0,pi/2", "--out", str(out)]) == 0
    assert "cglasso" in capsys.readouterr().out
    conf = json.loads((out / "config.json").read_text())
    assert conf["dgp"]["p"] == 5 and conf["replicates"] == 1


def test_cli_benchmark(tmp_path, capsys):
    out = tmp_path / "bench.json"
    assert main(["benchmark", "--p", "20", "--n", "20", "--replicates", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["replicates"] == 3
    assert "mean" in capsys.readouterr().out
