import json

import pytest
from click.testing import CliRunner

from forge.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def _config(tmp_path, **over):
    cfg = {"context": {"p": 5, "d": 2, "e": 1, "K": 4}, "seed": 1, "suites": ["arith", "division"]}
    cfg.update(over)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_run_passes_and_is_deterministic(runner, tmp_path):
    cfg = _config(tmp_path)
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}"
        res = runner.invoke(main, ["run", cfg, "--out", str(out)])
        assert res.exit_code == 0, res.output
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1] and len(outs[0]) == 2


def test_run_config_errors(runner, tmp_path):
    bad = _config(tmp_path, context={"p": 5, "d": 2, "K": 4, "eisenstein": [0]})
    res = runner.invoke(main, ["run", bad])
    assert res.exit_code == 2 and "c_0" in res.output
    path = tmp_path / "noseed.json"
    path.write_text(json.dumps({"context": {"p": 5, "d": 2}, "suites": []}))
    assert runner.invoke(main, ["run", str(path)]).exit_code == 2
    unknown = _config(tmp_path, suites=["nope"])
    assert runner.invoke(main, ["run", unknown]).exit_code == 2
    window = _config(tmp_path, params={"m": 40})
    res = runner.invoke(main, ["run", window])
    assert res.exit_code == 2 and "precision window" in res.output


def test_run_empty_suite_list(runner, tmp_path):
    assert runner.invoke(main, ["run", _config(tmp_path, suites=[])]).exit_code == 0


def test_bch(runner, tmp_path):
    out = tmp_path / "b.json"
    res = runner.invoke(main, ["bch", "--p", "5", "--degree", "5", "--out", str(out)])
    assert res.exit_code == 0, res.output
    data = json.loads(out.read_text())
    assert data["phi"]["xy"] == "1/2" and data["reconstruction"] == {"S_A": True, "S_B": True}
    assert runner.invoke(main, ["bch", "--p", "2", "--degree", "3"]).exit_code == 2


def test_h2(runner):
    res = runner.invoke(main, ["h2", "group", "--n", "2", "--m", "4"])
    assert res.exit_code == 0
    g = json.loads(res.output)
    res = runner.invoke(main, ["h2", "lie", "--n", "2", "--m", "4"])
    assert g["invariants"] == json.loads(res.output)["invariants"]
    assert runner.invoke(main, ["h2", "group", "--n", "1", "--m", "6", "--max-size", "10"]).exit_code == 2


def test_kappa_round_trip(runner, tmp_path):
    path = tmp_path / "k.json"
    res = runner.invoke(main, ["kappa", "build", "--e", "4", "--eisenstein", "cyclotomic",
                               "--s", "2", "--seed", "3", "--out", str(path)])
    assert res.exit_code == 0, res.output
    assert runner.invoke(main, ["kappa", "check", str(path)]).exit_code == 0
    res = runner.invoke(main, ["kappa", "correct", str(path), "--samples", "20"])
    assert res.exit_code == 0 and json.loads(res.output)["witness_failures"] == 0
    data = json.loads(path.read_text())
    kap = data["sequence"]["kappa"]
    n = sorted(kap, key=int)[-1]
    kap[n] = [(x + 1) for x in kap[n]]
    path.write_text(json.dumps(data))
    res = runner.invoke(main, ["kappa", "check", str(path)])
    assert res.exit_code == 1 and "(C1) fails" in res.output
    assert runner.invoke(main, ["kappa", "check", str(tmp_path / "missing.json")]).exit_code == 2


def test_breaks(runner):
    res = runner.invoke(main, ["breaks", "--m", "4", "--samples", "1"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["classes"] and all(c["image_ok"] for c in data["classes"])
    assert runner.invoke(main, ["breaks", "--m", "4", "--chi", "1"]).exit_code == 2
    assert runner.invoke(main, ["breaks", "--m", "4", "--from-level", "7"]).exit_code == 2
