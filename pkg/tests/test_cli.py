import json
import os
from pathlib import Path

import numpy as np
import pytest

from ancile.cli import main
from ancile.simulation import parse, sample_alternative
from ancile.stat_core import substream

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("ANCILE_REGEN_GOLDEN") == "1"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_sample(path, spec, n, seed, header=None):
    x = sample_alternative(parse(spec), n, substream(seed, 0))
    lines = ([header] if header else []) + [repr(float(v)) for v in x]
    path.write_text("\n".join(lines) + "\n")
    return path


def _same(a, b, where="$"):
    assert type(a) is type(b) or {type(a), type(b)} <= {int, float}, where
    if isinstance(a, dict):
        assert sorted(a) == sorted(b), f"{where}: keys {sorted(a)} != {sorted(b)}"
        for k in a:
            _same(a[k], b[k], f"{where}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), where
        for i, (u, v) in enumerate(zip(a, b)):
            _same(u, v, f"{where}[{i}]")
    elif isinstance(a, float) or isinstance(b, float):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12), where
    else:
        assert a == b, where


def check_golden(name, payload):
    path = GOLDEN / f"{name}.json"
    if REGEN or not path.exists():
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _same(payload, json.loads(path.read_text()))


@pytest.fixture
def data(tmp_path):
    return write_sample(tmp_path / "x.txt", "normal:0.25,1", 100, 3, header="value")


def test_symmetry_golden(capsys, data):
    code, out, _ = run(capsys, "symmetry", data, "--json")
    doc = json.loads(out)
    assert code == (2 if doc["reject"] else 0)
    for key in ("a_hat", "c_hat", "T_t", "T_s", "T_c"):
        assert key in doc["details"]
    check_golden("symmetry", doc)


def test_symmetry_zero_bracket_is_t_test(capsys, data):
    from scipy import stats
    _, out, _ = run(capsys, "symmetry", data, "--bracket", "0", "0", "--json")
    doc = json.loads(out)
    x = np.loadtxt(data, skiprows=1)
    t = stats.ttest_1samp(x, 0).statistic
    assert doc["statistic"] == pytest.approx(t, rel=1e-12)
    assert doc["reject"] == bool(t > stats.norm.ppf(0.95))


def test_symmetry_mc_calibration(capsys, data):
    code, out, err = run(capsys, "symmetry", data, "--calib", "mc", "--n-calib", "1000",
                         "--seed", "4", "--json")
    doc = json.loads(out)
    assert doc["calibration_id"] == "Tc-n100-N1000-seed4"
    assert "seed=4" in err


def test_calibrate_and_test_golden(capsys, tmp_path):
    table = tmp_path / "ks.json"
    code, out, _ = run(capsys, "calibrate", "--kind", "KS", "--n", 30, "--n-calib", 2000,
                       "--seed", 6, "--out", table, "--json")
    assert code == 0
    doc = json.loads(out)
    doc["path"] = "<path>"
    check_golden("calibrate", doc)
    first = table.read_bytes()
    code, _, err = run(capsys, "calibrate", "--kind", "KS", "--n", 30, "--n-calib", 2000,
                       "--seed", 6, "--out", table)
    assert code == 1 and "--force" in err
    code, _, _ = run(capsys, "calibrate", "--kind", "KS", "--n", 30, "--n-calib", 2000,
                     "--seed", 6, "--out", table, "--force")
    assert code == 0 and table.read_bytes() == first

    sample = write_sample(tmp_path / "y.csv", "chisq:1", 30, 8)
    code, out, _ = run(capsys, "test", sample, "--kind", "KS", "--table", table, "--json")
    doc = json.loads(out)
    assert code == 2 and doc["reject"] and doc["decision"] == "reject"
    check_golden("test", doc)


def test_calibrate_refuses_small(capsys, tmp_path):
    code, _, err = run(capsys, "calibrate", "--kind", "KS", "--n", 30, "--n-calib", 500,
                       "--out", tmp_path / "t.json")
    assert code == 1 and "1000" in err
    assert not (tmp_path / "t.json").exists()


def test_test_table_mismatch(capsys, tmp_path):
    table = tmp_path / "t.json"
    run(capsys, "calibrate", "--kind", "AD", "--n", 20, "--n-calib", 1000, "--out", table)
    sample = write_sample(tmp_path / "y.txt", "normal:0,1", 30, 1)
    code, _, err = run(capsys, "test", sample, "--kind", "AD", "--table", table)
    assert code == 1 and "n=20" in err


def test_test_level(capsys, tmp_path):
    table = tmp_path / "msw.json"
    run(capsys, "calibrate", "--kind", "mSW", "--n", 30, "--n-calib", 20000, "--seed", 1,
        "--out", table)
    rejects = 0
    seeds = range(100)
    for s in seeds:
        sample = write_sample(tmp_path / "s.txt", "normal:5,2", 30, 1000 + s)
        code, _, _ = run(capsys, "test", sample, "--kind", "mSW", "--table", table)
        assert code in (0, 2)
        rejects += code == 2
    assert rejects <= 6


def test_test_auto_calibration_prints_seed(capsys, tmp_path):
    sample = write_sample(tmp_path / "s.txt", "normal:0,1", 25, 2)
    code, out, err = run(capsys, "test", sample, "--kind", "S", "--n-calib", 1000, "--seed", 9)
    assert code in (0, 2)
    assert "seed:        9" in out and "seed=9" in err


def test_bad_data_files(capsys, tmp_path):
    const = tmp_path / "c.txt"
    const.write_text("3\n" * 12)
    code, _, err = run(capsys, "test", const, "--kind", "mSW", "--n-calib", 1000)
    assert code == 1 and "degenerate" in err
    bad = tmp_path / "b.txt"
    bad.write_text("x\n1\n2\n3\n4\n5\nabc\n8\n")
    code, _, err = run(capsys, "test", bad, "--kind", "SW", "--n-calib", 1000)
    assert code == 1 and ":7:" in err and "abc" in err
    two = tmp_path / "two.csv"
    two.write_text("1,2\n3,4\n")
    code, _, err = run(capsys, "symmetry", two)
    assert code == 1 and "single column" in err


def test_dcov_files(capsys, tmp_path):
    x = write_sample(tmp_path / "x.txt", "gamma:2,1", 50, 1)
    y = write_sample(tmp_path / "y.txt", "normal:0,1", 50, 2, header="y")
    code, out, _ = run(capsys, "dcov", "--x", x, "--y", x, "--json")
    assert code == 0 and json.loads(out)["dcor"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "dcov", "--x", x, "--y", y, "--json")
    doc = json.loads(out)
    doc["x"], doc["y"] = "<x>", "<y>"
    check_golden("dcov_files", doc)
    short = write_sample(tmp_path / "s.txt", "normal:0,1", 40, 2)
    code, _, err = run(capsys, "dcov", "--x", x, "--y", short)
    assert code == 1


def test_dcov_lab(capsys):
    code, out, _ = run(capsys, "dcov", "--stat", "min", "--ancillary", "spacings", "--spec",
                       "exp:1", "--n", 30, "--reps", 1000, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["dcor"] < 0.06 and doc["seed"] == 0
    check_golden("dcov_lab", doc)
    code, _, err = run(capsys, "dcov", "--stat", "min", "--spec", "exp:1")
    assert code == 1


def test_power(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "tests": ["SW", "mKS", "Tc"], "n_reps": 500, "n_calib": 1000, "seed": 2,
        "alternatives": [{"label": "beta", "spec": {"beta": {"alpha": 2, "beta": 2}}, "n": 30}]}))
    out_csv = tmp_path / "p.csv"
    code, _, err = run(capsys, "power", cfg, "--out", out_csv, "--format", "csv")
    assert code == 0 and "seed=2" in err
    assert out_csv.read_text().splitlines()[0] == "label,test,rate,se,reps"
    code, out, _ = run(capsys, "power", cfg, "--format", "json")
    check_golden("power", json.loads(out))
    code, out2, _ = run(capsys, "power", cfg, "--format", "json", "--threads", "3")
    assert out2 == out
    code, out3, _ = run(capsys, "power", cfg, "--format", "json", "--seed", "5")
    assert out3 != out


def test_power_malformed_config(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"tests": ["SW"], "alternatives": [
        {"label": "a", "spec": {"gamma": {"shape": -2, "scale": 1}}, "n": 30}]}))
    code, _, err = run(capsys, "power", cfg)
    assert code == 1 and "config.alternatives[0].spec.gamma" in err
    cfg.write_text("{not json")
    code, _, err = run(capsys, "power", cfg)
    assert code == 1 and "JSON" in err


def test_threads_env_does_not_change_output(capsys, data, monkeypatch):
    _, a, _ = run(capsys, "symmetry", data, "--calib", "mc", "--n-calib", "3000", "--json")
    monkeypatch.setenv("ANCILE_THREADS", "4")
    _, b, _ = run(capsys, "symmetry", data, "--calib", "mc", "--n-calib", "3000", "--json")
    assert a == b
