import json

import numpy as np
import pytest
from scipy import stats

from ancile.errors import SpecError
from ancile.simulation import (
    Beta, ChiSq, CriticalValueTable, Diff, Exp, Mixture, Normal, Ratio, Shift, Sum, calibrate,
    calibrate_many, from_json, parse, power_study, sample_alternative, simulate_matrix,
)
from ancile.simulation.alternatives import to_json_string
from ancile.simulation.engine import STANDARD_NORMAL
from ancile.simulation.power import PowerStudyConfig
from ancile.stat_core import substream

BIG = 10**6


def test_normal_mean():
    x = sample_alternative(Normal(1, 3), BIG, substream(1, 0))
    assert abs(x.mean() - 1) < 0.01


def test_exp_diff_symmetric():
    x = sample_alternative(Diff(Exp(1), Exp(1)), BIG, substream(2, 0))
    assert abs(stats.skew(x)) < 0.02


def test_beta_mean():
    x = sample_alternative(Beta(0.5, 0.5), BIG, substream(3, 0))
    assert abs(x.mean() - 0.5) < 0.002


@pytest.mark.parametrize("spec, mean, var", [
    (Exp(3), 1 / 3, 1 / 9),
    (ChiSq(3), 3, 6),
    (parse("gamma:2,1"), 2, 2),
    (parse("uniform:-1,1"), 0, 1 / 3),
    (parse("triangular:-1,1"), 0, 1 / 6),
    (Sum(parse("uniform:-1,1"), Normal(0, 0.5)), 0, 1 / 3 + 0.25),
    (Mixture(0.5, Normal(-1, 1), Normal(1, 1)), 0, 2),
    (parse("exp_of(normal:0.1,2)"), np.exp(0.1 + 2), None),
    (Shift(Diff(Exp(3), Exp(3)), 0.05), 0.05, 2 / 9),
])
def test_moments(spec, mean, var):
    x = sample_alternative(spec, 400_000, substream(4, 1))
    sd = np.sqrt(var) if var is not None else x.std()
    assert abs(x.mean() - mean) < 5 * sd / np.sqrt(x.size)
    if var is not None:
        assert x.var() == pytest.approx(var, rel=0.02)


def test_ratio_of_positive_draws():
    x = sample_alternative(Ratio(Exp(3), ChiSq(3)), 10_000, substream(5, 0))
    assert np.all(np.isfinite(x)) and np.all(x > 0)


def test_parse_and_json_roundtrip():
    texts = ["normal:0,1", "diff(exp:1,exp:1)", "shift(diff(ratio(exp:3,chisq:3),"
             "ratio(exp:3,chisq:3)),0.25)", "mixture(0.5,normal:-1,1,normal:1,1)",
             "scale(beta:2,5,3)", "exp_of(normal:0.1,2)", "sum(uniform:-1,1,normal:0,0.5)"]
    for t in texts:
        spec = parse(t)
        assert from_json(json.loads(to_json_string(spec))) == spec
    assert from_json({"diff": [{"exp": {"rate": 1}}, {"exp": {"rate": 1}}], "shift": 0.5}) == \
        Shift(Diff(Exp(1), Exp(1)), 0.5)


@pytest.mark.parametrize("bad, where", [
    ({"exp": {"rate": -1}}, "spec.exp"),
    ({"beta": {"alpha": 1}}, "spec.beta"),
    ({"nope": {}}, "spec"),
    ({"diff": [{"exp": {"rate": 1}}]}, "spec.diff"),
])
def test_spec_errors_name_the_field(bad, where):
    with pytest.raises(SpecError, match=where.replace(".", r"\.")):
        from_json(bad, "spec")


def test_simulation_reproducible_and_thread_independent():
    spec = parse("diff(gamma:3,1,gamma:3,1)")
    a = simulate_matrix(spec, 30, 5000, 11, threads=1)
    b = simulate_matrix(spec, 30, 5000, 11, threads=4)
    assert np.array_equal(a, b)
    c = simulate_matrix(spec, 30, 100, 11, offset=2100)
    assert np.array_equal(c, a[2100:2200])


def test_ks_critical_value():
    tab = calibrate("KS", 30, 50_000, 2024)
    assert tab.critical_value(0.05) == pytest.approx(0.161, abs=0.002)


def test_calibration_bit_identical_and_roundtrip(tmp_path):
    a = calibrate("mAD", 12, 2000, 5)
    b = calibrate("mAD", 12, 2000, 5, threads=3)
    assert a == b
    assert a.dumps() == b.dumps()
    p = a.save(tmp_path / "t.json")
    assert CriticalValueTable.load(p) == a
    with pytest.raises(FileExistsError):
        a.save(p)


def test_calibrate_many_matches_single():
    many = calibrate_many(["SW", "S", "Tc"], 15, 1000, 8)
    for k in ("SW", "S", "Tc"):
        assert many[k] == calibrate(k, 15, 1000, 8)


def test_calibration_guards():
    from ancile.errors import SampleSizeError
    with pytest.raises(SampleSizeError):
        calibrate("KS", 30, 500, 1)
    with pytest.raises(SampleSizeError):
        calibrate("mSW", 2600, 1000, 1)


def _config(**kw):
    doc = {"tests": ["SW", "mSW", "Tt"], "n_reps": 1000, "n_calib": 2000, "seed": 3,
           "alternatives": [{"label": "null", "spec": {"normal": {"mu": 1, "sigma": 3}}, "n": 20}]}
    doc.update(kw)
    return doc


def test_power_study_rows_and_formats():
    table = power_study(PowerStudyConfig.from_dict(_config()))
    assert [r.test for r in table.rows] == ["SW", "mSW", "Tt"]
    for r in table.rows:
        assert 0 <= r.rate <= 1
        assert r.se == pytest.approx(np.sqrt(r.rate * (1 - r.rate) / r.reps))
    csv_text = table.to_csv()
    assert csv_text.splitlines()[0] == "label,test,rate,se,reps"
    doc = json.loads(table.to_json())
    assert doc["rows"][0].keys() == {"label", "test", "rate", "se", "reps"}
    again = power_study(PowerStudyConfig.from_dict(_config()), threads=4)
    assert again == table


@pytest.mark.parametrize("patch, msg", [
    ({"tests": ["SW", "bogus"]}, r"config\.tests\[1\]"),
    ({"alternatives": [{"label": "x", "spec": {"exp": {"rate": 0}}, "n": 20}]},
     r"config\.alternatives\[0\]\.spec\.exp"),
    ({"alternatives": [{"spec": {"exp": {"rate": 1}}, "n": 2}]}, r"config\.alternatives\[0\]\.n"),
    ({"n_reps": "many"}, r"config\.n_reps"),
    ({"colour": 1}, "unknown field"),
])
def test_config_diagnostics(patch, msg):
    with pytest.raises(SpecError, match=msg):
        PowerStudyConfig.from_dict(_config(**patch))


def test_bundled_configs_load():
    from ancile.cli import load_config
    t1 = load_config("table1")
    assert len(t1.alternatives) == 22 and len(t1.tests) == 9
    assert {c.n for c in t1.alternatives} == {30, 50, 100, 150}
    t2 = load_config("table2")
    assert t2.tests == ("Tt", "Ts", "Tc") and {c.n for c in t2.alternatives} == {100}
    assert t2.n_reps == 10_000


def test_independence_lab_examples():
    from ancile.simulation import independence_lab
    assert independence_lab("min", "spacings", Exp(1), 30, 1000, 0).dcor < 0.06
    assert independence_lab("mean", "residuals", Normal(0, 1), 30, 1000, 0).dcor < 0.06
