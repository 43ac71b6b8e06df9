import json
import math

import pytest

from levykato import SpecError
from levykato import schema
from levykato.cli import RunConfig, main


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_parse_spec_families():
    assert schema.parse_spec({"family": "stable", "alpha": 1.5}).dimension == 1
    assert schema.parse_spec({"family": "brownian", "dimension": 3}).dimension == 3
    assert schema.parse_spec({"family": "cp", "locations": [1.0], "masses": [2.0]}) is not None


def test_parse_spec_kinds():
    from levykato.classifier import classify
    t = schema.parse_spec({"kind": "triplet", "gamma": 1.0,
                           "nu": {"type": "power_density",
                                  "pieces": [{"coef": 1.0, "exponent": -1.5, "a": 0.0, "b": 1.0}]}})
    assert classify(t).label == classify(schema.parse_spec({"family": "drift_plus_jumps"})).label
    iso = schema.parse_spec({"kind": "triplet", "gamma": [0.0, 0.0], "nu": {"type": "stable", "alpha": 1.2}})
    assert iso.dimension == 2
    sub = schema.parse_spec({"kind": "subordinator", "exponent": "log", "alpha": 0.5})
    assert sub.phi.phi(2.0) == pytest.approx(schema.parse_spec({"family": "log_sub", "alpha": 0.5}).phi.phi(2.0))
    prod = schema.parse_spec({"kind": "product", "components": [{"family": "brownian"},
                                                               {"kind": "family", "family": "drift", "velocity": 1}]})
    assert prod.dimension == 2


def test_family_aliases():
    assert schema.parse_spec({"family": "example511", "alpha": 1.5}).name == "dyadic_jumps"
    a = schema.parse_spec({"family": "shifted_stable_subordinator", "alpha": 0.5})
    b = schema.parse_spec({"family": "shifted_stable_sub", "alpha": 0.5})
    assert a.phi.phi(3.0) == pytest.approx(b.phi.phi(3.0))


@pytest.mark.parametrize("obj", [
    {"kind": "levy", "family": "brownian"},
    {"kind": "triplet", "nu": {"type": "atoms", "locations": [1.0]}},
    {"kind": "triplet", "A": -1.0},
    {"kind": "triplet", "nu": {"type": "power_density", "pieces": [{"coef": 1.0, "exponent": -3.5, "a": 0, "b": 1}]}},
    {"kind": "subordinator", "exponent": "stable", "alpha": 1.0},
    {"kind": "product", "components": [{"family": "brownian"}]},
    {"kind": "product", "components": [{"family": "brownian", "dimension": 2}, {"family": "brownian"}]},
])
def test_parse_spec_kind_errors(obj):
    with pytest.raises(SpecError):
        schema.parse_spec(obj)


@pytest.mark.parametrize("obj", [
    {"family": "levy"},
    {"family": "stable"},
    {"family": "stable", "alpha": 1.5, "colour": "red"},
    {"family": "stable", "alpha": 3.0},
    {"family": "stable", "alpha": True},
    {"family": "brownian", "schema_version": 2},
    [1, 2],
])
def test_parse_spec_errors(obj):
    with pytest.raises(SpecError):
        schema.parse_spec(obj)


def test_parse_potential():
    q = schema.parse_potential({"type": "power", "p": 0.5, "side": "right"})
    assert q.params["p"] == 0.5
    assert schema.parse_potential({"type": "space_time", "p": 0.5}).dimension == 2
    with pytest.raises(SpecError):
        schema.parse_potential({"type": "power"})
    with pytest.raises(SpecError):
        schema.parse_potential({"type": "space_time"})


def test_dumps_is_deterministic_and_versioned():
    text = schema.dumps({"b": math.inf, "a": [1.0, float("nan")]})
    obj = json.loads(text)
    assert obj == {"schema_version": 1, "a": [1.0, "nan"], "b": "inf"}
    assert text == schema.dumps({"a": [1.0, float("nan")], "b": math.inf})


def test_run_config_rejects_unknown_fields():
    assert RunConfig.from_dict({"eps_rel": 1e-4, "lam_pair": [0.5, 2.0], "seed": 3}).seed == 3
    with pytest.raises(SpecError):
        RunConfig.from_dict({"bogus": 1})
    with pytest.raises(SpecError):
        RunConfig.from_dict({"mc_paths": 0})


def test_classify_command(tmp_path, capsys):
    spec = _write(tmp_path, "s.json", {"family": "stable", "alpha": 1.5})
    assert main(["classify", "--spec", spec]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["label"] == "C" and out["schema_version"] == 1


def test_input_errors_exit_one(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", {"family": "stable"})
    assert main(["classify", "--spec", bad]) == 1
    assert main(["classify", "--spec", str(tmp_path / "missing.json")]) == 1
    (tmp_path / "broken.json").write_text("{")
    assert main(["classify", "--spec", str(tmp_path / "broken.json")]) == 1
    assert "input error" in capsys.readouterr().err


def test_kernel_command_csv(tmp_path):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    out = tmp_path / "k.csv"
    assert main(["kernel", "--spec", spec, "--halfwidth", "2", "--points", "5", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "x,value,err" and len(rows) == 6
    x, v, _ = rows[3].split(",")
    assert float(x) == 0.0 and float(v) == pytest.approx(0.5, abs=1e-6)


def test_kato_check_command(tmp_path, capsys):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    q = _write(tmp_path, "q.json", {"type": "comb"})
    assert main(["kato-check", "--spec", spec, "--q", q]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["membership_K"], out["membership_calK"]) == ("In", "Out")


def test_kato_check_needs_inputs(capsys):
    assert main(["kato-check"]) == 1


def test_simulate_is_byte_reproducible(tmp_path):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    q = _write(tmp_path, "q.json", {"type": "indicator", "a": 0.0, "b": 1.0})
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["simulate", "--spec", spec, "--q", q, "--paths", "500", "--seed", "9", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    obj = json.loads(outs[0])
    assert obj["functional"] == "time" and obj["n_paths"] == 500


def test_simulate_space_functional(tmp_path, capsys):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    q = _write(tmp_path, "q.json", {"type": "constant", "c": 1.0})
    assert main(["simulate", "--spec", spec, "--q", q, "--paths", "200", "--lam", "2"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["functional"] == "space"
    assert obj["value"] == pytest.approx((1.0 - math.exp(-2.0 * obj["horizon"])) / 2.0, rel=1e-12)


def test_simulate_short_horizon_is_an_input_error(tmp_path):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    q = _write(tmp_path, "q.json", {"type": "constant"})
    assert main(["simulate", "--spec", spec, "--q", q, "--paths", "50", "--lam", "1", "--horizon", "1"]) == 1


def test_config_file_is_used(tmp_path):
    spec = _write(tmp_path, "s.json", {"family": "brownian"})
    cfg = _write(tmp_path, "c.json", {"kernel_halfwidth": 1.0, "kernel_points": 3})
    out = tmp_path / "k.csv"
    assert main(["kernel", "--spec", spec, "--config", cfg, "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4
