import csv
import io
import json

import pytest

from lindelof.cli import main
from lindelof.config import ConfigError, RunConfig, read_config_file, resolve


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _csv_body(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config-hash ")
    return list(csv.reader(l for l in lines if not l.startswith("#")))


def test_profile_csv(capsys):
    code, out, _ = run(capsys, "profile", "--family", "euclid", "--n", "2", "--a", "1", "--grid", "5")
    assert code == 0
    rows = _csv_body(out)
    assert rows[0] == ["s", "radius", "height", "d_radius", "d_height"]
    assert rows[3][:2] == ["0", "1"]


def test_profile_mesh(capsys, tmp_path):
    out = tmp_path / "h3.csv"
    code, _, _ = run(capsys, "profile", "--family", "h3min", "--a", "0.3", "--mesh", "--grid", "3", "--out", str(out))
    assert code == 0
    mesh = _csv_body((tmp_path / "h3.mesh.csv").read_text())
    assert mesh[0] == ["s", "theta", "x1", "x2", "x3"]
    assert all(float(r[4]) > 0 for r in mesh[1:])


def test_invalid_neck_is_usage_error(capsys):
    code, _, err = run(capsys, "profile", "--a", "-1")
    assert code == 2 and "positive" in err


def test_unknown_command(capsys):
    assert run(capsys, "nonsense")[0] == 2


def test_stability_reports(capsys):
    code, out, _ = run(capsys, "stability", "--family", "h3min", "--a", "0.2")
    assert code == 0 and json.loads(out)["index"] == 1
    rep = json.loads(run(capsys, "stability", "--family", "cousin", "--a", "1")[1])
    assert rep["lindelof"] is True
    rep = json.loads(run(capsys, "stability", "--family", "euclid", "--n", "3")[1])
    assert rep["lindelof"] is False and 0 < rep["ell"] < rep["z"]


def test_scan(capsys):
    code, out, err = run(capsys, "scan", "--a-min", "0.1", "--a-max", "1.0", "--a-step", "0.01")
    assert code == 0
    rows = _csv_body(out)
    assert rows[0] == ["a", "E0", "V0", "X0", "index"]
    assert len(rows) == 92
    assert "[0.49, 0.5]" in err
    signs = [float(r[1]) > 0 for r in rows[1:]]
    assert sum(a != b for a, b in zip(signs, signs[1:])) == 1


def test_scan_stable_range(capsys):
    code, out, _ = run(capsys, "scan", "--a-min", "1", "--a-max", "3", "--a-step", "0.25", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["sign_changes"] == []
    assert {r[4] for r in doc["rows"]} == {0}


def test_scan_empty_range(capsys):
    assert run(capsys, "scan", "--a-min", "1", "--a-max", "0.5", "--a-step", "0.1")[0] == 2


def test_spectrum_negative_interval(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "euclid", "--interval", "-0.6:0.6", "--grid", "801")
    rep = json.loads(out)
    assert code == 0 and rep["lambda1"] > 0 and rep["index"] == 0


def test_envelope_and_flux(capsys):
    rep = json.loads(run(capsys, "envelope", "--n", "3")[1])
    assert rep["slope_mismatch"] <= 1e-4
    rep = json.loads(run(capsys, "flux", "--family", "cousin", "--a", "0.5", "--interval", "-0.3:1.7")[1])
    assert abs(rep["residual"]) <= 1e-6


def test_jacobi_table(capsys):
    code, out, _ = run(capsys, "jacobi", "--family", "h2xr", "--grid", "5", "--alpha", "0.5")
    rows = _csv_body(out)
    assert code == 0 and rows[0] == ["s", "v", "e", "w"] and len(rows) == 6


def test_numerical_failure_exit_code(capsys, monkeypatch):
    from lindelof import cli
    from lindelof.errors import TolExceeded

    def boom(cfg):
        raise TolExceeded("budget exhausted")

    monkeypatch.setitem(cli.HANDLERS, "flux", boom)
    assert run(capsys, "flux")[0] == 1


def test_verify_filter_and_forced_failure(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "15")
    assert code == 0 and "[PASS] 15" in out
    code, out, _ = run(capsys, "verify", "--filter", "h3", "--tol-scale", "1e-6")
    assert code == 1 and "[FAIL]" in out


def test_deterministic_output(capsys):
    args = ("jacobi", "--family", "cousin", "--a", "0.7", "--grid", "7")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_config_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nfamily = h2xr\na = 0.5\ngrid = 11  # inline\nmesh = yes\n")
    assert read_config_file(path)["mesh"] is True
    cfg = resolve({"a": 2.0, "grid": None}, path)
    assert (cfg.family, cfg.a, cfg.grid) == ("h2xr", 2.0, 11)
    assert RunConfig().family_name() == "euclid"
    assert RunConfig(command="scan").family_name() == "h3min"


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    with pytest.raises(ConfigError):
        RunConfig(tol=-1.0)
    with pytest.raises(ConfigError):
        RunConfig(interval=(1.0, 0.0))
    with pytest.raises(ConfigError):
        RunConfig(a_min=0.1, a_max=0.2).a_values()


def test_config_file_via_cli(capsys, tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("family = hnxr\nn = 3\na = 0.5\ngrid = 3\n")
    code, out, _ = run(capsys, "profile", "--config", str(path), "--grid", "5")
    assert code == 0 and len(_csv_body(out)) == 6
    assert "hnxr(n=3, a=0.5)" in out


def test_hash_tracks_config():
    assert RunConfig(a=1.0).digest() == RunConfig(a=1.0, out="x.csv").digest()
    assert RunConfig(a=1.0).digest() != RunConfig(a=1.5).digest()
