import io
import json

import pytest

from quiverslice.cli import main
from quiverslice.library import library_path
from quiverslice.verify import ConfigError, VerifyConfig, report_bytes, run_verify


def run(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    return main(argv)


def test_transform(tmp_path, monkeypatch):
    out = tmp_path / "t.json"
    code = run(["transform", "--out", str(out)], '{"n": 3, "v": [1, 1], "d": [1, 1]}', monkeypatch)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["gl_data"]["mu"] == [3]
    assert data["maffei_dims"] == {"v_tilde": [2, 1], "d_tilde": [3, 0]}
    assert data["dimension_identity"]["equal"]


def test_parse_errors_exit_2(monkeypatch, capsys):
    assert run(["transform"], "{nope", monkeypatch) == 2
    assert run(["transform"], '{"n": 3, "v": [1], "d": [1, 1]}', monkeypatch) == 2
    assert main(["no-such-command"]) == 2
    assert main(["verify", "--suites", "bogus"]) == 2
    assert main(["verify", "--trials", "0"]) == 2


def test_phi_then_psi_then_classify(tmp_path, monkeypatch):
    lib = json.loads(library_path().read_text())
    quad = next(i for i in lib["instances"] if i["id"] == "n3-v11-d12-cgen")["quadruple"]
    qf = tmp_path / "q.json"
    qf.write_text(json.dumps(quad))
    pf = tmp_path / "phi.json"
    assert main(["phi", "--in", str(qf), "--out", str(pf)]) == 0
    phi_out = json.loads(pf.read_text())
    assert phi_out["stable"] and "flag" in phi_out
    E = phi_out["class"]["E"]
    sf = tmp_path / "s.json"
    sf.write_text(json.dumps({"lambda": phi_out["lambda"], "element": phi_out["y"], "E": E,
                              "flag": phi_out["flag"], "labels": phi_out["labels"]}))
    lf = tmp_path / "psi.json"
    assert main(["psi", "--in", str(sf), "--out", str(lf)]) == 0
    psi_out = json.loads(lf.read_text())
    assert psi_out["orbit_type"] == phi_out["class"]
    assert psi_out["chart"] is not None
    assert psi_out["lattice_flag"]["steps"][-1] == psi_out["lattice"]
    cf = tmp_path / "lat.json"
    cf.write_text(json.dumps({"lattice": psi_out["lattice"], "E": E}))
    co = tmp_path / "cls.json"
    assert main(["classify", "--in", str(cf), "--out", str(co)]) == 0
    assert json.loads(co.read_text())["b"] == phi_out["lambda"]


def test_census_and_duality(tmp_path, monkeypatch):
    out = tmp_path / "c.json"
    assert run(["census", "--in", "-", "--out", str(out)], '{"mu": [2, 1], "samples": 12}', monkeypatch) == 0
    assert json.loads(out.read_text())["ok"]
    cin = tmp_path / "d_in.json"
    cin.write_text('{"max_m": 2, "max_n": 2, "max_N": 3}')
    out = tmp_path / "d.json"
    assert main(["duality", "--in", str(cin), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["failed"] == 0


def test_verify_transform_suite(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suites", "transform", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    checks = report["suites"][0]["checks"]
    assert report["suites"][0]["suite"] == "transform"
    assert checks and all(c["status"] == "pass" for c in checks)
    assert all(set(c) >= {"id", "status", "instance", "repro"} for c in checks)


def test_verify_corrupted_fixture(tmp_path, capsys):
    lib = json.loads(library_path().read_text())
    target = next(i for i in lib["instances"] if i["id"] == "n3-v11-d11-c0")
    target["quadruple"]["q"][0]["entries"][0][0] = "17"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(lib))
    out = tmp_path / "r.json"
    assert main(["verify", "--suites", "diagram", "--library", str(bad), "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    failed = [c for c in report["suites"][0]["checks"] if c["status"] == "fail"]
    assert [c["id"] for c in failed] == ["diagram/commutes/n3-v11-d11-c0"]
    assert failed[0]["instance"]["quadruple"] == target["quadruple"]
    err = capsys.readouterr().err
    assert "diagram/commutes/n3-v11-d11-c0" in err and '"entries"' in err


def test_verify_only_filter(tmp_path):
    out = tmp_path / "r.json"
    ident = "duality/skew-checksum/m2-n2-N2"
    assert main(["verify", "--suites", "duality", "--only", ident, "--out", str(out)]) == 0
    checks = json.loads(out.read_text())["suites"][0]["checks"]
    assert [c["id"] for c in checks] == [ident]


def test_report_is_deterministic():
    cfg = VerifyConfig(seed=7, trials=2, max_dim=2)
    assert report_bytes(run_verify(cfg)) == report_bytes(run_verify(cfg))


def test_config_validation():
    with pytest.raises(ConfigError):
        VerifyConfig(trials=0)
    with pytest.raises(ConfigError):
        VerifyConfig(suites=("nope",))
    assert VerifyConfig(suites=("psi", "transform")).suites == ("transform", "psi")
