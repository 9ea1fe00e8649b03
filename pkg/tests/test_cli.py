import io
import json

import pytest

from silting.cli import run
from silting.fixtures import load_pack, pack_data


def silt(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    alg = tmp_path / "eximp.alg.json"
    alg.write_text(json.dumps(pack_data("eximp")["algebra"]))
    mod = tmp_path / "M.mod.json"
    mod.write_text(json.dumps(load_pack("eximp")["M"].to_json()))
    return str(alg), str(mod)


def test_tau_rigid_from_files(files):
    alg, mod = files
    assert silt("check", "tau-rigid", "-n", "2", alg, mod)[0] == 0
    code, out, _ = silt("check", "tau-rigid", "-n", "1", alg, mod)
    assert code == 1
    assert "hom(P(2), S(2)) != 0" in out


def test_tau_nm_tilting_json(files):
    alg, mod = files
    code, out, _ = silt("check", "tau-tilting", "-n", "2", "-m", "2", "--json", alg, mod)
    assert code == 0
    data = json.loads(out)
    assert data["annihilator"] == ["c"] and data["gamma"]["dim"] == 5


def test_tau_tilting_necessary_condition_failure():
    code, out, _ = silt("--json", "check", "tau-tilting", "-n", "2", "ejp1", "S1")
    assert code == 1
    w = json.loads(out)["witness"]
    assert w["condition"] == "sincere,rank" and w["rank"] == 1


def test_n_tilting_and_silting():
    assert silt("check", "n-tilting", "-n", "4", "ejp1", "M")[0] == 0
    assert silt("check", "n-tilting", "-n", "3", "ejp1", "M")[0] == 1
    assert silt("check", "silting", "-n", "2", "eximp", "M")[0] == 0
    assert silt("check", "silting", "-n", "2", "eximp", "S1")[0] == 1


def test_silting_from_complex_file(tmp_path):
    from silting.complexes import from_resolution

    X = from_resolution(load_pack("eximp")["M"], 2)
    p = tmp_path / "T.cx.json"
    p.write_text(json.dumps(X.to_json()))
    code, out, _ = silt("--json", "check", "silting", "eximp", str(p))
    assert code == 0 and json.loads(out)["witness"]["coresdim"] == 2


def test_resolve_tau_homk_enum():
    code, out, _ = silt("resolve", "-n", "4", "ejp1", "I3")
    assert code == 0 and "P(1)+P(2) <- P(3)^2" in out
    code, out, _ = silt("--json", "tau", "-n", "2", "ejp1", "S1")
    assert json.loads(out)["describe"] == "P(1)"
    code, out, _ = silt("--json", "homk", "-i", "3", "-n", "3", "eximp", "S1", "S1")
    assert json.loads(out)["dim"] == 1
    code, out, _ = silt("--json", "enum", "--bound", "3", "ejp1")
    assert code == 0 and len(json.loads(out)["modules"]) == 12


def test_enum_work_bound_exit_code(monkeypatch):
    monkeypatch.setenv("SILT_WORK_BOUND", "10")
    code, _, err = silt("enum", "--bound", "4", "ejp1")
    assert code == 2 and "work bound" in err


def test_field_override():
    code, out, _ = silt("--field", "Q", "--json", "check", "tau-rigid", "-n", "2", "eximp", "M")
    assert code == 0 and json.loads(out)["outcome"] == "Holds"


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "bogus"),
        ("check", "tau-rigid", "eximp", "M"),
        ("check", "tau-rigid", "-n", "0", "eximp", "M"),
        ("check", "tau-rigid", "-n", "1", "eximp", "nosuchmodule"),
        ("check", "tau-rigid", "-n", "1", "nosuchalgebra.json", "M"),
        ("--field", "Fp:4", "check", "tau-rigid", "-n", "1", "eximp", "M"),
        ("frobnicate",),
    ],
)
def test_usage_and_input_errors(argv):
    code, out, err = silt(*argv)
    assert code == 3
    assert out == "" and err.startswith("silt: ")


def test_invalid_module_file(tmp_path):
    p = tmp_path / "bad.mod.json"
    p.write_text(json.dumps({"dim": {"1": 1, "2": 1, "3": 1}, "arrows": {"a": [["1"]], "b": [["1"]]}}))
    assert silt("check", "tau-rigid", "-n", "1", "eximp", str(p))[0] == 3


def test_verify_suite():
    code, out, _ = silt("verify", "p4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "p4: Holds (2 checks)"


def test_report_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert silt("report", "--suite", "p4", "-o", str(a))[0] == 0
    assert silt("report", "--suite", "p4", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = json.loads(a.read_text())
    assert set(rows[0]) == {"check-id", "inputs", "outcome", "certificate-digest", "runtime-ms"}
    assert all(r["runtime-ms"] is None for r in rows)


def test_report_tsv_with_timings(tmp_path):
    code, out, _ = silt("report", "--suite", "p4", "--format", "tsv", "--timings")
    lines = out.splitlines()
    assert lines[0].split("\t") == ["check-id", "inputs", "outcome", "certificate-digest", "runtime-ms"]
    assert all(line.split("\t")[4] != "" for line in lines[1:])
