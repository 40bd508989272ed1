import csv
import io
import json

import pytest

from cfiforge import cli
from cfiforge.cfi import CfiStructure, build_cfi
from cfiforge.errors import ValidationError
from cfiforge.graphs import hypercube
from cfiforge.hfs import from_json as hfs_from_json
from cfiforge.hfs import parity_set
from cfiforge.suites import SUITES, Caps, run_suite
from cfiforge.xorcircuit import XorCircuit


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# suites -----------------------------------------------------------------------------------------


def test_caps_precedence():
    assert Caps.from_env({}) == Caps()
    env = {"CFIFORGE_CAP_SUPPORT": "7", "CFIFORGE_CAP_PATHS": "50"}
    assert Caps.from_env(env) == Caps(support=7, paths=50)
    assert Caps.from_env(env, support=9, group=None) == Caps(support=9, paths=50)


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


@pytest.mark.parametrize("name", ["cfi-core", "hfs-orbits", "generalized"])
def test_suite_passes_and_is_deterministic(name):
    a, b = run_suite(name, seed=3), run_suite(name, seed=3)
    assert a.passed
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
    text = a.to_text()
    assert text.splitlines()[-1].endswith(f"{len(a.checks)}/{len(a.checks)} checks passed")


def test_partitions_suite_seeded():
    a = run_suite("partitions", seed=5)
    assert a.passed
    assert a.to_json() == run_suite("partitions", seed=5).to_json()


def test_caps_turn_into_failed_checks():
    report = run_suite("hfs-orbits", caps=Caps(support=1))
    assert not report.passed
    assert any("ResourceLimitError" in c.detail for c in report.failures())


def test_suite_names():
    assert set(SUITES) == {"cfi-core", "hfs-orbits", "circuit-kernel", "generalized", "partitions", "even-paths"}


# cli: cfi ----------------------------------------------------------------------------------------


def test_cfi_build_and_query(capsys, tmp_path):
    path = tmp_path / "g.json"
    code, out, _ = run(capsys, "cfi", "build", "--base", "hypercube:3", "--odd", "000,011", "--out", str(path))
    assert code == 0 and out == ""
    assert CfiStructure.from_json(json.loads(path.read_text())) == build_cfi(hypercube(3), ["000", "011"])
    assert run(capsys, "cfi", "query", "--in", str(path))[1] == "even\n"
    run(capsys, "cfi", "build", "--base", "hypercube:3", "--odd", "000", "--out", str(path))
    assert run(capsys, "cfi", "query", "--in", str(path))[1] == "odd\n"


def test_cfi_dot(capsys):
    code, out, _ = run(capsys, "cfi", "build", "--base", "path:2", "--format", "dot")
    assert code == 0 and out.startswith("graph cfi {")


def test_query_from_stdin(capsys, monkeypatch):
    payload = json.dumps(build_cfi(hypercube(2), ["00"]).to_json())
    monkeypatch.setattr("sys.stdin", io.StringIO(payload))
    assert run(capsys, "cfi", "query", "--in", "-")[1] == "odd\n"


# cli: hfs and circuits ------------------------------------------------------------------------------


def test_parity_set_and_report(capsys, tmp_path):
    path = tmp_path / "mu.json"
    assert run(capsys, "hfs", "parity-set", "--edges", "e,f,g", "--out", str(path))[0] == 0
    assert hfs_from_json(json.loads(path.read_text())) is parity_set(["e", "f", "g"])[0]
    code, out, _ = run(capsys, "hfs", "report", "--in", str(path), "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["key", "sup_cfi", "stab_dim", "orb_E_size", "orb_cfi_size"]
    assert rows[1][1:4] == ["e;f;g", "2", "2"]
    _, out, _ = run(capsys, "hfs", "parity-set", "--edges", "e,f", "--tilde", "--format", "dot")
    assert out.startswith("digraph")


def test_circuit_pipeline(capsys, tmp_path):
    mu = tmp_path / "mu.json"
    circ = tmp_path / "c.json"
    run(capsys, "hfs", "parity-set", "--edges", "e,f,g", "--out", str(mu))
    assert run(capsys, "circuit", "from-hfs", "--in", str(mu), "--out", str(circ))[0] == 0
    c = XorCircuit.from_json(json.loads(circ.read_text()))
    assert c.size() == 7
    code, out, _ = run(capsys, "circuit", "analyze", "--in", str(circ))
    info = json.loads(out)
    assert code == 0
    assert info["fan_in_dim"] == 2
    assert info["root_sensitivity"] == ["e", "f", "g"] == info["path_sensitivity"]
    code, out, _ = run(capsys, "circuit", "analyze", "--in", str(circ), "--dims")
    assert set(json.loads(out)) == {"gates", "wires", "fan_in_dim"}


def test_generalized_from_hfs(capsys, tmp_path):
    mu = tmp_path / "mu.json"
    run(capsys, "hfs", "parity-set", "--edges", "e,f", "--out", str(mu))
    code, out, _ = run(capsys, "circuit", "from-hfs", "--in", str(mu), "--general")
    body = json.loads(out)
    assert code == 0 and set(body) == {"circuit", "matrices", "pruned"}
    c = XorCircuit.from_json(body["circuit"])
    assert c.sensitivity(c.root) == {"e", "f"}


def test_halved_hypercube_and_audit(capsys, tmp_path):
    path = tmp_path / "h.json"
    assert run(capsys, "circuit", "halved-hypercube", "-n", "4", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "circuit", "audit", "--in", str(path), "--epsilon", "0.4")
    assert code == 0
    assert "1100,2:2,2,even" in out.splitlines()
    code, out, _ = run(capsys, "circuit", "audit", "-n", "3", "--format", "json")
    assert code == 1
    assert json.loads(out)["odd_gates"] == ["001", "010", "100"]
    code, out, _ = run(capsys, "circuit", "halved-hypercube", "-n", "3", "--format", "csv")
    assert out.splitlines()[0] == "gate,label,sensitivity,paths"


def test_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "hfs-orbits", "--seed", "1")
    assert code == 0
    assert out.splitlines()[0] == "suite hfs-orbits seed=1"
    assert out.splitlines()[1].startswith("PASS")
    code, out, _ = run(capsys, "suite", "hfs-orbits", "--format", "json", "--cap-support", "1")
    assert code == 1
    assert json.loads(out)[0]["suite"] == "hfs-orbits"


def test_suite_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("CFIFORGE_CAP_SUPPORT", "1")
    code, out, _ = run(capsys, "suite", "hfs-orbits")
    assert code == 1 and "FAIL" in out


def test_export_round_trip(capsys, tmp_path):
    path = tmp_path / "g.json"
    run(capsys, "cfi", "build", "--base", "cycle:4", "--out", str(path))
    code, out, _ = run(capsys, "export", "--kind", "cfi", "--in", str(path), "--format", "json")
    assert code == 0 and json.loads(out) == json.loads(path.read_text())
    assert run(capsys, "export", "--kind", "cfi", "--in", str(path), "--format", "csv")[0] == 2


def test_export_function_rejects_format():
    with pytest.raises(ValidationError):
        cli.export(build_cfi(hypercube(2)), "csv")
    assert cli.import_json("circuit", json.dumps({"circuit": XorCircuit(("x",), frozenset(), "x", {"x": "a"}).to_json()})).size() == 1


# cli: exit codes -------------------------------------------------------------------------------------


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "cfi", "build", "--base", "hypercube:2", "--odd", "zz")[0] == 2
    assert run(capsys, "cfi", "query", "--in", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "cfi", "query", "--in", str(bad))[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "cfi", "build", "--base", "wheel:3")[0] == 2
    assert run(capsys, "circuit", "audit")[0] == 2
    assert run(capsys, "--help")[0] == 0
