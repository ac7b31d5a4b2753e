import json

import jsonschema
import pytest

from cpclie import cli, geometry
from cpclie.cli import REPORT_SCHEMA, main
from cpclie.scenarios import get_decomposition


def _run_json(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--format", "json", "--out", str(out)])
    return code, json.loads(out.read_text())


def _scenario(tmp_path, body, name="scn.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return str(path)


def _entry(space, root):
    d = get_decomposition(space)
    r = d.system.root(root)
    return {"root": list(root), "basis": [[str(x) for x in d.space(r)[0]]]}


def _ortho_sl4():
    return {"space": "sl_real:4",
            "v_spec": {"entries": [_entry("sl_real:4", (1, 0, 0)), _entry("sl_real:4", (0, 0, 1))]}}


def test_preset_run_passes(tmp_path):
    code, rep = _run_json(["run", "--preset", "a2-complex-lines"], tmp_path)
    assert code == cli.EXIT_OK
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert rep["checks"]["sweep"]["passed"] and rep["checks"]["characterize"]["passed"]
    assert rep["outcome"] == {"expect": "pass", "observed": "pass", "failed_checks": [], "ok": True}


def test_expected_failure_is_ok(tmp_path):
    code, rep = _run_json(["run", "--preset", "orthogonal-roots"], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["outcome"]["observed"] == "fail"
    assert rep["outcome"]["failed_checks"] == ["sweep"]
    assert not rep["checks"]["sweep"]["verdict"]["is_cpc"]


def test_unexpected_failure_exits_one(tmp_path):
    code, rep = _run_json(["run", "--config", _scenario(tmp_path, _ortho_sl4())], tmp_path)
    assert code == cli.EXIT_FAIL
    assert rep["outcome"]["expect"] == "pass" and not rep["outcome"]["ok"]


def test_unexpected_pass_exits_one(tmp_path):
    path = _scenario(tmp_path, {"v_spec": {"preset": "a2-real-lines"}, "expect": "fail"})
    code, rep = _run_json(["run", "--config", path], tmp_path)
    assert code == cli.EXIT_FAIL
    assert rep["outcome"]["observed"] == "pass"


def test_explicit_entries_match_preset(tmp_path):
    body = {"space": "sl_real:3",
            "v_spec": {"entries": [_entry("sl_real:3", (1, 0)), _entry("sl_real:3", (0, 1))]},
            "checks": ["sweep", "characterize"]}
    code, rep = _run_json(["run", "--config", _scenario(tmp_path, body)], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["scenario"]["name"] == "custom"
    spec = rep["checks"]["sweep"]["verdict"]["reference_spectrum"]
    assert all(abs(e["value"]) < 1e-9 for e in spec)


def test_flags_override_config(tmp_path):
    path = _scenario(tmp_path, {"v_spec": {"preset": "a2-real-lines"}, "seed": 5})
    code, rep = _run_json(["run", "--config", path, "--seed", "11", "--checks", "sweep"], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["scenario"]["seed"] == 11
    assert list(rep["checks"]) == ["sweep"]


def test_reports_deterministic(tmp_path):
    argv = ["run", "--preset", "a2-complex-lines", "--seed", "3", "--checks", "sweep,blocks,normalizer"]
    _, a = _run_json(argv, tmp_path, "a.json")
    _, b = _run_json(argv, tmp_path, "b.json")
    a.pop("timing")
    b.pop("timing")
    assert a == b


def test_seed_changes_samples(tmp_path):
    _, a = _run_json(["run", "--preset", "a2-complex-lines", "--seed", "1", "--checks", "sweep"], tmp_path, "a.json")
    _, b = _run_json(["run", "--preset", "a2-complex-lines", "--seed", "2", "--checks", "sweep"], tmp_path, "b.json")
    assert a["checks"]["sweep"]["verdict"]["is_cpc"] and b["checks"]["sweep"]["verdict"]["is_cpc"]
    assert a["scenario"]["seed"] != b["scenario"]["seed"]


def test_empty_checks_is_decomposition_only(tmp_path):
    code, rep = _run_json(["run", "--space", "sl_real:3"], tmp_path)
    assert code == cli.EXIT_OK
    assert rep["checks"] == {}
    assert "orbit" not in rep


def test_decompose_summaries(tmp_path):
    _, r = _run_json(["decompose", "--space", "sl_real:3"], tmp_path, "r.json")
    _, h = _run_json(["decompose", "--space", "sl_quaternion:3"], tmp_path, "h.json")
    _, b = _run_json(["decompose", "--space", "so_pq:2,5"], tmp_path, "b.json")
    d = r["decomposition"]
    assert d["dim_k0"] == 0 and len(d["positive_roots"]) == 3
    assert d["simple_root_gram"] == [["2", "-1"], ["-1", "2"]]
    d = h["decomposition"]
    assert d["dim_k0"] == 9 and {x["multiplicity"] for x in d["positive_roots"]} == {4}
    d = b["decomposition"]
    mult = {x["length_sq"]: x["multiplicity"] for x in d["positive_roots"]}
    assert sorted(mult.items())[0][1] == 3 and sorted(mult.items())[-1][1] == 1


def test_dump_table(capsys):
    assert main(["dump", "--space", "sl_complex:3"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "H_alpha Gram" in out
    assert "a0+a1" in out


def test_table_output(capsys):
    assert main(["run", "--preset", "a2-real-lines", "--checks", "sweep"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "outcome: observed pass, expected pass -> OK" in out


def test_invariants_check(tmp_path):
    code, rep = _run_json(["run", "--space", "sl_real:3", "--checks", "invariants"], tmp_path)
    assert code == cli.EXIT_OK and rep["checks"]["invariants"]["passed"]


@pytest.mark.parametrize("basis", [[[1]], "wrong-root"])
def test_construction_failure_recorded(tmp_path, basis):
    if basis == "wrong-root":
        # a g_a0 vector filed under a1
        basis = _entry("sl_real:3", (1, 0))["basis"]
    body = {"space": "sl_real:3", "v_spec": {"entries": [{"root": [0, 1], "basis": basis}]}}
    code, rep = _run_json(["run", "--config", _scenario(tmp_path, body)], tmp_path)
    assert code == cli.EXIT_FAIL
    assert not rep["checks"]["construct"]["passed"]
    assert set(rep["outcome"]["failed_checks"]) == {"construct"}


@pytest.mark.parametrize("argv", [
    ["run", "--space", "sl_bogus:3"],
    ["run", "--space", "sl_real:1"],
    ["run", "--preset", "no-such-preset"],
    ["dump"],
    ["suite", "no-such-suite"],
    ["run"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == cli.EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_schema_violation(tmp_path, capsys):
    path = _scenario(tmp_path, {"space": "sl_real:3", "colour": "blue"})
    assert main(["run", "--config", path]) == cli.EXIT_USAGE
    assert "schema violation" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == cli.EXIT_USAGE


def test_bad_seed_rejected_by_parser():
    with pytest.raises(SystemExit) as e:
        main(["run", "--space", "sl_real:3", "--seed", "-1"])
    assert e.value.code == 2


def test_internal_error_exit(monkeypatch, capsys):
    def broken(*a, **k):
        raise geometry.SymmetryViolation("shape operator not symmetric")
    monkeypatch.setattr(geometry, "cpc_sweep", broken)
    assert main(["run", "--preset", "a2-real-lines"]) == cli.EXIT_INTERNAL
    assert "internal-consistency" in capsys.readouterr().err


def test_invariants_suite(tmp_path):
    out = tmp_path / "s.json"
    assert main(["suite", "invariants-exhaustive", "--format", "json", "--out", str(out)]) == cli.EXIT_OK
    data = json.loads(out.read_text())
    assert data["passed"] and all(r["ok"] for r in data["reports"])
