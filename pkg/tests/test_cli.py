import json
import subprocess
import sys
from pathlib import Path

import pytest

from stratpl.cli import main
from stratpl.datum import scaled_vartilde, validate
from stratpl.serialize import check_schema, datum_to_dict, deserialize, dumps
from stratpl.runner import load_scenario

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def run_verify(name, out, *extra):
    code = main(["verify", "--scenario", str(SCEN / f"{name}.json"), "--out", str(out), *extra])
    doc = json.loads((out / "manifest.json").read_text())
    return code, doc


def test_two_puncture_all_pass(tmp_path, capsys):
    code, doc = run_verify("two_puncture", tmp_path)
    assert code == 0
    check_schema(doc, "manifest-v1")
    ids = [c["id"] for c in doc["checks"]]
    assert len(ids) == len(set(ids))
    assert doc["summary"]["verdict"] == "pass" and doc["summary"]["failed"] == 0
    assert {c["status"] for c in doc["checks"]} <= {"pass", "reported"}
    for l in (1, 2, 3, 4):
        assert f"stab.l{l}.iteration_vs_closed" in ids
    assert set(doc["timings"]) == set(ids)
    assert "verdict pass" in capsys.readouterr().out


def test_flipped_same_verdicts(tmp_path):
    _, a = run_verify("two_puncture", tmp_path / "a")
    _, b = run_verify("two_puncture_flipped", tmp_path / "b")
    assert b["sign_convention"] == "flipped"
    strip = lambda d: [(c["id"], c["status"], c["detail"]) for c in d["checks"]]
    assert strip(a) == strip(b)


def test_deterministic(tmp_path):
    _, a = run_verify("four_puncture", tmp_path / "a")
    _, b = run_verify("four_puncture", tmp_path / "b")
    a.pop("timings"), b.pop("timings")
    assert dumps(a) == dumps(b)


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "scenario-v1",\n "mode": ')
    out = tmp_path / "out"
    assert main(["verify", "--scenario", str(bad), "--out", str(out)]) == 2
    assert not out.exists()
    assert "bad.json:2:" in capsys.readouterr().err


def test_mode_inconsistency(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["verify", "--scenario", str(SCEN / "two_puncture.json"), "--out", str(out),
                 "--mode", "cyclotomic:8"])
    assert code == 2 and not out.exists()
    assert "inconsistency" in capsys.readouterr().err


def test_failing_check_writes_manifest(tmp_path, classical):
    pd, aux = classical
    broken = scaled_vartilde(pd, 2)
    assert not validate(broken).passed
    scen = {"schema": "scenario-v1", "name": "broken", "mode": pd.field.mode, "levels": [1],
            "checks": ["validate"], "datum": datum_to_dict(broken, aux)}
    path = tmp_path / "broken.json"
    path.write_text(dumps(scen))
    code = main(["verify", "--scenario", str(path), "--out", str(tmp_path / "o")])
    assert code == 1
    doc = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert doc["summary"]["verdict"] == "fail"
    by_id = {c["id"]: c for c in doc["checks"]}
    assert by_id["base.validate"]["status"] == "fail"
    assert "adjointness alpha" in by_id["base.validate"]["detail"]


def test_resonant_reports_periodicity(tmp_path):
    code, doc = run_verify("resonant", tmp_path, "--levels", "1,2")
    assert code == 0
    by_id = {c["id"]: c for c in doc["checks"]}
    assert by_id["stab.l1.periodicity"]["status"] == "reported"
    assert by_id["oracle.aux_nondegenerate"]["status"] == "pass"
    assert "stab.l3.validate" not in by_id


def test_oracle_and_stabilize_commands(tmp_path, capsys):
    assert main(["oracle", "--scenario", str(SCEN / "two_puncture_symbolic.json"), "--out", str(tmp_path)]) == 0
    pd, aux = deserialize((tmp_path / "data" / "level_1.json").read_text())
    assert validate(pd).passed
    assert main(["stabilize", "--scenario", str(SCEN / "two_puncture.json"), "--out", str(tmp_path / "s"),
                 "--levels", "2", "--sign-convention", "flipped"]) == 0
    res, none = deserialize((tmp_path / "s" / "data" / "level_3.json").read_text())
    assert res.level == 3 and none is None and validate(res).passed


def test_oracle_needs_disc_config(tmp_path):
    assert main(["oracle", "--scenario", str(SCEN / "random_datum.json"), "--out", str(tmp_path)]) == 2


def test_report(tmp_path, capsys):
    run_verify("random_datum", tmp_path)
    capsys.readouterr()
    assert main(["report", "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert text == (tmp_path / "report.txt").read_text()
    assert text.splitlines()[-1].startswith("verdict pass")
    assert main(["report", "--out", str(tmp_path / "missing")]) == 2


def test_bad_levels_flag():
    with pytest.raises(SystemExit):
        main(["verify", "--scenario", "x.json", "--levels", "0,1"])


@pytest.mark.parametrize("path", sorted(SCEN.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_scenarios_load(path):
    sc = load_scenario(str(path))
    assert sc.levels


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "stratpl.cli", "verify", "--scenario",
                           str(SCEN / "random_datum.json"), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "manifest.json").exists()
