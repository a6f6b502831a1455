import json
import subprocess
import sys

import pytest

from actuator_attack.cli import main
from actuator_attack.instance_format import load_bundled, serialize_instance


@pytest.fixture
def fig3_file(tmp_path):
    p = tmp_path / "fig3.desa"
    p.write_text(serialize_instance(load_bundled("fig3")))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys, fig3_file):
    code, out, _ = run(capsys, "validate", fig3_file)
    assert code == 0 and out.startswith("valid: 6 events")


def test_synthesize_text(capsys, fig3_file):
    code, out, _ = run(capsys, "synthesize", fig3_file)
    assert code == 0
    assert "attackable: true" in out
    assert "witness observation: (ε,{b,c})" in out
    assert "attacked events: {d,d'}" in out


def test_synthesize_json_and_output(capsys, fig3_file, tmp_path):
    target = tmp_path / "attacker.json"
    code, out, _ = run(capsys, "synthesize", fig3_file, "--json", "-o", str(target))
    report = json.loads(out)
    assert report["attackable"] is True
    assert report["witness"]["observation"] == [{"event": "", "command": ["b", "c"]}]
    assert json.loads(target.read_text()) == report["attacker"]


def test_fail_if_attackable(capsys, fig3_file):
    assert run(capsys, "synthesize", fig3_file, "--fail-if-attackable")[0] == 3
    assert run(capsys, "synthesize", "minimal", "--fail-if-attackable")[0] == 0


def test_verify_fig3(capsys):
    code, out, _ = run(capsys, "verify", "fig3", "--max-oracle-len", "6")
    assert code == 0
    assert out.count("PASS") == 8 and "FAIL" not in out


def test_verify_random_campaign(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "5", "--count", "4", "--json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["instances"]) == 4


def test_verify_needs_input(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 1 and "needs an instance" in err


def test_replay(capsys):
    code, out, _ = run(capsys, "replay", "fig3", "a' d'")
    assert code == 0 and out.rstrip().endswith("verdict: DAMAGE")
    code, out, _ = run(capsys, "replay", "fig3", "a'", "d'", "--attacker", "none", "--json")
    assert json.loads(out)["blocked_by"] == "command-disabled"


def test_export_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "export-dot", "fig3", "--out-dir", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["annotated_supervisor.dot", "product.dot", "subset.dot"]
    assert "Lf={d,d'}" in (tmp_path / "subset.dot").read_text()
    _, first, _ = run(capsys, "export-dot", "fig3")
    _, second, _ = run(capsys, "export-dot", "fig3")
    assert first == second


def test_invalid_instance_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.desa"
    bad.write_text("[events]\nd c o ca\n[plant]\ninitial 0\n[supervisor]\ninitial 0\n[damage]\ninitial 0\n")
    code, out, _ = run(capsys, "validate", str(bad), "--json")
    assert code == 1
    err = json.loads(out)
    assert err["error"] == "AlphabetNestingViolation" and err["line"] == 1


def test_supervisor_violation_and_repair(capsys, tmp_path):
    text = "[events]\na c o\nu\n[plant]\ninitial 0\n[supervisor]\ninitial 0\n[damage]\ninitial 0\n"
    f = tmp_path / "s.desa"
    f.write_text(text)
    code, _, err = run(capsys, "validate", str(f))
    assert code == 1 and "self-loop" in err
    assert run(capsys, "validate", str(f), "--repair-selfloops")[0] == 0


def test_missing_file(capsys):
    assert run(capsys, "validate", "nope/missing.desa")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "actuator_attack", "synthesize", "fig3", "--json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["attackable"] is True


def test_internal_error_exit_code(capsys, monkeypatch):
    import actuator_attack.cli as cli

    def boom(*a, **k):
        raise RuntimeError("unexpected")

    monkeypatch.setattr(cli, "synthesize", boom)
    code, out, _ = run(capsys, "synthesize", "fig3", "--json")
    assert code == 2 and json.loads(out)["error"] == "InternalError"
