import json

from conftest import spec_path
from equivect.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_classify(capsys):
    code, out = run(capsys, "classify", "--spec", spec_path("z3"), "--rank", "2")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "classify"
    assert data["context"]["image"] == "Z3"
    assert data["triples"] == 9
    assert len(data["classes"]) == 18


def test_semigroup(capsys):
    code, out = run(capsys, "semigroup", "--spec", spec_path("z4"), "--rank", "1")
    assert code == 0
    data = json.loads(out)
    assert data["rank_counts"] == {"1": 8}
    assert data["line_bundles"]["applicable"] is False


def test_table_text(capsys):
    code, out = run(capsys, "table", "--spec", spec_path("d3"), "--format", "table")
    assert code == 0
    assert out.startswith("G (order 6)")
    assert "stab(d-1)" in out


def test_table_format_for_reports(capsys):
    code, out = run(capsys, "stabilizers", "--spec", spec_path("z3"), "--format", "table")
    assert code == 0
    assert out.splitlines()[0].startswith("schema")


def test_chern_demo(capsys):
    code, out = run(capsys, "chern-demo", "--spec", spec_path("z3"), "--samples", "600")
    assert code == 0
    data = json.loads(out)
    assert data["agrees"]
    assert data["twisted"]["parity"] == 1


def test_chern_demo_out_of_scope(capsys):
    code, out = run(capsys, "chern-demo", "--spec", spec_path("z4"))
    assert code == 3
    assert json.loads(out)["kind"] == "OutOfScopeError"


def test_check(capsys):
    code, out = run(capsys, "check", "--spec", spec_path("z3"), "--rank", "2", "--samples", "600")
    data = json.loads(out)
    assert code == 0, [c for c in data["checks"] if not c["ok"]]
    assert data["ok"]


def test_missing_spec_file(capsys, tmp_path):
    code, out = run(capsys, "classify", "--spec", str(tmp_path / "nope.json"))
    assert code == 2
    assert json.loads(out)["kind"] == "InvalidSpecError"


def test_bad_arguments(capsys):
    assert run(capsys, "classify", "--spec", spec_path("z3"), "--rank", "0")[0] == 2
    assert run(capsys, "classify", "--spec", spec_path("z3"), "--chi", "5")[0] == 2


def test_bad_environment(capsys, monkeypatch):
    monkeypatch.setenv("EQUIVECT_SAMPLES", "many")
    code, out = run(capsys, "classify", "--spec", spec_path("z3"))
    assert code == 2
    assert "EQUIVECT_SAMPLES" in json.loads(out)["error"]


def test_check_with_default_character(capsys):
    code, out = run(capsys, "check", "--spec", spec_path("q8xz3"), "--samples", "600")
    assert code == 0
    assert json.loads(out)["context"]["chi"] == 0


def test_hilbert_cap_from_environment(capsys, monkeypatch):
    assert run(capsys, "semigroup", "--spec", spec_path("z3"), "--rank", "1")[0] == 0
    monkeypatch.setenv("EQUIVECT_HILBERT_CAP", "1")
    code, out = run(capsys, "semigroup", "--spec", spec_path("z3"), "--rank", "1")
    assert code == 1
    assert json.loads(out)["kind"] == "HilbertBasisCapError"
    code, out = run(capsys, "check", "--spec", spec_path("z3"), "--rank", "1", "--samples", "600")
    assert code == 1
    failed = {c["check"] for c in json.loads(out)["checks"] if not c["ok"]}
    assert "hilbert-basis" in failed


def test_group_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EQUIVECT_GROUP_CAP", "30")
    code, out = run(capsys, "classify", "--spec", spec_path("icosa"), "--rank", "1")
    assert code == 2
    assert json.loads(out)["kind"] == "GroupTooLargeError"


def test_samples_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EQUIVECT_SAMPLES", "1")
    code, out = run(capsys, "chern-demo", "--spec", spec_path("z3"))
    assert code == 2
    assert "--samples" in json.loads(out)["error"]
