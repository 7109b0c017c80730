import json

import pytest

from conftest import input_path
from run import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_text(capsys):
    code, out, _ = run_cli(capsys, "table", input_path("two_planes.json"), "--jobs", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "--- Lyubeznik table over QQ (d = 2) ---"
    assert lines[1:] == ["0 1 0", "  0 0", "    2"]


def test_table_json(capsys):
    code, out, _ = run_cli(capsys, "table", input_path("two_planes.json"), "--format", "json", "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["table"] == [[0, 1, 0], [0, 0, 0], [0, 0, 2]]
    assert doc["d"] == 2
    assert doc["characteristic"] == 0
    assert doc["trivial"] is False


def test_table_of_maximal_ideal(capsys):
    code, out, _ = run_cli(capsys, "table", input_path("irrelevant.json"), "--jobs", "1")
    assert code == 0
    assert out.splitlines()[-1] == "1"


def test_inline_document(capsys):
    code, out, _ = run_cli(capsys, "table", '{"n": 2, "generators": [[1, 2]]}', "--format", "json")
    assert code == 0
    assert json.loads(out)["trivial"] is True


def test_classify_json(capsys):
    code, out, _ = run_cli(capsys, "classify", input_path("tree.json"), "--format", "json", "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["trivial"] is True
    assert doc["classification"]["is_seq_cm_hom"] is True
    assert "fail" not in doc["checks"].values()


def test_classify_text(capsys):
    code, out, _ = run_cli(capsys, "classify", input_path("two_planes.json"), "--jobs", "1")
    assert code == 0
    assert "canonically CM: yes" in out
    assert "Cohen-Macaulay: no" in out
    assert "--- Checks ---" in out


def test_duals(capsys):
    code, out, _ = run_cli(capsys, "duals", input_path("two_planes.json"), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["alexander_dual"] == [[1, 2], [3, 4]]
    assert doc["complex"]["facets"] == [[1, 2], [3, 4]]
    assert doc["primary_decomposition"] == [[1, 2], [3, 4]]


@pytest.mark.parametrize(
    "argv",
    [
        ("table", "/nonexistent/ideal.json"),
        ("table", '{"n": 3, "generators": [[]]}'),
        ("table", '{"n": 3, "generators": [[4]]}'),
        ("table", "{not json"),
        ("table", "--char", "4", input_path("tree.json")),
        ("verify", "--family", "random", "--n", "4"),
        ("verify", "--family", "random", "--n", "4", "--count", "0", "--seed", "1"),
        ("table",),
    ],
)
def test_bad_input_exits_with_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert out == ""


def test_undecodable_file_exits_with_2(capsys, tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"n": 2, "generators": [[1, 2]], "name": "\xff\xfe"}')
    code, out, err = run_cli(capsys, "table", str(path))
    assert code == 2
    assert out == ""
    assert "UTF-8" in err


def test_repeated_runs_in_one_process(capsys):
    for _ in range(3):
        code, out, _ = run_cli(capsys, "table", input_path("tree.json"), "-v", "--jobs", "1")
        assert code == 0
        assert out.splitlines()[0] == "--- Lyubeznik table over QQ (d = 3) ---"


def test_resource_bound_exits_with_3(capsys, monkeypatch):
    monkeypatch.setenv("LYUTAB_MAX_VARS", "3")
    code, _, err = run_cli(capsys, "table", input_path("two_planes.json"))
    assert code == 3
    assert err.startswith("Error:")


def test_field_changes_the_projective_plane_report(capsys):
    reports = {}
    for char in ("0", "2"):
        code, out, _ = run_cli(capsys, "classify", input_path("rp2.json"), "--char", char, "--format", "json", "--jobs", "1")
        assert code == 0
        reports[char] = json.loads(out)
    assert reports["0"]["classification"]["is_cm"] is True
    assert reports["2"]["classification"]["is_cm"] is False
    assert reports["0"]["classification"] != reports["2"]["classification"]


def test_environment_sets_the_field(capsys, monkeypatch):
    monkeypatch.setenv("LYUTAB_CHAR", "2")
    code, out, _ = run_cli(capsys, "table", input_path("tree.json"), "--jobs", "1")
    assert code == 0
    assert "GF(2)" in out.splitlines()[0]


def test_cold_and_warm_cache_agree(capsys, tmp_path):
    argv = ("classify", input_path("two_planes.json"), "--format", "json", "--cache", str(tmp_path), "--jobs", "1")
    code, cold, _ = run_cli(capsys, *argv)
    assert code == 0
    assert len(list(tmp_path.iterdir())) == 1
    code, warm, _ = run_cli(capsys, *argv)
    assert code == 0
    assert warm == cold


def test_verify_is_independent_of_job_count(capsys):
    outputs = []
    for jobs in ("1", "2"):
        code, out, _ = run_cli(
            capsys, "verify", "--family", "random", "--n", "4", "--count", "6", "--seed", "3",
            "--format", "json", "--jobs", jobs, "--quiet",
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
    report = json.loads(outputs[0])
    assert report["verified"] == 6
    assert report["failures"] == []


def test_verify_text_summary(capsys):
    code, out, _ = run_cli(capsys, "verify", "--family", "forest", "--n", "4", "--count", "3", "--seed", "5", "--jobs", "1")
    assert code == 0
    assert "verified: 3 / 3" in out


def test_verify_forest_family(capsys):
    code, out, err = run_cli(
        capsys, "verify", "--family", "forest", "--n", "5", "--count", "50", "--seed", "1",
        "--format", "json", "--jobs", "1", "--quiet",
    )
    assert code == 0, err
    report = json.loads(out)
    assert report["is_seq_cm"] == 50
    assert report["trivial"] == 50


@pytest.mark.slow
@pytest.mark.parametrize(
    "argv",
    [
        ("--family", "nonpure-shellable", "--n", "6", "--count", "100", "--seed", "42"),
        ("--family", "nonpure-shellable", "--n", "6", "--count", "200", "--seed", "42", "--char", "0"),
        ("--family", "nonpure-shellable", "--n", "6", "--count", "200", "--seed", "42", "--char", "2"),
        ("--family", "random", "--n", "5", "--count", "200", "--seed", "7", "--char", "0"),
        ("--family", "random", "--n", "5", "--count", "200", "--seed", "7", "--char", "2"),
        ("--family", "random", "--n", "6", "--count", "200", "--seed", "11", "--char", "2"),
        ("--family", "forest", "--n", "5", "--count", "50", "--seed", "1"),
        ("--family", "forest", "--n", "6", "--count", "200", "--seed", "1", "--char", "0"),
        ("--family", "forest", "--n", "6", "--count", "200", "--seed", "1", "--char", "2"),
    ],
)
def test_corpus_sweeps(capsys, argv):
    code, out, _ = run_cli(capsys, "verify", *argv, "--format", "json", "--quiet")
    assert code == 0
    report = json.loads(out)
    assert report["verified"] == report["count"]
    if report["family"] != "random":
        assert report["is_seq_cm"] == report["count"]
        assert report["trivial"] == report["count"]
