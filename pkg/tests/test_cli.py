import json
import subprocess
import sys

import pytest

from diffnil.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, (json.loads(out) if out else None), err


def test_reduce_examples(capsys):
    code, rep, _ = run_json(capsys, "reduce", "--m", "2", "x1^2")
    assert code == 0
    assert rep["result"]["normal_form"] == "-1*x0*x2" and rep["result"]["member"] is False
    for text in ("x0*x1", "x0^2"):
        code, rep, _ = run_json(capsys, "reduce", "--m", "2", text)
        assert code == 0 and rep["result"]["normal_form"] == "0" and rep["result"]["member"]


def test_report_schema_and_key_order(capsys):
    _, rep, _ = run_json(capsys, "member", "x0*x1")
    assert list(rep) == ["command", "params", "result", "certificate", "elapsed_ms"]
    assert rep["certificate"] == [{"cofactor": "1", "k": 1, "coefficient": "1/2"}]


def test_member_exit_codes(capsys):
    assert run(capsys, "member", "x0*x1")[0] == 0
    assert run(capsys, "member", "x0*x2")[0] == 1


@pytest.mark.parametrize("m,max_i,indices", [
    ("2", "3", [2, 3, 4, 5]), ("3", "2", [3, 5, 7]), ("4", "1", [4, 7]),
])
def test_verify_ritt(capsys, m, max_i, indices):
    code, rep, _ = run_json(capsys, "verify", "ritt", "--m", m, "--max-i", max_i)
    assert code == 0 and rep["result"]["indices"] == indices


def test_verify_suites(capsys):
    code, rep, _ = run_json(capsys, "verify", "injectivity", "--m", "2",
                            "--max-degree", "4", "--max-weight", "8")
    assert code == 0 and rep["result"]["passed"]
    code, rep, _ = run_json(capsys, "verify", "constants", "--m", "3",
                            "--max-degree", "3", "--max-weight", "8")
    assert code == 0 and all(c["detail"]["kernel"] == 0 for c in rep["result"]["checks"])
    code, rep, _ = run_json(capsys, "verify", "nilpotent", "--m", "2", "--samples", "25", "--seed", "7")
    assert code == 0 and rep["result"]["total"] == 25


def test_verify_falsified_suite_exits_one(capsys):
    # the d(d-1) floor is not attained in odd degree, so this sweep reports failures
    code, rep, _ = run_json(capsys, "verify", "weight-floor", "--max-degree", "3")
    assert code == 1
    assert [c["passed"] for c in rep["result"]["checks"]] == [True, True, False]


def test_witness_examples(capsys):
    code, rep, _ = run_json(capsys, "witness", "--kind", "element", "--a", "x0", "--b", "x0")
    assert code == 0 and rep["result"]["k"] == 2 and rep["result"]["verified"]
    code, rep, _ = run_json(capsys, "witness", "--kind", "operator", "--a", "x0*D", "--b", "x0")
    assert code == 0 and rep["result"]["k"] == 2 and rep["result"]["c"] == "1*x5"
    code, _, err = run_json(capsys, "witness", "--kind", "element", "--a", "0", "--b", "x0")
    assert code == 2 and "zero" in err
    code, rep, _ = run_json(capsys, "witness", "--a", "x0", "--b", "x0", "--cap", "1")
    assert code == 1 and rep["result"]["found"] is False


def test_embed_and_nilindex(capsys):
    code, rep, _ = run_json(capsys, "embed", "x0*x2")
    assert code == 0 and rep["result"]["image"] == "2*xi[0,0]∧eta[0,0]∧xi[0,1]∧eta[0,1]"
    code, rep, _ = run_json(capsys, "nilindex", "--m", "3", "x2")
    assert code == 0 and rep["result"]["nil_index"] == 7
    code, rep, _ = run_json(capsys, "nilindex", "x2", "--cap", "3")
    assert code == 1 and rep["result"]["exhausted"]


@pytest.mark.parametrize("argv", [
    ["reduce", "x-1"],
    ["verify", "bogus"],
    ["frobnicate"],
    ["reduce", "--m", "1", "x0"],
    ["reduce", "1 + x0"],
    ["witness", "--m", "3", "--a", "x0", "--b", "x0"],
])
def test_usage_and_input_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("diffnil:")


def test_resource_guard(capsys):
    code, _, err = run(capsys, "verify", "ritt", "--m", "3", "--max-terms", "10")
    assert code == 2 and "max-terms" in err


def test_global_flags_either_side(capsys):
    a = run_json(capsys, "--m", "3", "reduce", "x1^2")[1]
    b = run_json(capsys, "reduce", "--m", "3", "x1^2")[1]
    assert a["params"] == b["params"] and a["result"] == b["result"]


def test_deterministic_reports(capsys, tmp_path):
    argv = ["verify", "operator-nil", "--samples", "5", "--seed", "3", "--format", "json"]
    reports = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert run(capsys, *argv, "--out", str(path))[0] == 0
        rep = json.loads(path.read_text())
        rep.pop("elapsed_ms")
        reports.append(json.dumps(rep))
    assert reports[0] == reports[1]


def test_text_format(capsys):
    code, out, _ = run(capsys, "member", "x0*x1")
    assert code == 0
    assert "member: True" in out and "1/2 * 1 * (x^m)^(1)" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffnil", "reduce", "x1^2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "normal_form: -1*x0*x2" in proc.stdout
