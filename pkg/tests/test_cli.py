import csv
import io
import json
import subprocess
import sys

import pytest

from hyprec.cli import main, parse_grid, parse_k_range, parse_scalar, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def roundtrips(text):
    return json.dumps(json.loads(text), sort_keys=True, indent=2) == text.rstrip("\n")


def test_eval_all_modes_agree(capsys):
    code, out, _ = run(capsys, "eval", "--family", "gauss2nd-diag", "--k", "1", "--a", "0.3", "--mode", "all")
    assert code == 0 and roundtrips(out)
    data = json.loads(out)
    assert set(data["values"]) == {"recursion", "series", "closedform"}
    for v in data["values"].values():
        assert v == pytest.approx(1.2311444133449163, rel=1e-12)
    assert max(data["diffs"].values()) < 1e-12


def test_eval_exact(capsys):
    code, out, _ = run(capsys, "eval", "--family", "pfaff", "--k", "0", "--n", "1",
                       "--a", "1/2", "--b", "1/2", "--c", "1/4", "--exact", "--mode", "all")
    assert code == 0
    data = json.loads(out)
    assert data["values"]["recursion"] == "-1/3"
    assert data["values"] == {"recursion": "-1/3", "series": "-1/3", "closedform": "-1/3"}


def test_eval_pretty_and_jsonl(capsys):
    code, out, _ = run(capsys, "eval", "--family", "kummer", "--k", "2", "--a", "0.9", "--b", "0.2", "--format", "pretty")
    assert code == 0 and "recursion" in out
    code, out, _ = run(capsys, "eval", "--family", "kummer", "--k", "2", "--a", "0.9", "--b", "0.2", "--format", "jsonl")
    assert code == 0 and len(out.strip().splitlines()) == 1 and json.loads(out)["family"] == "kummer"


def test_eval_negative_values(capsys):
    code, out, _ = run(capsys, "eval", "--family", "dixon", "--k", "2", "--a", "-1.5", "--b", "-5", "--c", "-5.5")
    assert code == 0
    assert json.loads(out)["values"]["recursion"] == pytest.approx(0.32666083916083916, rel=1e-12)


def test_eval_usage_errors(capsys):
    assert run(capsys, "eval", "--family", "nosuch", "--k", "1", "--a", "1")[0] == 1
    assert run(capsys, "eval", "--family", "kummer", "--k", "1", "--a", "1")[0] == 1
    assert run(capsys, "eval", "--family", "kummer", "--k", "1", "--a", "x", "--b", "1")[0] == 1
    assert run(capsys, "eval", "--family", "pfaff", "--k", "1", "--n", "1.5", "--a", "1", "--b", "1", "--c", "1")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["eval", "--k", "1"])
    assert info.value.code == 1
    assert main([]) == 1


def test_eval_domain_error_json(capsys):
    code, out, err = run(capsys, "eval", "--family", "kummer", "--k", "3", "--a", "1", "--b", "2")
    assert code == 2 and out == ""
    data = json.loads(err)
    assert data["error"] == "CoefficientPole" and "point" in data
    code, _, err = run(capsys, "eval", "--family", "kummer", "--k", "1", "--a", "1", "--b", "0.5", "--exact")
    assert code == 2 and "error" in json.loads(err)
    code, _, err = run(capsys, "eval", "--family", "dixon", "--k", "1", "--a", "1", "--b", "1", "--c", "1",
                       "--mode", "closedform")
    assert code == 2


def test_table_diag_iterates(capsys):
    code, out, _ = run(capsys, "table", "--family", "gauss2nd-diag", "--k", "1..4", "--a", "1:1:1")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["1", "2", "3", "4"]
    want = [2.0, 3.0, 14 / 3, 15 / 2]
    for r, w in zip(rows, want):
        assert float(r["recursion"]) == pytest.approx(w, rel=1e-12)
        assert float(r["oracle"]) == pytest.approx(w, rel=1e-12)
        assert r["status"] == "ok"


def test_table_header_and_empty_grid(capsys):
    code, out, _ = run(capsys, "table", "--family", "kummer", "--k", "1..3", "--a", "0.5:1.5:0", "--b", "0.2")
    assert code == 0
    assert out == "family,k,a,b,recursion,oracle,abs_diff,status,reason\n"


def test_table_collapsed_index(capsys):
    code, out, _ = run(capsys, "table", "--family", "dixon", "--k", "0..2", "--a", "-1.5", "--b", "-5", "--c", "-5.5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["status"] == "skipped" and rows[0]["reason"] == "collapsed-index"
    assert [r["status"] for r in rows[1:]] == ["ok", "ok"]


def test_table_skips_bad_points_and_other_formats(capsys):
    code, out, _ = run(capsys, "table", "--family", "kummer", "--k", "3", "--a", "1", "--b", "1:2:2", "--format", "json")
    assert code == 0 and roundtrips(out)
    rows = json.loads(out)["rows"]
    assert rows[1]["status"] == "skipped" and rows[1]["reason"] == "CoefficientPole"
    code, out, _ = run(capsys, "table", "--family", "kummer", "--k", "1..2", "--a", "1", "--b", "0.5", "--format", "jsonl")
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(capsys, "table", "--family", "kummer", "--k", "1..2", "--a", "1", "--b", "0.5", "--format", "pretty")
    assert code == 0


def test_table_usage_errors(capsys):
    assert run(capsys, "table", "--family", "kummer", "--k", "1..x", "--a", "1", "--b", "1")[0] == 1
    assert run(capsys, "table", "--family", "kummer", "--k", "1", "--a", "1:2", "--b", "1")[0] == 1
    assert run(capsys, "table", "--family", "pfaff", "--k", "1", "--n", "0.5", "--a", "1", "--b", "1", "--c", "1")[0] == 1
    assert run(capsys, "table", "--family", "nosuch", "--k", "1")[0] == 1


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "1", "--draws", "2", "--families", "kummer,pfaff", "--jobs", "2")
    assert code == 0 and roundtrips(out)
    data = json.loads(out)
    assert data["report_version"] == 1 and data["config"]["seed"] == 1
    assert set(data["targets"]) == {"kummer", "pfaff"}


def test_verify_formats_and_box(capsys):
    code, out, _ = run(capsys, "verify", "--draws", "2", "--families", "bailey", "--box", "a=-2:-1", "--format", "jsonl")
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines and all(-2 <= x["params"][0] <= -1 for x in lines)
    code, out, _ = run(capsys, "verify", "--draws", "2", "--families", "choi-identity", "--format", "pretty")
    assert code == 0 and "failures: 0" in out


def test_verify_reports_failures_with_exit_2(capsys):
    code, out, _ = run(capsys, "verify", "--draws", "3", "--families", "kummer", "--tol-abs", "1e-30",
                       "--tol-rel", "1e-30", "--no-meta")
    assert code == 2
    assert json.loads(out)["totals"]["fail"] > 0


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "--draws", "-1")[0] == 1
    assert run(capsys, "verify", "--families", "nosuch")[0] == 1
    assert run(capsys, "verify", "--box", "a=1")[0] == 1
    assert run(capsys, "verify", "--jobs", "0")[0] == 1
    assert run(capsys, "verify", "--k-max", "0")[0] == 1


def test_relations(capsys):
    code, out, _ = run(capsys, "relations", "--format", "json")
    assert code == 0 and roundtrips(out)
    assert len(json.loads(out)["relations"]) == 8
    code, out, _ = run(capsys, "relations", "--format", "pretty")
    assert code == 0 and "lebedev-9.2.13" in out and "ref:" in out
    code, out, _ = run(capsys, "relations", "--all", "--format", "jsonl")
    assert code == 0 and len(out.splitlines()) > 8


def test_parsers():
    assert parse_scalar("1/3", True).denominator == 3
    assert parse_scalar("0.25", False) == 0.25
    with pytest.raises(UsageError):
        parse_scalar("1/0", False)
    assert parse_k_range("3..1") == [3, 2, 1]
    assert parse_k_range("-2") == [-2]
    assert parse_grid("0:1:3", False) == [0.0, 0.5, 1.0]
    assert parse_grid("1:3:3", True) == [1, 2, 3]
    with pytest.raises(UsageError):
        parse_grid("0:1:4", True)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyprec", "relations"], capture_output=True, text=True)
    assert proc.returncode == 0 and roundtrips(proc.stdout)
