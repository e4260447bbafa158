import json
import subprocess
import sys

import pytest

from linre.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_worked_example_match(capsys):
    code, out, _ = run(capsys, "match", "(c)(?:a(?=a*(?<=c(a*))b))*", "caab")
    assert code == 0
    # group 2 is the lookbehind's (a*), which ECMAScript binds to "aa"
    assert out.splitlines() == ["group 0: 0,3", "group 1: 0,1", "group 2: 1,3"]


def test_no_match(capsys):
    code, out, _ = run(capsys, "match", "a", "b")
    assert code == 1 and out.strip() == "no match"


def test_backreference_is_usage_error(capsys):
    code, _, err = run(capsys, "match", "(a*)b\\1", "x")
    assert code == 2 and "backreference" in err


def test_lazy_nullable_plus_is_error(capsys):
    code, _, err = run(capsys, "match", "(?:a|)+?", "a")
    assert code == 2 and "lazy-nullable-plus" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["match"])
    assert ei.value.code == 2
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 2


def test_json_output(capsys):
    code, out, _ = run(capsys, "match", "--json", "((a)|(b))*", "ab")
    assert code == 0 and json.loads(out) == {"0": [0, 2], "1": [1, 2], "2": None, "3": [1, 2]}
    code, out, _ = run(capsys, "match", "--json", "a", "b")
    assert code == 1 and json.loads(out) is None


@pytest.mark.parametrize("pat,text", [
    ("((a)|(b))*", "ab"), ("(a|a*)", "aa"), ("(?<=(a))b", "ab"), ("(()+)+", "a"), ("x", "y"),
    ("(c)(?:a(?=a*(?<=c(a*))b))*", "caab"),
])
@pytest.mark.parametrize("fmt", [[], ["--json"]])
def test_engines_byte_identical(capsys, pat, text, fmt):
    a = run(capsys, "match", *fmt, "--engine", "linear", pat, text)
    b = run(capsys, "match", *fmt, "--engine", "backtrack", pat, text)
    assert a == b


@pytest.mark.parametrize("opt", [["--store", "list"], ["--store", "tree"], ["--pipeline", "oracle"],
                                 ["--mode", "legacy"]])
def test_match_options(capsys, opt):
    code, out, _ = run(capsys, "match", *opt, "b(?:a(?<=ba*))*", "baa")
    assert code == 0 and out.splitlines()[0] == "group 0: 0,3"


def test_streaming_ineligible(capsys):
    code, _, err = run(capsys, "match", "--pipeline", "streaming", "(?=a)", "a")
    assert code == 2 and "streaming" in err


def test_compile_listing(capsys):
    code, out, _ = run(capsys, "compile", "(a|.)b")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "0: Fork 3 1" and lines[-1].endswith("Accept")
    code, out, _ = run(capsys, "compile", "--program", "all", "a(?=b)")
    assert "; oracle pass for lookaround 1" in out and "WriteOracle 1" in out


def test_bench_csv(capsys, tmp_path):
    dest = tmp_path / "out.csv"
    code, _, _ = run(capsys, "bench", "--family", "C3", "--sizes", "1,2", "--csv", str(dest))
    assert code == 0 and dest.read_text().splitlines()[0].startswith("family,size,bytecode")
    code, _, err = run(capsys, "bench", "--family", "C3", "--sizes", "x")
    assert code == 2


def test_stats(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("(a*)b\n(?:a|)+\nx(?<=y)\n")
    code, out, _ = run(capsys, "stats", "--json", str(f))
    data = json.loads(out)
    assert code == 0 and data["parsed"] == 3 and data["counts"]["nullable_greedy_plus"] == 1
    code, _, _ = run(capsys, "stats", str(tmp_path / "missing"))
    assert code == 2


def test_fuzz_command(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--n", "50", "--seed", "3", "--out", str(tmp_path))
    assert code == 0 and "mismatches=0" in out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "linre", "match", "(a*)b", "caabd"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.splitlines()[1] == "group 1: 1,3"
