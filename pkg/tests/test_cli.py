import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from fixtures_lib import SQUARE_DIAG
from treelaw import cli

GOLDEN = Path(__file__).parent / "golden"
SQ = str(SQUARE_DIAG)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv, golden", [
    (["mst-dist", "--graph", SQ], "mst_dist_square.json"),
    (["--output", "csv", "mst-dist", "--graph", SQ], "mst_dist_square.csv"),
    (["theta", "--r", "2", "--s", "2", "--t", "1"], "theta_221.json"),
    (["path-rotate", "--n", "5", "--L", "[[4,0]]", "--path", "[0,1,2]", "--R", "[[2,3]]"],
     "path_rotate_k5.json"),
    (["uniform-word", "--m", "3"], "uniform_word_3.json"),
])
def test_golden(argv, golden):
    code, out, _ = call(*argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_key_values():
    _, out, _ = call("mst-prob", "--graph", SQ, "--tree", "0,1,4")
    assert json.loads(out)["prob"] == "2/15"
    _, out, _ = call("mst-prob", "--graph", SQ, "--tree", "[0,1,2]", "--method", "brute")
    assert json.loads(out)["prob"] == "7/60"
    _, out, _ = call("ust", "--graph", SQ)
    assert json.loads(out) == {"count": 8, "prob": "1/8"}
    _, out, _ = call("word-dist", "--word", "abab", "--weights", "2,1,1,2")
    assert json.loads(out) == {"ab": "8/9", "ba": "1/9"}
    _, out, _ = call("trybula", "--x", "1/2", "--y", "1/2", "--z", "1/2")
    assert json.loads(out)["inside"] is True


def test_shifted_dist_sums_to_one():
    code, out, _ = call("shift-dist", "--graph", SQ, "--shifts", "0,1/2,0,1/2,0")
    assert code == 0
    assert sum(Fraction(v) for v in json.loads(out).values()) == 1


def test_input_errors():
    assert call("mst-dist", "--graph", "/nonexistent.json")[0] == 1
    assert call("mst-prob", "--graph", SQ, "--tree", "0,1")[0] == 1
    assert call("mst-prob", "--graph", SQ, "--tree", "0,x")[0] == 1
    assert call("no-such-command")[0] == 1
    code, out, err = call()
    assert code == 1 and out == "" and "usage" in err


def test_resource_caps(monkeypatch):
    code, out, err = call("--max-trees", "3", "mst-dist", "--graph", SQ)
    assert code == 2 and out == "" and "cap" in err
    monkeypatch.setenv("TREELAW_MAX_PERMS", "10")
    code, _, _ = call("path-rotate", "--n", "6", "--L", "[[0,4]]", "--path", "[0,1,2,3]",
                      "--R", "[[0,5]]")
    assert code == 2


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "treelaw.cli", "ust", "--graph", SQ],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 8
    with pytest.raises(SystemExit) as exc:
        cli.main(["ust", "--graph", "/nonexistent.json"])
    assert exc.value.code == 1
