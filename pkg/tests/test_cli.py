import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from wmt.cli import parse_assignment, run
from wmt.errors import ParseError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# parse_assignment -----------------------------------------------------------

def test_parse_assignment_examples():
    assert parse_assignment("q=2,y1=1/2") == {"q": Fraction(2), "y1": Fraction(1, 2)}
    assert parse_assignment("q=3, x1=-1/4") == {"q": Fraction(3), "x1": Fraction(-1, 4)}


@pytest.mark.parametrize("text", ["q=0", "q=1", "y1=0.5", "q=2,q=3", "y1", "y1=1/0", "y1=0"])
def test_parse_assignment_rejects(text):
    with pytest.raises(ParseError):
        parse_assignment(text)


def test_parse_assignment_position():
    with pytest.raises(ParseError) as info:
        parse_assignment("q=2,y1=0.5")
    assert info.value.position == 7
    with pytest.raises(ParseError):
        parse_assignment("q=2,z=1", allowed={"q", "y1"})


# exit codes -------------------------------------------------------------------

def test_verify_factorization_a1():
    code, out, _ = call("verify", "--series", "A", "--rank", "1", "--suite", "factorization",
                        "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["suites"][0]["status"] == "pass"


def test_verify_all_a1_text():
    code, out, _ = call("verify", "--series", "A", "--rank", "1")
    assert code == 0
    assert "FAIL" not in out
    assert "truncation" in out


def test_usage_errors_exit_two():
    assert call("coeffs", "--assign", "q=2,y1=0.5")[0] == 2
    code, _, err = call("eval", "--assign", "q=2,y1=1/2")
    assert code == 2 and "missing" in err
    assert call("roots", "--series", "E", "--rank", "6")[0] == 2
    assert call("roots", "--rank", "2", "--epsilon", "1,0")[0] == 2
    assert call("roots", "--bogus")[0] == 2
    assert call("nosuch")[0] == 2
    assert call("coeffs", "--k", "3..1")[0] == 2


def test_usage_error_names_flag():
    _, _, err = call("eval", "--assign", "q=2,y1=0.5,x1=1/8")
    assert "--assign" in err and "position" in err


def test_verify_failure_exit_one(monkeypatch):
    from wmt import mellin

    def broken(params, symbol=None):
        raise mellin.FactorizationFailed("forced", None, {"status": "fail", "series": "A"})
    monkeypatch.setattr(mellin, "verify_factorization", broken)
    code, out, _ = call("verify", "--suite", "factorization")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


# outputs ----------------------------------------------------------------------

def test_coeffs_table():
    code, out, _ = call("coeffs", "--series", "A", "--rank", "1", "--k", "0..3",
                        "--assign", "q=2,y1=1/2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [e["whittaker_value"] for e in data["entries"]][:2] == ["3/4", "21/16"]
    code, text, _ = call("coeffs", "--k", "0..3", "--assign", "q=2,y1=1/2")
    assert "21/16" in text.splitlines()[2]


def test_coeffs_negative_k_zero():
    code, out, _ = call("coeffs", "--rank", "2", "--k=-1..0", "--format", "json")
    data = json.loads(out)
    for e in data["entries"]:
        if min(e["k"]) < 0:
            assert e["coefficient"]["numerator"] == []


def test_mellin_diagonal_json():
    code, out, _ = call("mellin", "--series", "A", "--rank", "2", "--diagonal", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["provenance"]["weyl_terms"] == 6
    assert data["generators"] == ["q", "x", "y1", "y2"]


def test_mellin_rank_three_summands():
    code, out, _ = call("mellin", "--rank", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["summands"]) == 24


def test_eval():
    assert call("eval", "--assign", "q=2,y1=1/2,x1=1/8")[1].strip() == "6/5"
    code, out, _ = call("eval", "--diagonal", "--rank", "2", "--assign",
                        "q=3,y1=1/3,y2=1/9,x=1/81", "--format", "json")
    assert code == 0 and "/" in json.loads(out)["value"]


def test_roots_weyl_lfactors():
    assert json.loads(call("roots", "--series", "G2", "--rank", "2", "--format", "json")[1])[
        "cartan"] == [[2, -3], [-1, 2]]
    assert json.loads(call("weyl", "--series", "B", "--rank", "3", "--format", "json")[1])[
        "order"] == 48
    code, out, _ = call("lfactors", "--epsilon", "1")
    assert code == 0 and "unavailable" in out


def test_threads_independent():
    a = call("mellin", "--rank", "2", "--format", "json")[1]
    b = call("mellin", "--rank", "2", "--format", "json", "--threads", "3")[1]
    assert a == b


def test_determinism_across_processes():
    argv = [sys.executable, "-m", "wmt.cli", "verify", "--rank", "2", "--suite", "truncation",
            "--samples", "3", "--seed", "5", "--format", "json"]
    one = subprocess.run(argv, capture_output=True, check=True).stdout
    two = subprocess.run(argv, capture_output=True, check=True).stdout
    assert one == two
    assert json.loads(one)["seed"] == 5


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("WMT_SEED", "9")
    code, out, _ = call("verify", "--suite", "support", "--samples", "5", "--format", "json")
    assert json.loads(out)["seed"] == 9
