import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from torusbound import cli


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def payload(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_eval_f0():
    code, env = payload("eval", "f0", "--n", "54")
    assert code == 0
    assert env["result"] == {"n": 54, "f0": "5100"}
    assert set(env) == {"schema_version", "command", "inputs", "result", "verdict", "precision"}


def test_eval_targets():
    assert payload("eval", "s", "--n", "54")[1]["result"]["s"] == "8"
    env = payload("eval", "envelope", "--n", "54")[1]["result"]["envelope"]
    assert Fraction(env["lo"]) <= Fraction("1.62e18") <= Fraction(env["hi"]) * 2
    assert payload("eval", "s-alpha", "--alpha", "4", "--n", "16")[1]["result"]["s_alpha"] == {"lo": "11", "hi": "11", "exact": True}
    kappa = payload("eval", "kappa", "--i", "1")[1]["result"]["kappa"]
    assert Fraction(kappa["lo"]) < Fraction("3.148225685164253472e-15") < Fraction(kappa["hi"])
    assert payload("eval", "weyl", "--group", "D:3")[1]["result"]["weyl_order"] == "24"
    assert payload("eval", "chi", "--space", "GR:2:4")[1]["result"]["chi"] == "6"


def test_output_is_byte_stable():
    assert run("eval", "kappa", "--i", "6") == run("eval", "kappa", "--i", "6")
    assert run("table1") == run("table1")


def test_table1():
    code, env = payload("table1", "--max-i", "6")
    assert code == 0
    rows = env["result"]["rows"]
    assert [r["n"] for r in rows] == [0, 54, 74, 100, 135, 183, 247]
    assert all(r["printed_within_rel_tol"] == "CertTrue" for r in rows[1:])


def test_figure_1_csv():
    code, text = run("figure", "--which", "1", "--range", "54:74:2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 11
    assert list(rows[0]) == list(cli.FIGURE_COLUMNS)
    assert rows[0]["f0"] == "5100"
    # kappa_1 * env(54) = f0(54) exactly
    assert rows[0]["envelope_lo"] == rows[0]["envelope_hi"] == "5.1e+3"
    for r in rows:
        assert Fraction(r["envelope_lo"]) <= Fraction(r["envelope_hi"])


def test_figure_2_json_uses_kappa_6():
    code, env = payload("figure", "--which", "2", "--range", "247:251:2", "--format", "json")
    rows = env["result"]["rows"]
    assert code == 0 and env["result"]["kappa_index"] == 6 and len(rows) == 3
    assert Fraction(rows[0]["envelope_lo"]) == 366507749452357012500
    assert rows[0]["ref_exponential"].startswith("256859420453465316629443324088803473092636558171577982448153018.775")


def test_figure_base_regime():
    code, text = run("figure", "--which", "1", "--range", "2:10:2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [int(r["f0"]) for r in rows] == [2, 3, 4, 5, 6]


@pytest.mark.parametrize(
    "argv",
    [
        ["figure", "--which", "1", "--range", "3:10:1"],
        ["figure", "--which", "2", "--range", "54:60:2"],
        ["figure", "--which", "1", "--range", "10:2:2"],
        ["figure", "--which", "3", "--range", "2:4:2"],
        ["eval", "f0"],
        ["eval", "f0", "--n", "53"],
        ["eval", "chi", "--space", "GR:3:5"],
        ["obstruct", "genus", "--n", "18", "--rank", "4", "--spin"],
        ["obstruct", "genus", "--n", "16", "--rank", "4"],
        ["obstruct", "connsum", "--n", "8", "--rank", "4", "--chi-factor", "2", "--k", "3"],
        ["certify", "--suite", "nope"],
        ["certify", "--precision", "0"],
        ["bogus"],
        ["eval", "f0", "--n", "x"],
    ],
)
def test_usage_errors_exit_3(argv, capsys):
    code, text = run(*argv)
    assert code == 3
    assert text == ""
    assert capsys.readouterr().err


def test_obstruct_exit_codes():
    assert run("obstruct", "euler", "--n", "54", "--rank", "14", "--chi", "6000")[0] == 1
    assert run("obstruct", "euler", "--n", "54", "--rank", "14", "--chi", "5000")[0] == 0
    code, env = payload("obstruct", "euler", "--n", "54", "--rank", "13", "--chi", "6000", "--json")
    assert code == 0
    assert env["result"]["entries"][0]["applicable"] == "CertFalse"
    code, env = payload("obstruct", "symmspace", "--n", "1024", "--rank", "27", "--ss-rank", "303", "--json")
    assert code == 1 and env["verdict"] == "CertTrue"


def test_obstruct_big_integers_are_strings():
    _, env = payload("obstruct", "product", "--n", "800", "--rank", "24", "--chi-factor", "2", "--k", "400", "--json")
    values = env["result"]["entries"][0]["values"]
    assert values["f0"] == str(__import__("torusbound").bounds.f0(800))
    assert values["chi"] == str(2**400)


def test_certify_json_jobs_independent():
    argv = ["certify", "--suite", "C1,C3,C6,C10", "--json"]
    a = run(*argv, "--jobs", "1")
    b = run(*argv, "--jobs", "4")
    assert a == b and a[0] == 0
    env = json.loads(a[1])
    assert [r["alias"] for r in env["result"]["reports"]] == ["C1", "C3", "C6", "C10"]
    assert "wall_time" not in env["result"]["reports"][0]


def test_certify_starved_exits_2():
    code, text = run("certify", "--suite", "T1-kappa", "--precision", "16")
    assert code == 2 and "undecided" in text


def test_env_ceiling(monkeypatch):
    monkeypatch.setenv("PRECISION_CEILING_BITS", "16")
    code, env = payload("eval", "f0", "--n", "54")
    assert env["precision"]["ceiling_bits"] == 16


def test_decimal_bounds_are_outward():
    x = Fraction(1, 3)
    lo, hi = cli.decimal_bound(x, 10, False), cli.decimal_bound(x, 10, True)
    assert Fraction(lo) < x < Fraction(hi)
    assert cli.decimal_bound(Fraction(-1, 3), 5, True) == "-3.3333e-1"
    assert cli.exact_decimal(Fraction(1, 8)) == "0.125"
    assert cli.exact_decimal(Fraction(1, 3)) == "1/3"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torusbound", "eval", "f0", "--n", "74"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["f0"] == "5217300"
