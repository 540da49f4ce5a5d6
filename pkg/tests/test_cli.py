import csv
import io
import json
import subprocess
import sys

import pytest

from reference_tables import DIGAMMA_ONE_TABLE
from tvcf.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_classify_dt21():
    code, doc = run_json("classify", "perron_log", "x=1", "--digits", "40")
    assert code == 0 and doc["tag"] == "Dt21" and doc["schema"] == "tvcf/1"


def test_classify_with_tail():
    code, doc = run_json("--digits", "40", "classify", "perron_digamma", "--with-tail")
    assert code == 0 and doc["tail"]["tag"] == "De20"


def test_eval_digamma_n100():
    code, doc = run_json("eval", "perron_digamma", "x=1", "nu=0.5", "--n", "100",
                         "--reference", "literal:1.327052799890558739735", "--digits", "64")
    assert code == 0 and round(doc["acc"], 2) == 2.25


def test_accelerate_json_fields():
    code, doc = run_json("accelerate", "arctan", "x=1", "--rows", "6", "--iters", "5",
                         "--reference", "oracle", "--digits", "40")
    assert code == 0
    assert set(doc) >= {"value", "acc", "N", "J", "digits"}
    assert doc["N"] == 6 and doc["J"] == 5 and len(doc["value"]) == 2


def test_digamma_table_csv():
    code, text = run("table", "perron_digamma", "x=1", "nu=0.5", "--rows", "11", "--iters", "10",
                     "--reference", "literal:1.327052799890558739735", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["n", "j", "delta"]
    cells = {(int(r["n"]), int(r["j"])): float(r["delta"]) for r in rows}
    assert len(cells) == 66
    for n, printed in DIGAMMA_ONE_TABLE.items():
        for j, v in enumerate(printed):
            assert abs(cells[(n, j)] - v) <= 0.0101, (n, j)


def test_table_iters_zero_and_json():
    code, doc = run_json("table", "arctan", "x=1/2", "--rows", "5", "--iters", "0",
                         "--digits", "40")
    assert code == 0
    assert [(c["n"], c["j"]) for c in doc["cells"]] == [(n, 0) for n in range(1, 6)]


def test_gallery_list_and_eval():
    code, doc = run_json("gallery", "list")
    assert code == 0 and {"perron_digamma", "arctan"} <= {e["id"] for e in doc["entries"]}
    code, doc = run_json("gallery", "eval", "perron_digamma", "x=1", "nu=1/2", "--digits", "40")
    assert code == 0 and doc["acc_vs_literal"] >= 21


def test_verify_and_strict():
    code, doc = run_json("verify", "perron_log", "x=1", "--digits", "40", "--reference", "oracle")
    assert code == 0 and doc["passed"]
    code, doc = run_json("verify", "perron_log", "x=1", "--digits", "40", "--strict")
    assert code == 0


def test_round_trip_through_file(tmp_path):
    _, doc = run_json("classify", "perron_cn", "--dump-cf", "--digits", "50")
    path = tmp_path / "cf.json"
    path.write_text(json.dumps(doc))
    _, again = run_json("classify", "--input", str(path), "--digits", "50")
    assert again["tag"] == doc["tag"]
    _, a = run_json("accelerate", "perron_cn", "--rows", "4", "--iters", "3", "--digits", "50")
    _, b = run_json("accelerate", "--input", str(path), "--rows", "4", "--iters", "3",
                    "--digits", "50")
    assert a["value"] == b["value"]
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(doc["cf"]))
    assert run_json("classify", "--input", str(bare), "--digits", "50")[1]["tag"] == doc["tag"]


@pytest.mark.parametrize("argv,code", [
    (["accelerate", "arctan", "--rows", "3", "--iters", "3"], "DOMAIN_ERROR"),
    (["classify", "arctan", "x=5"], "DOMAIN_ERROR"),
    (["classify", "nosuch"], "DOMAIN_ERROR"),
    (["classify"], "INVALID_INPUT"),
    (["frobnicate"], "INVALID_INPUT"),
    (["eval", "arctan", "--n", "3", "--reference", "bogus"], "INVALID_INPUT"),
    (["--digits", "4", "classify", "arctan"], "DOMAIN_ERROR"),
    (["classify", "--input", "/nonexistent.json"], "INVALID_INPUT"),
])
def test_error_objects(argv, code):
    rc, text = run(*argv)
    assert rc == 2
    assert json.loads(text)["error"]["code"] == code


def test_not_in_class_d_from_file(tmp_path):
    # a_n = n, b = 1, a'_n = -n, b' = 1: leading coefficients cancel the quadratic
    _, doc = run_json("classify", "arctan", "--dump-cf", "--digits", "30")
    cf = doc["cf"]
    cf["a"], cf["b"], cf["a_prime"], cf["b_prime"] = (
        [[0, 0], [1, 0]], [[1, 0]], [[0, 0], [-1, 0]], [[1, 0]])
    cf["prefix"] = []
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cf))
    rc, text = run("classify", "--input", str(path), "--digits", "30")
    assert rc == 2 and json.loads(text)["error"]["code"] in (
        "NOT_IN_CLASS_D", "DEGENERATE_COEFFICIENT")


def test_digits_env_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("TVCF_DIGITS", "33")
    assert run_json("eval", "arctan", "--n", "3")[1]["digits"] == 33
    assert run_json("eval", "arctan", "--n", "3", "--digits", "41")[1]["digits"] == 41
    assert run_json("--digits", "42", "eval", "arctan", "--n", "3")[1]["digits"] == 42
    monkeypatch.setenv("TVCF_DIGITS", "many")
    rc, text = run("eval", "arctan", "--n", "3")
    assert rc == 2 and json.loads(text)["error"]["code"] == "INVALID_INPUT"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tvcf.cli", "classify", "perron_log",
                           "--digits", "30"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["tag"] == "Dt21"
