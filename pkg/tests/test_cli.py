import io
import json
import subprocess
import sys

import pytest

from dihlike.cli import run
from dihlike.dihloop import dih_construct, dihedral_like_params
from dihlike.loopcore import find_isomorphism, read_table, write_table
from conftest import params


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.startswith("{") else text)


def test_construct_json_and_text():
    code, doc = call("construct", "--m", "2", "--group", "Z3", "--alpha", "(2)")
    assert code == 0 and len(doc["table"]) == 6
    assert doc["table"] == dih_construct(params(2, "Z3", "(2)")).table.tolist()
    code, text = call("construct", "--m", "2", "--group", "Z3", "--alpha", "(2)", "--format", "text")
    assert code == 0 and text.splitlines()[0] == "6"


def test_construct_to_file_then_verify_and_recover(tmp_path):
    path = tmp_path / "q.txt"
    code, _ = call("construct", "--m", "12", "--group", "Z4", "--alpha", "(3)", "--format", "text", "--out", str(path))
    assert code == 0 and read_table(path).size == 48
    code, doc = call("verify", "--table", str(path))
    assert code == 0 and doc["automorphic"] is True and doc["associative"] is False
    code, doc = call("recover", "--table", str(path))
    assert doc == {"m": 12, "g_divisors": [4]}
    code, doc = call("nucleus", "--table", str(path))
    assert doc["size"] == 24


def test_aut_example():
    code, doc = call("aut", "--m", "12", "--group", "Z4", "--alpha", "(3)", "--mode", "both")
    assert code == 0
    assert doc["aut_order_formula"] == doc["aut_order_brute"] == doc["par_count"] == 64
    assert doc["witnesses_verified"] is True


def test_iso_params_and_tables(tmp_path):
    code, doc = call(
        "iso", "--m", "6", "--group", "Z2xZ4", "--alpha", "(1,2);(0,1)", "--beta", "(1,2);(0,3)"
    )
    assert code == 0 and doc["isomorphic"] and doc["iso_count_brute"] == 64
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    write_table(dih_construct(params(2, "Z5", "(2)")), p1)
    write_table(dih_construct(params(2, "Z5", "(3)")), p2)
    code, doc = call("iso", "--table", str(p1), "--table2", str(p2))
    assert code == 0 and doc == {"isomorphic": False, "iso_count_brute": 0}


def test_verify_raw_parameters():
    code, doc = call("verify", "--m", "4", "--group", "Z5", "--alpha", "(2)")
    assert code == 0 and doc["automorphic"] is False and doc["agree"] is True
    code, doc = call("verify", "--m", "3", "--group", "Z2")
    assert code == 0 and doc["automorphic"] is True and doc["commutative"] is True


def test_chi_and_inn():
    code, doc = call("chi", "--m", "2", "--group", "Z3", "--alpha", "(2)")
    assert code == 0 and doc["violations"] == []
    assert [c for i, u, c in doc["chi"] if i == 0 and u == [0]] == [4]
    code, doc = call("inn", "--m", "2", "--group", "Z5", "--alpha", "(4)")
    assert doc["inn_order"] == doc["structure_full_order"] == 10


def test_catalog_order_8():
    code, doc = call("catalog", "--max-order", "8")
    assert code == 0
    order8 = [r for r in doc["classes"] if r["order"] == 8]
    loops = [r for r in order8 if not r["associative"]]
    assert [r["group"] for r in loops if r["group"] == "Z4"] == ["Z4"]
    assert sorted(r["class_size"] for r in order8 if r["m"] == 2 and r["group"] == "Z2xZ2") == [1, 2, 3]
    code, text = call("catalog", "--max-order", "8", "--format", "text")
    assert text.strip().endswith(f"{doc['count']} classes")


def test_output_is_deterministic():
    argv = ["aut", "--m", "6", "--group", "Z2xZ4", "--alpha", "(1,2);(0,1)"]
    assert call(*argv) == call(*argv)
    assert call("catalog", "--max-order", "12") == call("catalog", "--max-order", "12")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["bogus"], 1),
        (["construct", "--m", "2"], 1),
        (["construct", "--m", "2", "--group", "Q8"], 1),
        (["construct", "--m", "2", "--group", "Z3", "--table", "x.txt"], 1),
        (["iso", "--m", "2", "--group", "Z3"], 1),
        (["verify", "--table", "/nonexistent/table.txt"], 1),
        (["construct", "--m", "4", "--group", "Z5", "--alpha", "(2)"], 2),
        (["construct", "--m", "3", "--group", "Z5"], 2),
        (["construct", "--m", "2", "--group", "Z4", "--alpha", "(2)"], 2),
        (["aut", "--m", "2", "--group", "Z2xZ2", "--mode", "formula"], 0),
        (["inn", "--m", "2", "--group", "Z5", "--alpha", "(4)", "--cap", "3"], 3),
    ],
)
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_bad_table_file_exit_2(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n0 1 2\n1 1 0\n2 0 1\n")
    assert call("verify", "--table", str(path))[0] == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "dihlike", "aut", "--m", "2", "--group", "Z5", "--alpha", "(4)"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["aut_order_brute"] == 20


@pytest.mark.slow
def test_catalog_count_matches_brute_partition_to_24():
    _, doc = call("catalog", "--max-order", "24")
    for order in range(2, 25, 2):
        reps: list = []
        for P in dihedral_like_params(order):
            Q = dih_construct(P)
            if all(find_isomorphism(Q, R) is None for R in reps):
                reps.append(Q)
        assert len(reps) == sum(1 for r in doc["classes"] if r["order"] == order), order
    assert doc["count"] == 108
