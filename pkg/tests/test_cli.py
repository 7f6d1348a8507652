import json
import subprocess
import sys

import pytest

from schurtau.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_gaussian(capsys):
    code, out, _ = run(capsys, "expand", "--n", "2", "--D", "2")
    assert code == 0
    data = json.loads(out)
    terms = {(tuple(t["lambda"]), tuple(t["lambda_prime"])): t["coeff"] for t in data["series"]["terms"]}
    assert terms[((), ())] == "1/1"
    assert terms[((1,), (1,))] == "2/1"
    assert terms[((2,), (2,))] == "6/1"
    assert terms[((1, 1), (1, 1))] == "2/1"
    assert data["metadata"]["n"] == 2


def test_expand_vacuum_only(capsys):
    code, out, _ = run(capsys, "expand", "--n", "3", "--D", "0")
    assert code == 0 and len(json.loads(out)["series"]["terms"]) == 1


def test_expand_from_table_records_hash(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"entries": [["1/1", "1/2"], ["1/3", "2/1"]]}))
    code, out, _ = run(capsys, "expand", "--moments", str(p), "--n", "1", "--D", "1")
    assert code == 0 and len(json.loads(out)["metadata"]["table_sha256"]) == 64


def test_corrupted_table(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"entries": [[1, 2], [3')
    code, _, err = run(capsys, "expand", "--moments", str(p))
    assert code == 2 and "error" in err
    p.write_text('{"entries": [[1, 2], [3]]}')
    assert run(capsys, "expand", "--moments", str(p))[0] == 2


def test_sum_kind_a(capsys):
    code, out, _ = run(capsys, "sum", "--kind", "A", "--n", "1", "--H", "3", "--t1", "1", "--t1p", "1")
    assert code == 0 and json.loads(out)["z"] == "8/3"


def test_sum_complex_q(capsys):
    code, out, _ = run(capsys, "sum", "--kind", "C", "--n", "1", "--H", "4", "--x", "1/2", "--y", "1/2",
                       "--q1", "0.6+0.8j", "--q2", "0.6-0.8j")
    data = json.loads(out)
    assert code == 0 and data["field"] == "complex-double"


def test_sum_cutoff_error(capsys):
    code, _, err = run(capsys, "sum", "--kind", "A", "--n", "2", "--H", "3", "--t1", "1", "--t1p", "1",
                       "--compare-degree", "3")
    assert code == 2 and "D+n-1" in err


def test_sum_csv(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sum", "--kind", "A", "--n", "1", "--H", "2", "--t1", "1", "--t1p", "1",
                     "--format", "csv", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "degree,value" and len(lines) == 4


def test_kontsevich(capsys):
    code, out, _ = run(capsys, "kontsevich", "--n", "2", "--H", "5", "--q", "1/2", "--a", "5", "--y", "1/3", "2/5")
    assert code == 0 and "z" in json.loads(out)
    assert run(capsys, "kontsevich", "--n", "2", "--y", "1/3")[0] == 2


def test_verify_cauchy(capsys, tmp_path):
    rep = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "cauchy", "--D", "4", "--report", str(rep))
    data = json.loads(rep.read_text())
    assert code == 0 and data["passed"] and all(r["residual"] == 0 for r in data["reports"])
    assert "PASS" in err


def test_verify_duality_config(capsys, tmp_path):
    cfg = tmp_path / "d.json"
    cfg.write_text(json.dumps({"n": 2, "q": "1/2", "lambda": [2, 1], "lambda_star": [1]}))
    code, out, _ = run(capsys, "verify", "duality", "--config", str(cfg))
    assert code == 0 and json.loads(out)["passed"]
    cfg.write_text(json.dumps({"n": 2}))
    assert run(capsys, "verify", "duality", "--config", str(cfg))[0] == 2


def test_verify_operator_identity_config(capsys, tmp_path):
    cfg = tmp_path / "t.json"
    cfg.write_text(json.dumps({"n": 2, "D": 3, "q1": "1/2", "q2": "1/2", "lambda_star": [1],
                               "pair": {"type": "geometric", "c": "1/2"}}))
    code, out, _ = run(capsys, "verify", "operator", "--config", str(cfg))
    assert code == 0 and json.loads(out)["reports"][0]["passed"]


def test_moments(capsys):
    code, out, _ = run(capsys, "moments", "--K", "2")
    assert code == 0 and json.loads(out)["pi_factor"] is True


def test_bad_arguments(capsys):
    assert run(capsys, "sum", "--kind", "Z", "--n", "1")[0] == 2
    assert run(capsys, "expand", "--n", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "schurtau", "sum", "--kind", "A", "--n", "1", "--H", "3",
                          "--t1", "1", "--t1p", "1"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and '"z": "8/3"' in res.stdout
