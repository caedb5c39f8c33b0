import io
import json
import subprocess
import sys

import pytest

from lipeq.cli import run, verify_cert_file

OUTCOME_CODE = {"Equivalent": 0, "NotEquivalent": 1, "Unknown": 2}


def test_decide_json():
    code, out = run(["decide", "--alpha", "4,3,1", "--beta", "2,1", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["outcome"] == "Equivalent"
    assert set(doc) == {"outcome", "rule", "certificate", "witness", "inputs", "budget"}


def test_poly_quad():
    code, out = run(["poly-quad", "8", "7", "1", "--format", "json"])
    doc = json.loads(out)
    assert code == 0
    assert doc["factors"] == ["x^2+1", "x^3+x^2-1", "x^3-x+1"]
    code, out = run(["poly-quad", "8", "7", "1"])
    assert code == 0 and "x^3-x+1" in out


def test_decide_all_odd_not_equivalent():
    code, out = run(["decide", "--alpha", "5,3,1", "--beta", "4,1", "--format", "json"])
    doc = json.loads(out)
    assert code == 1 and doc["outcome"] == "NotEquivalent"
    assert doc["witness"]["kind"] in ("IrreducibleQuadrinomial", "DimensionMismatch")


@pytest.mark.parametrize("alpha,beta", [
    ("8,4,2", "3,2"), ("1,1,1", "2,1"), ("2,2,2,2", "1,2,2"), ("5,1", "3,2"), ("6,1", "4,3"),
])
def test_exit_code_matches_outcome(alpha, beta):
    code, out = run(["decide", "--alpha", alpha, "--beta", beta, "--format", "json"])
    assert code == OUTCOME_CODE[json.loads(out)["outcome"]]


def test_unknown_exit_code():
    code, out = run(["decide", "--alpha", "8,4,2", "--beta", "3,2", "--max-weight", "10",
                     "--format", "json"])
    assert code == 2 and json.loads(out)["outcome"] == "Unknown"


def test_env_budget(monkeypatch):
    monkeypatch.setenv("LIPEQ_BUDGET_MAX_WEIGHT", "10")
    code, out = run(["decide", "--alpha", "8,4,2", "--beta", "3,2", "--format", "json"])
    assert code == 2 and json.loads(out)["budget"]["max_weight"] == 10
    code, out = run(["decide", "--alpha", "8,4,2", "--beta", "3,2", "--max-weight", "24",
                     "--format", "json"])
    assert code == 0


def test_verify_cert_round_trip(tmp_path, monkeypatch):
    _, out = run(["decide", "--alpha", "8,4,2", "--beta", "3,2", "--format", "json"])
    good = tmp_path / "good.json"
    good.write_text(out)
    assert verify_cert_file(str(good)) == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO(out))
    assert run(["verify-cert", "-"])[0] == 0

    doc = json.loads(out)
    doc["certificate"]["links"][0]["left"]["weights"][0] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert verify_cert_file(str(bad)) == 1

    trunc = tmp_path / "trunc.json"
    trunc.write_text(out[: len(out) // 2])
    assert verify_cert_file(str(trunc)) == 65
    assert run(["verify-cert", str(trunc)])[0] == 65


def test_verify_cert_endpoint_mismatch(tmp_path):
    _, out = run(["decide", "--alpha", "8,4,2", "--beta", "3,2", "--format", "json"])
    doc = json.loads(out)
    doc["inputs"]["beta"] = [5, 1]
    p = tmp_path / "swap.json"
    p.write_text(json.dumps(doc))
    assert verify_cert_file(str(p)) == 1


def test_usage_and_input_errors():
    assert run([])[0] == 64
    assert run(["bogus"])[0] == 64
    assert run(["decide", "--alpha", "4,3"])[0] == 64
    assert run(["decide", "--alpha", "4,x", "--beta", "2,1"])[0] == 65
    assert run(["poly-quad", "1", "3", "5"])[0] == 65
    assert run(["partition", "--m", "3", "--targets", "1,1"])[0] == 65


def test_other_commands():
    code, out = run(["dim", "2,1", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["approx"].startswith("0.61803398")
    assert "/" in doc["root_interval"]["lo"] or doc["root_interval"]["lo"] == "0"
    code, out = run(["poly-tri", "5", "1", "--format", "json"])
    assert code == 0 and json.loads(out)["cyclo_factor"] == "x^2-x+1"
    code, out = run(["refine", "--alpha", "5,1", "--beta", "3,2", "--format", "json"])
    assert code == 0 and json.loads(out)["refinement"] == [2, 5, 6]
    assert run(["refine", "--alpha", "1,1,1", "--beta", "2,1"])[0] == 2
    code, out = run(["chain", "--alpha", "8,4,2", "--beta", "3,2", "--format", "json"])
    assert code == 0 and json.loads(out)["vectors"][1] == [1, 5]
    code, out = run(["partition", "--m", "2", "--targets", "1,2,2"])
    assert code == 0 and sorted(out.split()) == ["1", "21", "22"]
    code, out = run(["rank", "1/2,1/3"])
    assert code == 0 and out.strip().endswith("2")
    code, out = run(["decide-ratio", "--alpha", "1/2,1/3", "--beta", "1/2,1/5"])
    assert code == 1


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lipeq", "decide", "--alpha", "4,3,1",
                           "--beta", "2,1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Equivalent" in proc.stdout
