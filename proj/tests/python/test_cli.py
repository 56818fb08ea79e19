import json
import os
import subprocess

CLI = os.environ.get("TWISTFORGE_CLI", "twistforge")
DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def run(*args):
    p = subprocess.run([CLI, *args], capture_output=True, text=True)
    return p.returncode, json.loads(p.stdout)


def test_exit_codes(tmp_path):
    rc, r = run("check", "smooth", os.path.join(DATA, "fermat5.json"))
    assert rc == 0 and r["overall"] == "PASS"
    rc, r = run("check", "smooth", os.path.join(DATA, "cusp.json"))
    assert rc == 1 and r["overall"] == "FAIL"
    rc, r = run("check", "conditions", "--d", "4", "--n", "3", "--field-kind", "real")
    assert rc == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"vars": 3, "terms": [{"e": [1, 2], "c": "1"}]}')
    rc, r = run("check", "smooth", str(bad))
    assert rc == 2 and r["pointer"] == "/terms/0/e"
    rc, r = run("check", "twist", "--b", "0", os.path.join(DATA, "model.json"), os.path.join(DATA, "psi.json"))
    assert rc == 2


def test_twist_and_recheck(tmp_path):
    out = tmp_path / "twist.json"
    rc, _ = run("check", "twist", "--b", "2", os.path.join(DATA, "model.json"), os.path.join(DATA, "psi.json"))
    assert rc == 0
    subprocess.run([CLI, "check", "twist", "--b", "2", os.path.join(DATA, "model.json"),
                    os.path.join(DATA, "psi.json"), "--out", str(out), "--pretty"], check=True)
    report = json.loads(out.read_text())
    assert report["outputs"]["twist_model"]["weight"] == 0
    rc, r = run("check", "--recheck", str(out))
    assert rc == 0 and r["certificates"][0]["kind"] == "recheck"


def test_determinism():
    a = run("verify-paper-example", "p2")[1]
    b = run("verify-paper-example", "p2")[1]
    strip = lambda r: [(c["kind"], c["status"], json.dumps(c["witness"], sort_keys=True)) for c in r["certificates"]]
    assert a["input_digest"] == b["input_digest"]
    assert strip(a) == strip(b)


def test_family_kummer_failure_is_reported():
    rc, r = run("verify-paper-example", "family", "--n", "3", "--p", "3", "--a", "1")
    assert rc == 1
    status = {c["kind"]: c["status"] for c in r["certificates"]}
    assert status["kummer-cocycle"] == "FAIL" and status["automorphism"] == "PASS"
