import json

import pytest

from zktoken.cli import main


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.fixture
def artifacts(tmp_path, capsys):
    code, doc, _ = invoke(capsys, "run", "dvp_happy", "--out-dir", str(tmp_path))
    assert code == 0 and doc["ok"]
    return tmp_path, doc


def test_run_writes_artifacts(artifacts):
    out, doc = artifacts
    for name in ("events.json", "snapshot.json", "receipts.json", "txlog.json"):
        assert (out / name).exists()
    assert json.loads((out / "receipts.json").read_text())["state_hash"] == doc["state_hash"]


def test_run_respects_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ZKTOKEN_OUT_DIR", str(tmp_path / "env"))
    code, _, _ = invoke(capsys, "run", "issuance")
    assert code == 0 and (tmp_path / "env" / "events.json").exists()


def test_replay_matches_run(artifacts, capsys):
    out, doc = artifacts
    code, rep, _ = invoke(capsys, "replay", str(out / "txlog.json"), "--out", str(out / "re.json"))
    assert code == 0 and rep["state_hash"] == doc["state_hash"]
    assert json.loads((out / "re.json").read_text()) == json.loads((out / "snapshot.json").read_text())


def test_replay_reports_failing_index(artifacts, capsys):
    out, _ = artifacts
    log = json.loads((out / "txlog.json").read_text())
    log["transactions"][-1]["args"]["tx"]["proof"]["binding"] = "0x1"
    (out / "bad.json").write_text(json.dumps(log))
    code, doc, err = invoke(capsys, "replay", str(out / "bad.json"))
    assert code == 1 and doc["error"] == "ReplayError"
    assert doc["index"] == len(log["transactions"]) - 1 and doc["cause"] == "ProofRejected"
    assert "ReplayError" in err


def test_inspect_queries(artifacts, capsys):
    out, _ = artifacts
    for q in ("roots", "nullifiers", "balances", "pending", "summary"):
        code, doc, _ = invoke(capsys, "inspect", str(out / "snapshot.json"), "--query", q)
        assert code == 0 and doc["query"] == q
    _, doc, _ = invoke(capsys, "inspect", str(out / "snapshot.json"), "--query", "pending")
    assert doc["result"] == {"dvp": 0}


def test_audit_verb(artifacts, capsys):
    out, _ = artifacts
    receipts = json.loads((out / "receipts.json").read_text())
    key = receipts["participants"]["auditor"]["sk"]
    code, doc, _ = invoke(capsys, "audit", str(out / "events.json"), "--auditor-key", key)
    assert code == 0 and doc["entries"]
    other = receipts["participants"]["bank_a"]["sk"] if "bank_a" in receipts["participants"] else "0x5"
    code, doc, _ = invoke(capsys, "audit", str(out / "events.json"), "--auditor-key", other)
    assert code == 1 and doc["error"] == "WrongKey"


def test_vectors_and_errors(tmp_path, capsys):
    code, doc, _ = invoke(capsys, "vectors")
    assert code == 0 and doc["schema_version"] == 1
    code, doc, _ = invoke(capsys, "inspect", str(tmp_path / "missing.json"))
    assert code == 1 and doc["error"] == "ParseError"
    bad = tmp_path / "s.json"
    bad.write_text('{"steps": [{"flow": "transfer", "token": "T", "from": "a"}]}')
    code, doc, _ = invoke(capsys, "run", str(bad), "--out-dir", str(tmp_path))
    assert code == 1 and not doc["ok"] and doc["failures"][0]["error"] == "ParseError"
    bad.write_text('{"steps": [{"flow": "teleport"}]}')
    code, doc, _ = invoke(capsys, "run", str(bad), "--out-dir", str(tmp_path))
    assert code == 1 and doc["error"] == "ParseError"
