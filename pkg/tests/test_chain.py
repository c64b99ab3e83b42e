import json

import pytest

from zktoken.chain import Chain, decode_call, load_json
from zktoken.errors import ParseError, ReplayError, UnknownContract
from zktoken.scenario import load_shipped, run_scenario


@pytest.fixture(scope="module")
def run():
    return run_scenario(load_shipped("transfer")).harness.chain


def test_replay_reproduces_state(run):
    doc = json.loads(json.dumps(run.txlog_document()))
    again = Chain.replay(doc)
    assert again.state_hash() == run.state_hash()
    assert again.event_log() == run.event_log()


def test_replay_limit_is_a_prefix(run):
    doc = run.txlog_document()
    partial = Chain.replay(doc, limit=3)
    assert partial.step == 3
    assert partial.state_hash() != run.state_hash()
    assert Chain.replay(doc, limit=len(doc["transactions"])).state_hash() == run.state_hash()


def test_replay_names_corrupted_index(run):
    doc = json.loads(json.dumps(run.txlog_document()))
    index = next(i for i, e in enumerate(doc["transactions"]) if e["op"] == "transfer")
    proof = doc["transactions"][index]["args"]["tx"]["proof"]
    proof["binding"] = hex(int(proof["binding"], 16) ^ 1)
    with pytest.raises(ReplayError) as info:
        Chain.replay(doc)
    assert info.value.index == index
    assert info.value.cause.name == "ProofRejected"


def test_replay_of_rejected_duplicate(run):
    doc = json.loads(json.dumps(run.txlog_document()))
    last = next(e for e in reversed(doc["transactions"]) if e["op"] == "transfer")
    doc["transactions"].append(last)
    with pytest.raises(ReplayError) as info:
        Chain.replay(doc)
    assert info.value.cause.name == "DoubleSpend"


def test_malformed_documents(tmp_path):
    with pytest.raises(ParseError):
        Chain.replay({"no": "transactions"})
    with pytest.raises(ReplayError) as info:
        Chain.replay({"transactions": [{"op": "mint", "caller": "x", "target": "y", "args": {}}]})
    assert info.value.cause.name == "ParseError"
    with pytest.raises(ReplayError) as info:
        Chain.replay({"transactions": [{"op": "deploy_dvp", "args": {}}]})
    assert info.value.cause.name == "ParseError"
    with pytest.raises(ParseError):
        decode_call({"op": "nope"})
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ParseError):
        load_json(bad)


def test_rejected_calls_leave_no_trace():
    c = Chain(depth=4)
    c.call("deploy_dvp", "me", "dvp")
    with pytest.raises(UnknownContract):
        c.call("deploy_dvp", "me", "dvp")
    with pytest.raises(UnknownContract):
        c.call("register_issuer", "me", "nowhere", addr="x", flag=True)
    with pytest.raises(UnknownContract):
        c.call("bogus", "me", "dvp")
    assert c.step == 1 and len(c.events) == 1


def test_events_carry_step(run):
    steps = [e["step"] for e in run.event_log()]
    assert steps == sorted(steps) and steps[-1] == run.step - 1
