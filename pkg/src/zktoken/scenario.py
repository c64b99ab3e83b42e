"""JSON scenarios: seeded step lists with expected outcomes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional

from . import codec
from .circuits import DEFAULT_SEED
from .crypto import DEFAULT_DEPTH
from .errors import ConstraintViolation, ParseError, ScenarioAssertionFailed, ZkTokenError
from .harness import Harness, Receipt

SCHEMA_VERSION = 1


@dataclass
class StepOutcome:
    index: int
    flow: str
    ok: bool
    error: Optional[str] = None
    expected_error: Optional[str] = None
    receipts: list[Receipt] = field(default_factory=list)
    conservation: dict = field(default_factory=dict)

    @property
    def as_expected(self) -> bool:
        if self.expected_error is None:
            return self.ok
        return self.error == self.expected_error


@dataclass
class ScenarioResult:
    name: str
    harness: Harness
    steps: list[StepOutcome]
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return not self.failures


def shipped_scenarios() -> list[str]:
    folder = resources.files("zktoken") / "scenarios"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_shipped(name: str) -> dict:
    path = resources.files("zktoken") / "scenarios" / f"{name}.json"
    return parse_scenario(path.read_text())


def load_scenario(path) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(text)


def parse_scenario(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise ParseError("scenario needs a 'steps' list")
    if doc.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')}")
    return doc


def _error_name(exc: Exception) -> str:
    if isinstance(exc, ConstraintViolation):
        return f"ConstraintViolation:{exc.constraint}"
    return exc.name if isinstance(exc, ZkTokenError) else type(exc).__name__


def _pairs(value) -> list[tuple[str, int]]:
    if isinstance(value, dict):
        return list(value.items())
    return [tuple(v) for v in value or ()]


def _step_issue(h: Harness, s: dict) -> list[Receipt]:
    return [h.issue(s["token"], s["to"], s.get("amount", 0), s.get("id", 0), s.get("issuer", "authority"),
                    s.get("hidden_issuer", False), s.get("label"), s.get("delegate"))]


def _step_transfer(h: Harness, s: dict) -> list[Receipt]:
    return [h.transfer(s["token"], s["from"], _pairs(s.get("pay")), _pairs(s.get("nfts")),
                       s.get("burn", 0), s.get("burn_ids", ()), s.get("inputs", ()), s.get("label"),
                       s.get("delegate"), s.get("submit_as"))]


def _step_withdraw(h: Harness, s: dict) -> list[Receipt]:
    return [h.withdraw(s["token"], s["from"], s.get("amount", 0), s.get("ids", ()),
                       inputs=s.get("inputs", ()))]


def _step_reveal(h: Harness, s: dict) -> list[Receipt]:
    return [h.reveal(s["token"], s["from"], s["vault"], s.get("amount", 0), s.get("ids", ()),
                     s.get("inputs", ()), s.get("delegate"))]


def _step_hide(h: Harness, s: dict) -> list[Receipt]:
    return [h.hide(s["token"], s["vault"], s["to"], s.get("amount", 0), s.get("ids", ()),
                   s.get("signer"), s.get("caller"), s.get("delegate"), s.get("label"))]


def _step_grab(h: Harness, s: dict) -> list[Receipt]:
    return [h.grab(s["token"], s["label"], s.get("caller", "authority"), s.get("to", "authority"))]


def _step_dvp(h: Harness, s: dict) -> list[Receipt]:
    a, b = s["a"], s["b"]
    return h.dvp(a["token"], a["bank"], a.get("amount", 0), b["token"], b["bank"], b.get("amount", 0),
                 a.get("ids", ()), b.get("ids", ()), s.get("order", "ab"), s.get("submit", "ab"))


def _step_add_participant(h: Harness, s: dict) -> list[Receipt]:
    h.add_participant(s["name"])
    return []


def _step_register_issuer(h: Harness, s: dict) -> list[Receipt]:
    h.register_public_issuer(s["name"], s["token"], s.get("flag", True))
    return []


def _step_hidden_issuer(h: Harness, s: dict) -> list[Receipt]:
    h.add_hidden_issuer(s["name"], s["token"])
    return []


STEPS: dict[str, Callable[[Harness, dict], list[Receipt]]] = {
    "issue": _step_issue,
    "transfer": _step_transfer,
    "withdraw": _step_withdraw,
    "reveal": _step_reveal,
    "hide": _step_hide,
    "grab": _step_grab,
    "dvp": _step_dvp,
    "add_participant": _step_add_participant,
    "register_issuer": _step_register_issuer,
    "hidden_issuer": _step_hidden_issuer,
}


def setup(doc: dict, seed: int | None = None, depth: int | None = None) -> Harness:
    h = Harness(doc.get("seed", 0) if seed is None else seed,
                depth or doc.get("depth", DEFAULT_DEPTH), doc.get("backend_seed", DEFAULT_SEED))
    try:
        for tok in doc.get("tokens", []):
            h.deploy_token(tok["name"], tok["type"])
        if doc.get("dvp"):
            h.deploy_dvp()
        for name in doc.get("participants", []):
            h.add_participant(name)
        for vault in doc.get("vaults", []):
            h.add_contract_account(vault)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad scenario setup: {exc!r}") from exc
    return h


def _check_assertion(h: Harness, a: dict, steps: list[StepOutcome]) -> Optional[dict]:
    kind = a.get("kind")
    want = a.get("equals")
    if kind == "wallet_balance":
        got = h.participant(a["participant"]).balance(h.tokens[a["token"]])
    elif kind == "wallet_ids":
        got = h.participant(a["participant"]).ids(h.tokens[a["token"]])
    elif kind == "wallet_size":
        got = len(h.participant(a["participant"]).holdings(h.tokens[a["token"]]))
    elif kind == "open_balance":
        state = h.contract(a["token"]).state
        got = state.balances.get(h.participant(a["vault"]).account, 0)
    elif kind == "open_ids":
        state = h.contract(a["token"]).state
        got = sorted(state.nfts.get(h.participant(a["vault"]).account, set()))
    elif kind == "reserve":
        got = h.reserves.get(a["participant"], 0)
    elif kind == "pending":
        got = h.pending_count()
    elif kind == "nullifiers":
        got = len(h.contract(a["token"]).state.nullifiers)
    elif kind == "step_error":
        got = steps[a["step"]].error
    else:
        raise ParseError(f"unknown assertion kind {kind!r}")
    if got != want:
        return {"assertion": a, "expected": want, "got": got}
    return None


def run_scenario(doc: dict, seed: int | None = None, depth: int | None = None,
                 strict: bool = False) -> ScenarioResult:
    """Execute every step; after each, record the conservation check per token."""
    h = setup(doc, seed, depth)
    outcomes: list[StepOutcome] = []
    failures: list[dict] = []
    for i, step in enumerate(doc["steps"]):
        flow = step.get("flow")
        if flow not in STEPS:
            raise ParseError(f"step {i}: unknown flow {flow!r}")
        out = StepOutcome(i, flow, ok=True, expected_error=step.get("expect_error"))
        try:
            out.receipts = STEPS[flow](h, step)
        except ZkTokenError as exc:
            out.ok = False
            out.error = _error_name(exc)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"step {i}: malformed step: {exc!r}") from exc
        out.conservation = {name: h.conservation(name) for name in h.tokens}
        outcomes.append(out)
        if not out.as_expected:
            failures.append({"step": i, "flow": flow, "expected_error": out.expected_error, "error": out.error})
        bad = [n for n, c in out.conservation.items() if not c["ok"]]
        if bad:
            failures.append({"step": i, "flow": flow, "conservation": bad})
    for a in doc.get("assertions", []):
        diff = _check_assertion(h, a, outcomes)
        if diff:
            failures.append(diff)
    result = ScenarioResult(doc.get("name", "scenario"), h, outcomes, failures)
    if strict and failures:
        raise ScenarioAssertionFailed(failures)
    return result


def receipts_document(result: ScenarioResult) -> dict:
    h = result.harness
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": result.name,
        "seed": h.seed,
        "participants": {
            name: {"sk": hex(p.sk), "account": hex(p.account), "address": p.address,
                   "contract_account": p.is_contract}
            for name, p in sorted(h.participants.items())
        },
        "steps": [
            {"index": s.index, "flow": s.flow, "ok": s.ok, "error": s.error,
             "expected_error": s.expected_error, "conservation": s.conservation,
             "receipts": [{"flow": r.flow, "step": r.step, "detail": codec.to_json(r.detail),
                           "events": [e.seq for e in r.events]} for r in s.receipts]}
            for s in result.steps
        ],
        "reserves": dict(sorted(h.reserves.items())),
        "failures": result.failures,
        "state_hash": h.chain.state_hash(),
    }
