"""A single-writer world of contracts with an ordered, replayable call log."""

from __future__ import annotations

import hashlib
import json
from dataclasses import replace
from typing import Any, Callable

from . import codec
from .circuits import (
    DEFAULT_SEED,
    DelegatedHidingTransferTransaction,
    DelegatedMintTransaction,
    DelegatedRevealingTransferTransaction,
    DelegatedTransferTransaction,
    DvpTransaction,
    GrabTransaction,
    HidingTransferTransaction,
    MintTransaction,
    RevealingTransferTransaction,
    TransferTransaction,
    make_backend,
)
from .crypto import DEFAULT_DEPTH
from .dvp import DvpContract
from .errors import ParseError, ReplayError, UnknownContract, ZkTokenError
from .ledger import Address, Event, TokenContract

SCHEMA_VERSION = 1

_TOKEN_TX_OPS: dict[str, type] = {
    "mint": MintTransaction,
    "transfer": TransferTransaction,
    "revealing_transfer": RevealingTransferTransaction,
    "hiding_transfer": HidingTransferTransaction,
    "grab": GrabTransaction,
    "delegated_mint": DelegatedMintTransaction,
    "delegated_transfer": DelegatedTransferTransaction,
    "delegated_revealing_transfer": DelegatedRevealingTransferTransaction,
    "delegated_hiding_transfer": DelegatedHidingTransferTransaction,
}

_ARG_TYPES: dict[str, dict[str, Any]] = {
    "deploy_token": {"type_t": int, "auth_add": str, "auth_acc": int, "audit_acc": int, "grab_nonce": int},
    "deploy_dvp": {},
    "register_issuer": {"addr": str, "flag": bool},
    "register_hidden_issuer": {"account": int},
    "register_contract_account": {"addr": str, "account": int},
    "register_token_contract": {"type_d": int, "contract": str},
    "dvp": {"tx": DvpTransaction},
    **{op: {"tx": tp} for op, tp in _TOKEN_TX_OPS.items()},
}


class Chain:
    """Holds every contract, the global event log and the accepted-call log.

    Only accepted calls enter ``txlog``; rejected calls leave no trace in
    state, so replaying the log reproduces the state exactly.
    """

    def __init__(self, backend_seed: str = DEFAULT_SEED, depth: int = DEFAULT_DEPTH):
        self.backend_seed = backend_seed
        self.depth = depth
        self.backend = make_backend(backend_seed)
        self.contracts: dict[Address, TokenContract | DvpContract] = {}
        self.events: list[Event] = []
        self.txlog: list[dict] = []

    # -- lookup ---------------------------------------------------------------------

    def token(self, address: Address) -> TokenContract:
        c = self.contracts.get(address)
        if not isinstance(c, TokenContract):
            raise UnknownContract(f"no token contract at {address!r}")
        return c

    def dvp_contract(self, address: Address) -> DvpContract:
        c = self.contracts.get(address)
        if not isinstance(c, DvpContract):
            raise UnknownContract(f"no DvP contract at {address!r}")
        return c

    @property
    def step(self) -> int:
        return len(self.txlog)

    # -- the single write path ------------------------------------------------

    def call(self, op: str, caller: Address, target: Address, **args: Any) -> list[Event]:
        if op not in _ARG_TYPES:
            raise UnknownContract(f"unknown operation {op!r}")
        events = self._dispatch(op, caller, target, args)
        step = self.step
        events = [replace(e, step=step) for e in events]
        self.events.extend(events)
        self.txlog.append({"op": op, "caller": caller, "target": target,
                           "args": {k: codec.to_json(v) for k, v in args.items()}})
        return events

    def _dispatch(self, op: str, caller: Address, target: Address, args: dict) -> list[Event]:
        if op == "deploy_token":
            if target in self.contracts:
                raise UnknownContract(f"address {target!r} already in use")
            self.contracts[target] = TokenContract(target, backend=self.backend, depth=self.depth, **args)
            return [Event("Deployed", target, 0, {"kind": "token", "type_t": args["type_t"]})]
        if op == "deploy_dvp":
            if target in self.contracts:
                raise UnknownContract(f"address {target!r} already in use")
            self.contracts[target] = DvpContract(target, caller, backend=self.backend)
            return [Event("Deployed", target, 0, {"kind": "dvp"})]
        if op == "register_token_contract":
            return self.dvp_contract(target).register_token_contract(
                args["type_d"], self.token(args["contract"]), caller)
        if op == "dvp":
            return self.dvp_contract(target).dvp(args["tx"], caller)
        token = self.token(target)
        if op in _TOKEN_TX_OPS:
            method: Callable[..., list[Event]] = getattr(token, op)
            return method(args["tx"], caller)
        return getattr(token, op)(caller=caller, **args)

    # -- snapshots & replay ---------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "backend_seed": self.backend_seed,
            "step": self.step,
            "event_count": len(self.events),
            "contracts": {a: c.snapshot() for a, c in sorted(self.contracts.items())},
        }

    def state_hash(self) -> str:
        return hashlib.sha256(codec.dumps(self.snapshot()).encode()).hexdigest()

    def txlog_document(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "backend_seed": self.backend_seed,
            "depth": self.depth,
            "transactions": list(self.txlog),
        }

    def event_log(self) -> list[dict]:
        return [event_json(e) for e in self.events]

    @classmethod
    def replay(cls, document: dict, limit: int | None = None) -> Chain:
        """Rebuild a chain from a txlog document; errors name the failing index."""
        try:
            chain = cls(document.get("backend_seed", DEFAULT_SEED), int(document.get("depth", DEFAULT_DEPTH)))
            entries = document["transactions"]
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"malformed transaction log: {exc}") from exc
        for index, entry in enumerate(entries[:limit]):
            try:
                op, args = decode_call(entry)
                try:
                    caller, target = entry["caller"], entry["target"]
                except KeyError as exc:
                    raise ParseError(f"transaction entry lacks {exc}") from exc
                chain.call(op, caller, target, **args)
            except ZkTokenError as exc:
                raise ReplayError(index, exc) from exc
        return chain


def event_json(e: Event) -> dict:
    return {"step": e.step, "contract": e.contract, "seq": e.seq, "kind": e.kind,
            "payload": codec.to_json(e.payload)}


def decode_call(entry: dict) -> tuple[str, dict]:
    try:
        op = entry["op"]
        types = _ARG_TYPES[op]
        raw = entry.get("args", {})
        return op, {k: codec.from_json(types[k], raw[k]) for k in types}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad transaction entry: {exc!r}") from exc


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
