"""Delivery-versus-payment matching contract."""

from __future__ import annotations

import copy

from .backend import ProofSystem
from .circuits import DvpTransaction, default_backend
from .errors import InnerTransferFailed, NotAuthority, ProofRejected, UnknownTokenType, ZkTokenError
from .ledger import Address, Event, TokenContract


class DvpContract:
    """Holds one leg until its counter-leg arrives, then settles both or neither.

    Legs pair up on their delivery digest: the second leg must carry the same
    ``delivery`` value under which the first was stored.
    """

    def __init__(self, address: Address, deployer: Address, backend: ProofSystem | None = None):
        self.address = address
        self.deployer = deployer
        self.backend = backend if backend is not None else default_backend()
        self.pending: dict[int, DvpTransaction] = {}
        self.contracts: dict[int, TokenContract] = {}
        self.event_seq = 0

    def _emit(self, kind: str, **payload) -> Event:
        ev = Event(kind, self.address, self.event_seq, payload)
        self.event_seq += 1
        return ev

    def register_token_contract(self, type_d: int, contract: TokenContract, caller: Address) -> list[Event]:
        if caller != self.deployer:
            raise NotAuthority(f"{caller!r} is not the DvP deployer")
        self.contracts[type_d] = contract
        return [self._emit("TokenContractRegistered", type_d=type_d, contract=contract.address)]

    def dvp(self, t1: DvpTransaction, caller: Address | None = None) -> list[Event]:
        if t1.proof.circuit_id != "dvp" or not self.backend.verify("dvp", t1.proof, t1.pub):
            raise ProofRejected("dvp proof does not verify")
        if t1.pub.type_d not in self.contracts:
            raise UnknownTokenType(f"{t1.pub.type_d:#x}")
        key = t1.pub.delivery
        t2 = self.pending.get(key)
        if t2 is None:
            self.pending[key] = t1
            return [self._emit("Pending", delivery=key, type_d=t1.pub.type_d)]

        if t2.pub.type_d not in self.contracts:
            raise UnknownTokenType(f"{t2.pub.type_d:#x}")
        token1 = self.contracts[t2.pub.type_d]
        token2 = self.contracts[t1.pub.type_d]
        saved = {id(c): (c, c.save()) for c in (token1, token2)}
        pending_before = dict(self.pending)
        seq_before = self.event_seq
        try:
            events = token1.delegated_transfer(t1.pub.payment, self.address)
            events += token2.delegated_transfer(t2.pub.payment, self.address)
        except ZkTokenError as exc:
            for contract, state in saved.values():
                contract.restore(state)
            self.pending = pending_before
            self.event_seq = seq_before
            raise InnerTransferFailed(exc) from exc
        del self.pending[key]
        events.append(self._emit("Matched", delivery=key))
        return events

    def save(self) -> tuple:
        return copy.deepcopy(self.pending), self.event_seq

    def restore(self, saved: tuple) -> None:
        self.pending, self.event_seq = saved

    def snapshot(self) -> dict:
        return {
            "address": self.address,
            "deployer": self.deployer,
            "contracts": {k: c.address for k, c in sorted(self.contracts.items())},
            "pending": {k: {"type_d": t.pub.type_d, "dvp_bind": t.pub.dvp_bind}
                        for k, t in sorted(self.pending.items())},
            "event_seq": self.event_seq,
        }
