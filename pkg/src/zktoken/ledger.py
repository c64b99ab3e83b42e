"""The token contract: a single-writer state machine over commitments.

Every entry point validates everything first and mutates last, so a raised
error leaves the contract state untouched.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .backend import ProofSystem
from .circuits import (
    DelegatedHidingTransferTransaction,
    DelegatedMintTransaction,
    DelegatedRevealingTransferTransaction,
    DelegatedTransferTransaction,
    GrabPublicInputs,
    GrabTransaction,
    HidingPublicInputs,
    HidingTransferTransaction,
    MintPublicInputs,
    MintTransaction,
    RevealingPublicInputs,
    RevealingTransferTransaction,
    TransferPublicInputs,
    TransferTransaction,
    default_backend,
    issuer_leaf,
)
from .crypto import DEFAULT_DEPTH, CommitmentTree
from .errors import (
    DoubleSpend,
    DuplicateCommitment,
    GrabberReuse,
    InsufficientBalance,
    IssuerViolation,
    MissingNft,
    NotAuthority,
    NotDelegate,
    OwnerNotContract,
    ParamMismatch,
    ProofRejected,
    StaleRoot,
    TreeFull,
    TypeMismatch,
    UnknownIssuerRoot,
)

Address = str


@dataclass(frozen=True)
class Event:
    kind: str
    contract: Address
    seq: int
    payload: dict = field(default_factory=dict)
    step: int = -1  # position of the carrying transaction in the chain order


@dataclass
class TokenState:
    type_t: int
    auth_add: Address
    auth_acc: int
    audit_acc: int
    grab_nonce: int
    tree_c: CommitmentTree
    tree_i: CommitmentTree
    issuers: dict[Address, bool] = field(default_factory=dict)
    nullifiers: set[int] = field(default_factory=set)
    grabbers: set[int] = field(default_factory=set)
    balances: dict[int, int] = field(default_factory=dict)
    nfts: dict[int, set[int]] = field(default_factory=dict)
    contract_accounts: dict[Address, int] = field(default_factory=dict)
    event_seq: int = 0


class TokenContract:
    """One token type: commitment pool, spent sets and clear contract balances."""

    def __init__(self, address: Address, type_t: int, auth_add: Address, auth_acc: int,
                 audit_acc: int, grab_nonce: int, backend: ProofSystem | None = None,
                 depth: int = DEFAULT_DEPTH, issuer_depth: int = DEFAULT_DEPTH):
        self.address = address
        self.backend = backend if backend is not None else default_backend()
        self.state = TokenState(
            type_t=type_t,
            auth_add=auth_add,
            auth_acc=auth_acc,
            audit_acc=audit_acc,
            grab_nonce=grab_nonce,
            tree_c=CommitmentTree(depth),
            tree_i=CommitmentTree(issuer_depth),
        )

    # -- snapshots (used by the DvP contract for rollback) --------------------

    def save(self) -> TokenState:
        return copy.deepcopy(self.state)

    def restore(self, saved: TokenState) -> None:
        self.state = saved

    # -- helpers ------------------------------------------------------------------

    def _emit(self, kind: str, **payload: Any) -> Event:
        ev = Event(kind, self.address, self.state.event_seq, payload)
        self.state.event_seq += 1
        return ev

    def _verify(self, circuit_id: str, tx: Any) -> None:
        if tx.proof.circuit_id != circuit_id or not self.backend.verify(circuit_id, tx.proof, tx.pub):
            raise ProofRejected(f"{circuit_id} proof does not verify")

    def _require_authority(self, caller: Address) -> None:
        if caller != self.state.auth_add:
            raise NotAuthority(f"{caller!r} is not the token authority")

    def _fresh_comms(self, comms: Iterable[int]) -> None:
        comms = list(comms)
        tree = self.state.tree_c
        if tree.next_index + len(comms) > tree.capacity:
            raise TreeFull(f"{len(comms)} commitments do not fit")
        seen = set()
        for c in comms:
            if c in self.state.tree_c or c in seen:
                raise DuplicateCommitment(hex(c))
            seen.add(c)

    def _fresh_nulls(self, nulls: Iterable[int]) -> None:
        seen = set()
        for n in nulls:
            if n in self.state.nullifiers or n in seen:
                raise DoubleSpend(hex(n))
            seen.add(n)

    def _fresh_grabs(self, grabs: Iterable[int]) -> None:
        seen = set()
        for g in grabs:
            if g in self.state.grabbers or g in seen:
                raise GrabberReuse(hex(g))
            seen.add(g)

    def _check_type(self, type_t: int) -> None:
        if type_t != self.state.type_t:
            raise TypeMismatch(f"token type {type_t:#x} != {self.state.type_t:#x}")

    def _check_root(self, root: int) -> None:
        if not self.state.tree_c.has_root(root):
            raise StaleRoot(f"{root:#x} is not a known commitment root")

    def _check_spend(self, pub: TransferPublicInputs | RevealingPublicInputs) -> None:
        s = self.state
        if pub.audit_acc != s.audit_acc:
            raise ParamMismatch("audit account")
        self._check_type(pub.type_t)
        if pub.nonce_g != s.grab_nonce:
            raise ParamMismatch("grabber nonce")
        self._check_root(pub.root_c)
        self._fresh_nulls(pub.nulls)
        self._fresh_grabs(pub.grabs)
        self._fresh_comms(pub.comms)

    def _spend(self, pub: TransferPublicInputs | RevealingPublicInputs) -> None:
        self.state.nullifiers.update(pub.nulls)
        self.state.grabbers.update(pub.grabs)
        self.state.tree_c.append(pub.comms)

    # -- mint --------------------------------------------------------------------

    def _check_mint(self, pub: MintPublicInputs) -> None:
        self._check_type(pub.type_t)
        self._fresh_comms(pub.comms)
        if pub.root_i and not self.state.tree_i.has_root(pub.root_i):
            raise UnknownIssuerRoot(f"{pub.root_i:#x}")

    def _do_mint(self, pub: MintPublicInputs) -> list[Event]:
        self._check_mint(pub)
        self.state.tree_c.append(pub.comms)
        return [self._emit("Mint", comms=list(pub.comms), root_c=self.state.tree_c.root)]

    def mint(self, t: MintTransaction, caller: Address) -> list[Event]:
        public_i = self.state.issuers.get(caller, False)
        private_i = bool(t.pub.root_i)
        if public_i == private_i:
            raise IssuerViolation("caller must be exactly one of public or hidden issuer")
        self._verify("mint", t)
        return self._do_mint(t.pub)

    # -- transfer / burn ---------------------------------------------------------

    def _do_transfer(self, pub: TransferPublicInputs, **extra: Any) -> list[Event]:
        self._check_spend(pub)
        self._spend(pub)
        common = dict(extra)
        events = [
            self._emit("Transfer", nulls=list(pub.nulls), grabs=list(pub.grabs),
                       comms=list(pub.comms), burn_c=pub.burn_c, audit_d=pub.audit_d,
                       root_c=self.state.tree_c.root, **common),
            # emitted for every transfer so burns stay indistinguishable
            self._emit("Burn", burn_c=pub.burn_c, **common),
        ]
        return events

    def transfer(self, t: TransferTransaction, caller: Address | None = None) -> list[Event]:
        self._verify("transfer", t)
        return self._do_transfer(t.pub)

    # -- revealing ---------------------------------------------------------------

    def _do_revealing(self, pub: RevealingPublicInputs, **extra: Any) -> list[Event]:
        self._check_spend(pub)
        registered = set(self.state.contract_accounts.values())
        for o in pub.outputs:
            if o.owner not in registered:
                raise OwnerNotContract(f"{o.owner:#x} is not a registered contract account")
        self._spend(pub)
        for o in pub.outputs:
            if o.amount:
                self.state.balances[o.owner] = self.state.balances.get(o.owner, 0) + o.amount
            if o.id:
                self.state.nfts.setdefault(o.owner, set()).add(o.id)
        return [
            self._emit("RevealingTransfer", nulls=list(pub.nulls), grabs=list(pub.grabs),
                       comms=list(pub.comms), outputs=list(pub.outputs), audit_d=pub.audit_d,
                       root_c=self.state.tree_c.root, **extra)
        ]

    def revealing_transfer(self, t: RevealingTransferTransaction, caller: Address | None = None) -> list[Event]:
        self._verify("revealing", t)
        return self._do_revealing(t.pub)

    # -- hiding ------------------------------------------------------------------

    def _do_hiding(self, pub: HidingPublicInputs, caller: Address, **extra: Any) -> list[Event]:
        s = self.state
        self._check_type(pub.type_t)
        self._fresh_comms(pub.comms)
        if pub.audit_acc != s.audit_acc:
            raise ParamMismatch("audit account")
        if pub.acc_i:
            owner = pub.acc_i
        elif caller in s.contract_accounts:
            owner = s.contract_accounts[caller]
        else:
            raise OwnerNotContract(f"caller {caller!r} holds no clear balance")
        if s.balances.get(owner, 0) < pub.amount_i:
            raise InsufficientBalance(f"{s.balances.get(owner, 0)} < {pub.amount_i}")
        held = s.nfts.get(owner, set())
        if not set(pub.ids_i) <= held:
            raise MissingNft(str(sorted(set(pub.ids_i) - held)))
        if pub.amount_i:
            s.balances[owner] -= pub.amount_i
        if pub.ids_i:
            held.difference_update(pub.ids_i)
        s.tree_c.append(pub.comms)
        return [
            self._emit("HidingTransfer", comms=list(pub.comms), amount_i=pub.amount_i,
                       ids_i=list(pub.ids_i), owner=owner, audit_d=pub.audit_d,
                       root_c=s.tree_c.root, **extra)
        ]

    def hiding_transfer(self, t: HidingTransferTransaction, caller: Address) -> list[Event]:
        self._verify("hiding", t)
        return self._do_hiding(t.pub, caller)

    # -- grab --------------------------------------------------------------------

    def _do_grab(self, pub: GrabPublicInputs) -> list[Event]:
        self._check_type(pub.type_t)
        self._check_root(pub.root_c)
        self._fresh_grabs(pub.grabs)
        self._fresh_comms(pub.comms)
        self.state.grabbers.update(pub.grabs)
        self.state.tree_c.append(pub.comms)
        return [self._emit("Grab", grabs=list(pub.grabs), comms=list(pub.comms),
                           root_c=self.state.tree_c.root)]

    def grab(self, t: GrabTransaction, caller: Address) -> list[Event]:
        self._require_authority(caller)
        if t.pub.auth_acc != self.state.auth_acc:
            raise ParamMismatch("authority account")
        self._verify("grab", t)
        if t.pub.nonce_g != self.state.grab_nonce:
            raise ParamMismatch("grabber nonce")
        return self._do_grab(t.pub)

    # -- delegated entry points ---------------------------------------------------

    @staticmethod
    def _require_delegate(t: Any, caller: Address) -> None:
        if caller != t.pub.del_add:
            raise NotDelegate(f"{caller!r} is not the bound delegate {t.pub.del_add!r}")

    def delegated_mint(self, t: DelegatedMintTransaction, caller: Address) -> list[Event]:
        self._require_delegate(t, caller)
        if not (self.state.issuers.get(caller, False) or t.pub.pub.root_i):
            raise IssuerViolation("delegate is not an issuer and no issuer root given")
        self._verify("del_mint", t)
        return self._do_mint(t.pub.pub)

    def delegated_transfer(self, t: DelegatedTransferTransaction, caller: Address) -> list[Event]:
        self._require_delegate(t, caller)
        self._verify("del_transfer", t)
        return self._do_transfer(t.pub.pub, delegate=caller)

    def delegated_revealing_transfer(self, t: DelegatedRevealingTransferTransaction,
                                     caller: Address) -> list[Event]:
        self._require_delegate(t, caller)
        self._verify("del_revealing", t)
        return self._do_revealing(t.pub.pub, delegate=caller)

    def delegated_hiding_transfer(self, t: DelegatedHidingTransferTransaction,
                                  caller: Address) -> list[Event]:
        self._require_delegate(t, caller)
        self._verify("del_hiding", t)
        return self._do_hiding(t.pub.pub, caller, delegate=caller)

    # -- administration -----------------------------------------------------------

    def register_issuer(self, addr: Address, flag: bool, caller: Address) -> list[Event]:
        self._require_authority(caller)
        self.state.issuers[addr] = bool(flag)
        return [self._emit("IssuerRegistered", address=addr, flag=bool(flag))]

    def register_hidden_issuer(self, account: int, caller: Address) -> list[Event]:
        self._require_authority(caller)
        root = self.state.tree_i.append([issuer_leaf(account)])
        return [self._emit("HiddenIssuerRegistered", root_i=root)]

    def register_contract_account(self, addr: Address, account: int, caller: Address) -> list[Event]:
        self._require_authority(caller)
        self.state.contract_accounts[addr] = account
        return [self._emit("ContractAccountRegistered", address=addr, account=account)]

    # -- read side -----------------------------------------------------------------

    def is_unspent(self, commitment: int, nullifier: Optional[int] = None) -> bool:
        if commitment not in self.state.tree_c:
            return False
        return nullifier is None or nullifier not in self.state.nullifiers

    def open_mass(self) -> int:
        return sum(self.state.balances.values())

    def snapshot(self) -> dict:
        s = self.state
        return {
            "address": self.address,
            "type_t": s.type_t,
            "auth_add": s.auth_add,
            "auth_acc": s.auth_acc,
            "audit_acc": s.audit_acc,
            "grab_nonce": s.grab_nonce,
            "depth": s.tree_c.depth,
            "commitments": list(s.tree_c.leaves),
            "roots": list(s.tree_c.roots),
            "issuer_leaves": list(s.tree_i.leaves),
            "issuer_roots": list(s.tree_i.roots),
            "issuers": dict(sorted(s.issuers.items())),
            "nullifiers": sorted(s.nullifiers),
            "grabbers": sorted(s.grabbers),
            "balances": {k: v for k, v in sorted(s.balances.items()) if v},
            "nfts": {k: sorted(v) for k, v in sorted(s.nfts.items()) if v},
            "contract_accounts": dict(sorted(s.contract_accounts.items())),
            "event_seq": s.event_seq,
        }
