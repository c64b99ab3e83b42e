"""Multi-party flows wired to the chain.

A :class:`Harness` owns every participant's keys, so it can act as each bank
in turn, keep the private channel between them, and track the ground truth
(which hidden tokens exist) that the ledger itself never sees.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from . import codec
from .chain import Chain, event_json
from .circuits import (
    DEFAULT_SEED,
    DelegatedHidingTransferTransaction,
    DelegatedMintTransaction,
    DelegatedRevealingTransferTransaction,
    DelegatedTransferTransaction,
    DvpPublicInputs,
    DvpTransaction,
    DvpWitness,
    GrabTransaction,
    GrabWitness,
    HidingTransferTransaction,
    HidingWitness,
    ImgPath,
    MintTransaction,
    MintWitness,
    RevealingTransferTransaction,
    RevealingWitness,
    TransferTransaction,
    TransferWitness,
    audit_plaintext,
    audit_record,
    build_dvp_public,
    build_grab_public,
    build_hiding_public,
    build_mint_public,
    build_revealing_public,
    build_transfer_public,
    burn_commitment,
    delegate,
    delivery_hash,
    issuer_leaf,
    witness_hash,
)
from .crypto import (
    DEFAULT_DEPTH,
    SealedBox,
    create_grabber_key,
    derive_public_key,
    get_account,
    hash256,
    open_with_key,
    seal_to_key,
    verify_binding,
)
from .errors import ParseError, WrongKey, ZkTokenError
from .ledger import Address, Event, TokenContract
from .model import (
    AuditRecord,
    BurnPreimage,
    DvpPreimage,
    NullifierPreimage,
    TokenPreimage,
    TransferPreimage,
    commit,
    envelope_from_json,
    envelope_to_json,
    grab_token,
    nullify,
)

AUTHORITY = "authority"
AUDITOR = "auditor"
DVP_ADDRESS = "dvp"


@dataclass
class WalletEntry:
    contract: Address
    token: TokenPreimage

    @property
    def commitment(self) -> int:
        return commit(self.token)


@dataclass
class Participant:
    name: str
    sk: int
    pk: bytes
    account: int
    address: Address
    grabber_keys: dict[Address, int] = field(default_factory=dict)
    wallet: list[WalletEntry] = field(default_factory=list)
    is_contract: bool = False

    def holdings(self, contract: Address) -> list[TokenPreimage]:
        return [w.token for w in self.wallet if w.contract == contract]

    def balance(self, contract: Address) -> int:
        return sum(t.amount for t in self.holdings(contract))

    def ids(self, contract: Address) -> list[int]:
        return sorted(t.id for t in self.holdings(contract) if t.id)


@dataclass(frozen=True)
class ChannelMessage:
    sender: str
    recipient: str
    kind: str  # transfer-preimage | burn-preimage | dvp-request | grabber-key | ack
    body: str
    signature: Optional[str] = None  # placeholder, never verified


@dataclass
class Receipt:
    flow: str
    step: int
    events: list[Event]
    detail: dict = field(default_factory=dict)


class Harness:
    def __init__(self, seed: int = 0, depth: int = DEFAULT_DEPTH, backend_seed: str = DEFAULT_SEED):
        self.seed = seed
        self.rng = random.Random(seed)
        self.chain = Chain(backend_seed, depth)
        self.participants: dict[str, Participant] = {}
        self.channel: list[ChannelMessage] = []
        self.tokens: dict[str, Address] = {}  # token name -> contract address
        self.reserves: dict[str, int] = {}
        self.labels: dict[str, WalletEntry] = {}
        # ground truth, per token contract
        self.hidden: dict[Address, dict[int, TokenPreimage]] = {}
        self.minted: dict[Address, int] = {}
        self.minted_ids: dict[Address, Counter] = {}
        self.burned: dict[Address, int] = {}
        self.burned_ids: dict[Address, Counter] = {}
        self.audit_truth: dict[tuple[Address, int], AuditRecord] = {}
        self.grabber_registry: dict[Address, dict[int, int]] = {}  # held by the authority
        self.authority = self._new_participant(AUTHORITY)
        self.auditor = self._new_participant(AUDITOR)
        self.dvp_address: Optional[Address] = None

    # -- setup ---------------------------------------------------------------------

    def _rand(self) -> int:
        return self.rng.getrandbits(256)

    def _new_key(self) -> int:
        while True:
            sk = self._rand()
            if sk:
                return sk

    def _new_participant(self, name: str, is_contract: bool = False) -> Participant:
        if name in self.participants:
            raise ValueError(f"participant {name!r} already exists")
        sk = self._new_key()
        pk = derive_public_key(sk)
        p = Participant(name, sk, pk, get_account(sk), name, is_contract=is_contract)
        self.participants[name] = p
        return p

    def participant(self, name: str) -> Participant:
        try:
            return self.participants[name]
        except KeyError:
            raise ParseError(f"unknown participant {name!r}") from None

    def by_account(self, account: int) -> Optional[Participant]:
        for p in self.participants.values():
            if p.account == account:
                return p
        return None

    def contract(self, token: str) -> TokenContract:
        try:
            return self.chain.token(self.tokens[token])
        except KeyError:
            raise ParseError(f"unknown token {token!r}") from None

    def deploy_token(self, name: str, type_t: int) -> TokenContract:
        address = f"token:{name}"
        self.chain.call("deploy_token", AUTHORITY, address, type_t=type_t, auth_add=AUTHORITY,
                        auth_acc=self.authority.account, audit_acc=self.auditor.account,
                        grab_nonce=self._rand())
        self.chain.call("register_issuer", AUTHORITY, address, addr=AUTHORITY, flag=True)
        self.tokens[name] = address
        self.hidden[address] = {}
        self.minted[address] = 0
        self.minted_ids[address] = Counter()
        self.burned[address] = 0
        self.burned_ids[address] = Counter()
        for p in list(self.participants.values()):
            self._onboard(p, address)
        if self.dvp_address is not None:
            self.chain.call("register_token_contract", AUTHORITY, self.dvp_address,
                            type_d=type_t, contract=address)
        return self.chain.token(address)

    def deploy_dvp(self, address: Address = DVP_ADDRESS) -> None:
        self.chain.call("deploy_dvp", AUTHORITY, address)
        self.dvp_address = address
        for addr in self.tokens.values():
            token = self.chain.token(addr)
            self.chain.call("register_token_contract", AUTHORITY, address,
                            type_d=token.state.type_t, contract=addr)

    def add_participant(self, name: str) -> Participant:
        p = self._new_participant(name)
        for addr in self.tokens.values():
            self._onboard(p, addr)
        return p

    def add_contract_account(self, name: str, token: str | None = None) -> Participant:
        """A contract-held account (clear balances); registered on every token unless restricted."""
        p = self._new_participant(name, is_contract=True)
        targets = [self.tokens[token]] if token else list(self.tokens.values())
        for addr in targets:
            self._onboard(p, addr)
            self.chain.call("register_contract_account", AUTHORITY, addr, addr=p.address, account=p.account)
        return p

    def add_hidden_issuer(self, name: str, token: str) -> Participant:
        p = self.participants.get(name) or self.add_participant(name)
        self.chain.call("register_hidden_issuer", AUTHORITY, self.tokens[token], account=p.account)
        return p

    def register_public_issuer(self, name: str, token: str, flag: bool = True) -> None:
        self.chain.call("register_issuer", AUTHORITY, self.tokens[token], addr=name, flag=flag)

    def _onboard(self, p: Participant, address: Address) -> None:
        """Participant derives its grabber key and hands it to the authority."""
        nonce_g = self.chain.token(address).state.grab_nonce
        gk = create_grabber_key(p.sk, nonce_g)
        p.grabber_keys[address] = gk
        self._send(p.name, AUTHORITY, "grabber-key", codec.dumps({"contract": address, "gk": gk}))
        if verify_binding(p.pk, gk) != nonce_g:
            raise WrongKey(f"grabber key of {p.name} does not bind to {address}")
        self.grabber_registry.setdefault(address, {})[p.account] = gk

    # -- channel -------------------------------------------------------------------

    def _send(self, sender: str, recipient: str, kind: str, body: str) -> ChannelMessage:
        msg = ChannelMessage(sender, recipient, kind, body)
        self.channel.append(msg)
        return msg

    def _ack(self, original: ChannelMessage) -> ChannelMessage:
        return self._send(original.recipient, original.sender, "ack", codec.dumps(
            {"kind": original.kind, "digest": hash256(original.body.encode())}))

    # -- ground-truth bookkeeping ------------------------------------------------

    def _nonce_token(self, owner: int, type_t: int, amount: int = 0, id: int = 0,
                     payload: bytes | None = None) -> TokenPreimage:
        return TokenPreimage(owner, type_t, self._rand(), amount, id, payload)

    def _apply(self, address: Address, spent: Iterable[TokenPreimage], created: Iterable[TokenPreimage]) -> None:
        hidden = self.hidden[address]
        for t in spent:
            hidden.pop(commit(t), None)
        for t in created:
            hidden[commit(t)] = t
        self._sync_wallets(address)

    def _sync_wallets(self, address: Address) -> None:
        """Drop wallet entries that are no longer spendable (spent or seized)."""
        state = self.chain.token(address).state
        for p in self.participants.values():
            keep = []
            for w in p.wallet:
                if w.contract == address:
                    c = w.commitment
                    gk = p.grabber_keys.get(address)
                    if c not in self.hidden[address]:
                        continue
                    if gk is not None and grab_token(w.token, gk) in state.grabbers:
                        continue
                keep.append(w)
            p.wallet = keep

    def _recognize(self, p: Participant, address: Address, tokens: Iterable[TokenPreimage],
                   events: Sequence[Event]) -> list[WalletEntry]:
        """Add the tokens whose commitments appear in the events to ``p``'s wallet."""
        published = {c for e in events if e.contract == address for c in e.payload.get("comms", ())}
        added = []
        for t in tokens:
            if t.owner == p.account and commit(t) in published:
                entry = WalletEntry(address, t)
                p.wallet.append(entry)
                added.append(entry)
        return added

    def _record_audit(self, events: Sequence[Event], records: Sequence[AuditRecord]) -> None:
        for r in records:
            sealed = seal_to_key(self.auditor.pk, audit_plaintext(r)).to_bytes()
            for e in events:
                if e.payload.get("audit_d") == sealed:
                    self.audit_truth[(e.contract, e.seq)] = r

    def conservation(self, token: str) -> dict:
        address = self.tokens[token]
        state = self.chain.token(address).state
        hidden = sum(t.amount for t in self.hidden[address].values())
        hidden_ids = Counter(t.id for t in self.hidden[address].values() if t.id)
        open_ids = Counter(i for ids in state.nfts.values() for i in ids)
        opened = sum(state.balances.values())
        return {
            "minted": self.minted[address],
            "hidden": hidden,
            "open": opened,
            "burned": self.burned[address],
            "ok": self.minted[address] == hidden + opened + self.burned[address]
            and self.minted_ids[address] == hidden_ids + open_ids + self.burned_ids[address],
        }

    def reconcile(self) -> list[str]:
        """Wallet tokens that are not unspent leaves on the ledger (should be empty)."""
        problems = []
        for p in self.participants.values():
            for w in p.wallet:
                state = self.chain.token(w.contract).state
                c = w.commitment
                if c not in state.tree_c:
                    problems.append(f"{p.name}: {c:#x} not in tree")
                elif nullify(w.token, p.sk) in state.nullifiers:
                    problems.append(f"{p.name}: {c:#x} already spent")
        return problems

    # -- helpers for spends ------------------------------------------------------

    def _paths(self, contract: TokenContract, tokens: Sequence[TokenPreimage]) -> tuple[int, tuple[ImgPath, ...]]:
        tree = contract.state.tree_c
        root = tree.root
        return root, tuple(ImgPath(t, tree.proof_for(tree.index_of(commit(t)))) for t in tokens)

    def select(self, p: Participant, address: Address, amount: int = 0,
               ids: Sequence[int] = (), labels: Sequence[str] = ()) -> list[TokenPreimage]:
        """Choose input tokens: explicit labels, NFTs by id, then fungible tokens until ``amount``."""
        chosen = [self.labels[l].token for l in labels]
        have = sum(t.amount for t in chosen)
        for i in ids:
            if any(t.id == i for t in chosen):
                continue
            match = [t for t in p.holdings(address) if t.id == i]
            if not match:
                raise ParseError(f"{p.name} holds no NFT {i}")
            chosen.append(match[0])
            have += match[0].amount
        for t in p.holdings(address):
            if have >= amount:
                break
            if t.id == 0 and t not in chosen:
                chosen.append(t)
                have += t.amount
        if have < amount:
            raise ParseError(f"{p.name} holds {have} < {amount} in {address}")
        return chosen

    def _outputs(self, type_t: int, inputs: Sequence[TokenPreimage], payer: Participant,
                 pays: Sequence[tuple[int, int]], ids_to: Sequence[tuple[int, int]],
                 burn_a: int, burn_ids: Sequence[int], reveal: int = 0,
                 reveal_ids: Sequence[int] = ()) -> tuple[list[TokenPreimage], list[TokenPreimage]]:
        """Hidden outputs for payees plus change; returns ``(payee_outputs, change)``."""
        total = sum(t.amount for t in inputs)
        paid = sum(a for _, a in pays)
        change = total - paid - burn_a - reveal
        if change < 0:
            raise ParseError("inputs do not cover the requested amounts")
        outs = [self._nonce_token(acc, type_t, amount=a) for acc, a in pays if a]
        outs += [self._nonce_token(acc, type_t, id=i) for acc, i in ids_to]
        moved = {i for _, i in ids_to} | set(burn_ids) | set(reveal_ids)
        keep_ids = [t.id for t in inputs if t.id and t.id not in moved]
        rest = []
        if change:
            rest.append(self._nonce_token(payer.account, type_t, amount=change))
        rest += [self._nonce_token(payer.account, type_t, id=i) for i in keep_ids]
        return outs, rest

    def _label(self, label: Optional[str], entries: Sequence[WalletEntry]) -> None:
        if label and entries:
            self.labels[label] = entries[0]
            for k, e in enumerate(entries[1:], 1):
                self.labels[f"{label}.{k}"] = e

    # -- flows ---------------------------------------------------------------------

    def issue(self, token: str, to: str, amount: int = 0, id: int = 0, issuer: str = AUTHORITY,
              hidden_issuer: bool = False, label: str | None = None, del_add: str | None = None,
              payload: bytes | None = None) -> Receipt:
        """Issuance: reserve debit, mint proof, submission, wallet credit on the event."""
        contract = self.contract(token)
        address = contract.address
        bank = self.participant(to)
        iss = self.participant(issuer)
        out = self._nonce_token(bank.account, contract.state.type_t, amount, id, payload)
        if hidden_issuer:
            tree_i = contract.state.tree_i
            idx = tree_i.index_of(issuer_leaf(iss.account))
            wit = MintWitness((out,), iss.sk, tree_i.proof_for(idx))
            pub = build_mint_public(wit, contract.state.type_t, tree_i.root)
        else:
            wit = MintWitness((out,))
            pub = build_mint_public(wit, contract.state.type_t)
        if del_add is None:
            tx = MintTransaction(pub, self.chain.backend.prove("mint", wit, pub))
            events = self.chain.call("mint", iss.address, address, tx=tx)
        else:
            dpub = delegate(wit, pub, del_add)
            tx = DelegatedMintTransaction(dpub, self.chain.backend.prove("del_mint", wit, dpub))
            events = self.chain.call("delegated_mint", del_add, address, tx=tx)
        self.reserves[to] = self.reserves.get(to, 0) - amount
        self.minted[address] += amount
        if id:
            self.minted_ids[address][id] += 1
        self._apply(address, (), (out,))
        entries = self._recognize(bank, address, (out,), events)
        self._label(label, entries)
        return Receipt("issue", self.chain.step - 1, events, {"commitment": commit(out)})

    def transfer(self, token: str, payer: str, pays: Sequence[tuple[str, int]] = (),
                 nfts: Sequence[tuple[str, int]] = (), burn: int = 0, burn_ids: Sequence[int] = (),
                 inputs: Sequence[str] = (), label: str | None = None, del_add: str | None = None,
                 submit_as: str | None = None) -> Receipt:
        """Transfer and/or withdrawal in one transaction."""
        contract = self.contract(token)
        address = contract.address
        src = self.participant(payer)
        type_t = contract.state.type_t
        pay_accs = [(self.participant(n).account, a) for n, a in pays]
        nft_accs = [(self.participant(n).account, i) for n, i in nfts]
        need = sum(a for _, a in pays) + burn
        ids_needed = [i for _, i in nfts] + list(burn_ids)
        imgs = self.select(src, address, need, ids_needed, inputs)
        outs, change = self._outputs(type_t, imgs, src, pay_accs, nft_accs, burn, burn_ids)
        root, paths = self._paths(contract, imgs)
        wit = TransferWitness(paths, tuple(outs + change), src.sk, self.auditor.pk, burn, tuple(burn_ids))
        pub = build_transfer_public(wit, type_t, root, contract.state.grab_nonce)

        # off-chain: payee gets the transfer preimage, authority the burn preimage
        sent: list[ChannelMessage] = []
        for name in dict.fromkeys(n for n, _ in list(pays) + list(nfts)):
            acc = self.participant(name).account
            env = TransferPreimage(tuple(t for t in outs if t.owner == acc),
                                   tuple(NullifierPreimage.of(t) for t in imgs))
            sent.append(self._send(payer, name, "transfer-preimage", envelope_to_json(env)))
        burn_env = None
        if burn or burn_ids:
            burn_env = BurnPreimage(witness_hash(wit), burn, tuple(burn_ids))
            sent.append(self._send(payer, AUTHORITY, "burn-preimage", envelope_to_json(burn_env)))
        for m in sent:
            self._ack(m)

        if del_add is None:
            tx = TransferTransaction(pub, self.chain.backend.prove("transfer", wit, pub))
            events = self.chain.call("transfer", submit_as or src.address, address, tx=tx)
        else:
            dpub = delegate(wit, pub, del_add)
            tx = DelegatedTransferTransaction(dpub, self.chain.backend.prove("del_transfer", wit, dpub))
            events = self.chain.call("delegated_transfer", submit_as or del_add, address, tx=tx)

        self._apply(address, imgs, outs + change)
        self._record_audit(events, [audit_record(wit)])
        self.burned[address] += burn
        self.burned_ids[address].update(burn_ids)
        for m in sent:
            self._receive(m, address, events)
        created = self._recognize(src, address, change, events)
        if burn_env is not None:
            self.reserves[payer] = self.reserves.get(payer, 0) + burn_env.amount
        if label:
            payee_entries = [w for n in dict.fromkeys(n for n, _ in list(pays) + list(nfts))
                             for w in self.participant(n).wallet if w.token in outs]
            self._label(label, payee_entries or created)
        return Receipt("transfer", self.chain.step - 1, events,
                       {"inputs": len(imgs), "outputs": len(outs) + len(change), "burn_c": pub.burn_c})

    def _receive(self, msg: ChannelMessage, address: Address, events: Sequence[Event]) -> None:
        """Counterparty side: recognize outputs, validate consumed tokens, authority credits burns."""
        if msg.kind == "transfer-preimage":
            env = envelope_from_json(TransferPreimage, msg.body)
            tree = self.chain.token(address).state.tree_c
            for npre in env.inputs or ():
                if npre.commitment() not in tree:
                    raise ParseError("transfer preimage names a token unknown to the ledger")
            self._recognize(self.participant(msg.recipient), address, env.outputs, events)
        elif msg.kind == "burn-preimage":
            env = envelope_from_json(BurnPreimage, msg.body)
            expected = burn_commitment(env.amount, env.ids, env.nonce)
            if not any(e.kind == "Burn" and e.payload.get("burn_c") == expected for e in events):
                raise ParseError("no burn event matches the burn preimage")

    def withdraw(self, token: str, payer: str, amount: int = 0, ids: Sequence[int] = (), **kw) -> Receipt:
        r = self.transfer(token, payer, burn=amount, burn_ids=ids, **kw)
        r.flow = "withdraw"
        return r

    def reveal(self, token: str, owner: str, vault: str, amount: int = 0, ids: Sequence[int] = (),
               inputs: Sequence[str] = (), del_add: str | None = None) -> Receipt:
        """Move value from the hidden pool into a contract account's clear balance."""
        contract = self.contract(token)
        address = contract.address
        src = self.participant(owner)
        dst = self.participant(vault)
        type_t = contract.state.type_t
        imgs = self.select(src, address, amount, ids, inputs)
        _, change = self._outputs(type_t, imgs, src, (), (), 0, (), amount, ids)
        clear = []
        if amount:
            clear.append(TokenPreimage(dst.account, type_t, 0, amount))
        clear += [TokenPreimage(dst.account, type_t, 0, 0, i) for i in ids]
        root, paths = self._paths(contract, imgs)
        wit = RevealingWitness(paths, src.sk, self.auditor.pk, tuple(change))
        pub = build_revealing_public(wit, clear, type_t, root, contract.state.grab_nonce)
        if del_add is None:
            tx = RevealingTransferTransaction(pub, self.chain.backend.prove("revealing", wit, pub))
            events = self.chain.call("revealing_transfer", src.address, address, tx=tx)
        else:
            dpub = delegate(wit, pub, del_add)
            tx = DelegatedRevealingTransferTransaction(dpub, self.chain.backend.prove("del_revealing", wit, dpub))
            events = self.chain.call("delegated_revealing_transfer", del_add, address, tx=tx)
        self._apply(address, imgs, change)
        self._record_audit(events, [audit_record(wit)])
        self._recognize(src, address, change, events)
        return Receipt("reveal", self.chain.step - 1, events, {"clear": len(clear)})

    def hide(self, token: str, vault: str, to: str, amount: int = 0, ids: Sequence[int] = (),
             signer: str | None = None, caller: str | None = None, del_add: str | None = None,
             label: str | None = None) -> Receipt:
        """Consume a contract account's clear balance into new hidden tokens for ``to``.

        With ``signer`` the proof names the account explicitly (``acc_i``) and is
        signed by that key; otherwise the contract account itself is the caller.
        """
        contract = self.contract(token)
        address = contract.address
        src = self.participant(vault)
        dst = self.participant(to)
        type_t = contract.state.type_t
        outs = []
        if amount:
            outs.append(self._nonce_token(dst.account, type_t, amount=amount))
        outs += [self._nonce_token(dst.account, type_t, id=i) for i in ids]
        if signer is not None:
            sk = self.participant(signer).sk
            wit = HidingWitness(tuple(outs), self.auditor.pk, sk)
            pub = build_hiding_public(wit, type_t, amount, ids, src.account)
            who = caller or dst.address
        else:
            wit = HidingWitness(tuple(outs), self.auditor.pk)
            pub = build_hiding_public(wit, type_t, amount, ids)
            who = caller or src.address
        if del_add is None:
            tx = HidingTransferTransaction(pub, self.chain.backend.prove("hiding", wit, pub))
            events = self.chain.call("hiding_transfer", who, address, tx=tx)
        else:
            dpub = delegate(wit, pub, del_add)
            tx = DelegatedHidingTransferTransaction(dpub, self.chain.backend.prove("del_hiding", wit, dpub))
            events = self.chain.call("delegated_hiding_transfer", del_add, address, tx=tx)
        self._apply(address, (), outs)
        self._record_audit(events, [audit_record(wit)])
        entries = self._recognize(dst, address, outs, events)
        self._label(label, entries)
        return Receipt("hide", self.chain.step - 1, events, {"outputs": len(outs)})

    def grab(self, token: str, label: str, caller: str = AUTHORITY, to: str = AUTHORITY) -> Receipt:
        """Authority seizes a labelled token using the owner's grabber key."""
        contract = self.contract(token)
        address = contract.address
        victim_entry = self.labels[label]
        victim_token = victim_entry.token
        victim = self.by_account(victim_token.owner)
        if victim is None:
            raise ParseError(f"no participant owns token {label!r}")
        gk = self.grabber_registry[address][victim.account]
        recipient = self.participant(to)
        out = self._nonce_token(recipient.account, contract.state.type_t,
                                victim_token.amount, victim_token.id, victim_token.payload)
        root, paths = self._paths(contract, [victim_token])
        wit = GrabWitness(paths, (out,), self.authority.sk, victim.pk, gk)
        pub = build_grab_public(wit, contract.state.type_t, root, contract.state.grab_nonce)
        tx = GrabTransaction(pub, self.chain.backend.prove("grab", wit, pub))
        events = self.chain.call("grab", caller, address, tx=tx)
        self._apply(address, [victim_token], [out])
        self._recognize(recipient, address, [out], events)
        return Receipt("grab", self.chain.step - 1, events, {"victim": victim.name})

    # -- DvP -------------------------------------------------------------------------

    def prepare_dvp_leg(self, token: str, payer: str, payee: str, amount: int = 0,
                        ids: Sequence[int] = (), inputs: Sequence[str] = ()) -> dict:
        """One bank's payment, proven as a transfer delegated to the DvP contract."""
        if self.dvp_address is None:
            raise ParseError("no DvP contract deployed")
        contract = self.contract(token)
        src = self.participant(payer)
        dst = self.participant(payee)
        type_t = contract.state.type_t
        imgs = self.select(src, contract.address, amount, ids, inputs)
        outs, change = self._outputs(type_t, imgs, src, [(dst.account, amount)],
                                     [(dst.account, i) for i in ids], 0, ())
        root, paths = self._paths(contract, imgs)
        wit = TransferWitness(paths, tuple(outs + change), src.sk, self.auditor.pk)
        pub = build_transfer_public(wit, type_t, root, contract.state.grab_nonce)
        dpub = delegate(wit, pub, self.dvp_address)
        dtt = DelegatedTransferTransaction(dpub, self.chain.backend.prove("del_transfer", wit, dpub))
        return {"token": token, "address": contract.address, "payer": src, "payee": dst,
                "inputs": imgs, "outputs": outs, "change": change, "wit": wit, "dtt": dtt}

    def build_dvp_pair(self, leg_a: dict, leg_b: dict) -> tuple[DvpTransaction, DvpTransaction]:
        """Both legs commit to the same delivery digest: every token changing hands."""
        deal = sorted(leg_a["outputs"] + leg_b["outputs"], key=commit)
        txs = []
        for mine, theirs in ((leg_a, leg_b), (leg_b, leg_a)):
            env = DvpPreimage(tuple(mine["outputs"]), tuple(theirs["outputs"]),
                              tuple(NullifierPreimage.of(t) for t in mine["inputs"]))
            msg = self._send(mine["payer"].name, theirs["payer"].name, "dvp-request", envelope_to_json(env))
            self._ack(msg)
            type_d = self.contract(theirs["token"]).state.type_t
            wit = DvpWitness(mine["wit"], tuple(deal))
            pub = build_dvp_public(wit, mine["dtt"], type_d)
            txs.append(DvpTransaction(pub, self.chain.backend.prove("dvp", wit, pub)))
        return txs[0], txs[1]

    def submit_dvp_leg(self, tx: DvpTransaction, caller: str, legs: Sequence[dict] = ()) -> Receipt:
        events = self.chain.call("dvp", caller, self.dvp_address, tx=tx)
        matched = any(e.kind == "Matched" for e in events)
        if matched:
            for leg in legs:
                self._apply(leg["address"], leg["inputs"], leg["outputs"] + leg["change"])
                self._record_audit(events, [audit_record(leg["wit"])])
                self._recognize(leg["payee"], leg["address"], leg["outputs"], events)
                self._recognize(leg["payer"], leg["address"], leg["change"], events)
        return Receipt("dvp", self.chain.step - 1, events, {"matched": matched})

    def dvp(self, token_a: str, bank_a: str, amount_a: int, token_b: str, bank_b: str,
            amount_b: int = 0, ids_a: Sequence[int] = (), ids_b: Sequence[int] = (),
            order: str = "ab", submit: str = "ab") -> list[Receipt]:
        """Bank A pays ``token_a`` to B; B delivers ``token_b`` to A; settled atomically."""
        leg_a = self.prepare_dvp_leg(token_a, bank_a, bank_b, amount_a, ids_a)
        leg_b = self.prepare_dvp_leg(token_b, bank_b, bank_a, amount_b, ids_b)
        tx_a, tx_b = self.build_dvp_pair(leg_a, leg_b)
        plan = {"a": (tx_a, bank_a), "b": (tx_b, bank_b)}
        receipts = []
        for who in order:
            if who not in submit:
                continue
            tx, caller = plan[who]
            receipts.append(self.submit_dvp_leg(tx, caller, (leg_a, leg_b)))
        return receipts

    def pending_count(self) -> int:
        return len(self.chain.dvp_contract(self.dvp_address).pending) if self.dvp_address else 0

    # -- audit ---------------------------------------------------------------------

    def audit_report(self, auditor_sk: int | None = None) -> dict:
        sk = self.auditor.sk if auditor_sk is None else auditor_sk
        return audit_decrypt(sk, self.chain.event_log())

    def audit_matches_truth(self, report: dict) -> bool:
        got = {(e["contract"], e["seq"]): e["record"] for e in report["entries"]}
        want = {k: codec.to_json(v) for k, v in self.audit_truth.items()}
        return got == want


def audit_decrypt(auditor_sk: int, event_log: Sequence[Any], fields: Sequence[str] | None = None) -> dict:
    """Open every ``audit_d`` in a JSON event log; a foreign key raises WrongKey."""
    entries = []
    totals: dict[str, dict[str, int]] = {}
    for ev in event_log:
        if isinstance(ev, Event):
            ev = event_json(ev)
        audit_hex = ev.get("payload", {}).get("audit_d")
        if audit_hex is None:
            continue
        box = SealedBox.from_bytes(bytes.fromhex(audit_hex[2:]))
        plain = open_with_key(auditor_sk, box)
        record = envelope_from_json(AuditRecord, plain)
        if audit_plaintext(record) != plain:
            raise ParseError("audit plaintext is not canonical")
        t = totals.setdefault(ev["contract"], {"inputs": 0, "outputs": 0, "burned": 0, "revealed": 0,
                                                "hidden_from_clear": 0})
        t["inputs"] += sum(x.amount for x in record.inputs)
        t["outputs"] += sum(x.amount for x in record.outputs)
        t["burned"] += record.burn_a
        if ev["kind"] == "RevealingTransfer":
            t["revealed"] += sum(int(o["amount"], 16) for o in ev["payload"]["outputs"])
        if ev["kind"] == "HidingTransfer":
            t["hidden_from_clear"] += int(ev["payload"]["amount_i"], 16)
        rec_json = codec.to_json(record)
        if fields is not None:
            rec_json = _filter_fields(rec_json, fields)
        entries.append({"step": ev.get("step"), "contract": ev["contract"], "seq": ev["seq"],
                        "kind": ev["kind"], "record": rec_json})
    return {"schema_version": 1, "entries": entries, "totals": totals}


def _filter_fields(record: dict, fields: Sequence[str]) -> dict:
    keep = set(fields)
    out = dict(record)
    for side in ("inputs", "outputs"):
        out[side] = [{k: v for k, v in t.items() if k in keep} for t in record[side]]
    return out
