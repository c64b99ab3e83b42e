"""Token preimages, their three public digests, and off-chain envelopes."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional, TypeVar

from . import codec
from .codec import Record, u256
from .crypto import DOMAIN_COMMIT, DOMAIN_COMMIT_PAYLOAD, get_account, tagged_hash
from .errors import NotOwner, ParseError

# 256-bit aliases, kept for readability of signatures.
Account = int
Commitment = int
Nullifier = int
Grabber = int


@dataclass(frozen=True)
class TokenPreimage:
    owner: int
    token_type: int
    nonce: int
    amount: int = 0
    id: int = 0
    payload: Optional[bytes] = None

    @property
    def is_spendable(self) -> bool:
        return self.amount != 0 or self.id != 0

    def with_owner(self, owner: int) -> TokenPreimage:
        return replace(self, owner=owner)


def partial_commit(t: TokenPreimage) -> int:
    return tagged_hash(
        DOMAIN_COMMIT,
        u256(t.owner),
        u256(t.token_type),
        u256(t.amount),
        u256(t.id),
        u256(t.nonce),
    )


def combine_payload(partial_hash: int, payload: bytes) -> int:
    return tagged_hash(
        DOMAIN_COMMIT_PAYLOAD, u256(partial_hash), len(payload).to_bytes(8, "big"), payload
    )


def commit(t: TokenPreimage) -> Commitment:
    h = partial_commit(t)
    return h if t.payload is None else combine_payload(h, t.payload)


def nullify(t: TokenPreimage, sk: int) -> Nullifier:
    """Only the holder of the owner's secret key can produce this value."""
    if t.owner != get_account(sk):
        raise NotOwner("secret key does not own the token")
    return commit(t.with_owner(sk))


def grab_token(t: TokenPreimage, gk: int) -> Grabber:
    return commit(t.with_owner(gk))


# -- envelopes exchanged over the private channel ---------------------------


@dataclass(frozen=True)
class NullifierPreimage:
    partial_hash: int
    input_payload: Optional[bytes] = None

    @classmethod
    def of(cls, t: TokenPreimage) -> NullifierPreimage:
        return cls(partial_commit(t), t.payload)

    def commitment(self) -> Commitment:
        """Commitment of the consumed token, rebuilt from the split form."""
        if self.input_payload is None:
            return self.partial_hash
        return combine_payload(self.partial_hash, self.input_payload)


@dataclass(frozen=True)
class TransferPreimage(Record):
    outputs: tuple[TokenPreimage, ...]
    inputs: Optional[tuple[NullifierPreimage, ...]] = None

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.outputs:
            raise ValueError("transfer preimage needs at least one output")


@dataclass(frozen=True)
class BurnPreimage(Record):
    nonce: int
    amount: int = 0
    ids: tuple[int, ...] = ()


@dataclass(frozen=True)
class DvpPreimage(Record):
    outputs: tuple[TokenPreimage, ...]
    delivery: tuple[TokenPreimage, ...]
    inputs: Optional[tuple[NullifierPreimage, ...]] = None

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.delivery:
            raise ValueError("dvp preimage needs at least one expected delivery token")


@dataclass(frozen=True)
class AuditRecord(Record):
    """What the auditor can open from a transaction's ``audit_d``."""

    inputs: tuple[TokenPreimage, ...] = ()
    outputs: tuple[TokenPreimage, ...] = ()
    burn_a: int = 0
    burn_ids: tuple[int, ...] = field(default=())


E = TypeVar("E")


def envelope_to_json(env) -> str:
    return codec.dumps(env)


def envelope_from_json(cls: type[E], text: str | bytes) -> E:
    try:
        return codec.from_json(cls, json.loads(text))
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"bad {cls.__name__} envelope: {exc}") from exc
