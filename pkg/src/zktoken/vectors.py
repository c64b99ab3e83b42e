"""Deterministic test vectors for the primitive layer."""

from __future__ import annotations

from . import codec
from .codec import encode, u256
from .crypto import (
    CommitmentTree,
    create_grabber_key,
    derive_public_key,
    get_account,
    hash256,
    node_hash,
    seal_to_key,
    zero_hash,
)
from .model import TokenPreimage, commit, grab_token, nullify, partial_commit

VECTOR_SK = 0x1234
VECTOR_NONCE_G = 0xABCD


def golden_vectors() -> dict:
    sk = VECTOR_SK
    pk = derive_public_key(sk)
    acc = get_account(sk)
    token = TokenPreimage(owner=acc, token_type=1, nonce=99, amount=100)
    nft = TokenPreimage(owner=acc, token_type=1, nonce=100, id=7, payload=b"bond-7")
    gk = create_grabber_key(sk, VECTOR_NONCE_G)
    tree = CommitmentTree(4)
    tree.append([commit(token), commit(nft)])
    return {"schema_version": 1, **codec.to_json({
        "hash256_u256_5_7": hash256(u256(5) + u256(7)),
        "encode_5_7": encode((5, 7)),
        "sk": sk,
        "pk": pk,
        "account": acc,
        "partial_commit": partial_commit(token),
        "commit_ft": commit(token),
        "commit_nft_payload": commit(nft),
        "nullifier_ft": nullify(token, sk),
        "grabber_key": gk,
        "grabber_ft": grab_token(token, gk),
        "node_hash_1_2": node_hash(1, 2),
        "zero_hash_4": zero_hash(4),
        "tree4_root_after_2": tree.root,
        "sealed_box": seal_to_key(pk, b"audit").to_bytes(),
    })}
