import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from zktoken.codec import u256
from zktoken.crypto import (
    CommitmentTree,
    MerkleStep,
    SealedBox,
    create_grabber_key,
    derive_public_key,
    get_account,
    get_root,
    hash256,
    node_hash,
    open_with_key,
    seal_to_key,
    verify_binding,
    zero_hash,
)
from zktoken.errors import IndexOutOfRange, PathLengthMismatch, TreeFull, WrongKey, ZeroKey
from zktoken.vectors import VECTOR_NONCE_G, VECTOR_SK, golden_vectors

GOLDEN = json.loads((Path(__file__).parent / "data" / "golden_vectors.json").read_text())
keys = st.integers(min_value=1, max_value=(1 << 256) - 1)
words = st.integers(min_value=0, max_value=(1 << 256) - 1)


def test_golden_vectors_frozen():
    assert golden_vectors() == GOLDEN


def test_golden_vectors_match_oracle():
    sk = VECTOR_SK
    acc = oracle.account(sk)
    gk = oracle.grabber_key(sk, VECTOR_NONCE_G)
    assert int(GOLDEN["hash256_u256_5_7"], 16) == oracle.sha(oracle.be32(5) + oracle.be32(7))
    assert int(GOLDEN["account"], 16) == acc
    assert GOLDEN["pk"] == "0x" + oracle.pubkey(sk).hex()
    assert int(GOLDEN["commit_ft"], 16) == oracle.commitment(acc, 1, 99, amount=100)
    assert int(GOLDEN["commit_nft_payload"], 16) == oracle.commitment(acc, 1, 100, id=7, payload=b"bond-7")
    assert int(GOLDEN["nullifier_ft"], 16) == oracle.nullifier(sk, 1, 99, amount=100)
    assert int(GOLDEN["grabber_key"], 16) == gk
    assert int(GOLDEN["grabber_ft"], 16) == oracle.commitment(gk, 1, 99, amount=100)
    assert int(GOLDEN["node_hash_1_2"], 16) == oracle.node(1, 2)
    assert int(GOLDEN["zero_hash_4"], 16) == oracle.brute_force_root([], 4)
    leaves = [int(GOLDEN["commit_ft"], 16), int(GOLDEN["commit_nft_payload"], 16)]
    assert int(GOLDEN["tree4_root_after_2"], 16) == oracle.brute_force_root(leaves, 4)


def test_hash256_is_sha256():
    assert hash256(b"abc") == 0xBA7816BF8F01CFEA414140DE5DAE2223B00361A396177A9CB410FF61F20015AD


def test_zero_key():
    with pytest.raises(ZeroKey):
        derive_public_key(0)


@given(keys)
def test_account_matches_oracle(sk):
    assert derive_public_key(sk) == oracle.pubkey(sk)
    assert get_account(sk) == oracle.account(sk)


@given(keys, words)
def test_grabber_key_binding(sk, nonce_g):
    gk = create_grabber_key(sk, nonce_g)
    assert gk == oracle.grabber_key(sk, nonce_g)
    assert verify_binding(derive_public_key(sk), gk) == nonce_g
    assert verify_binding(derive_public_key(sk + 1 if sk < (1 << 256) - 1 else 1), gk) != nonce_g


@given(keys, st.binary(max_size=200))
def test_seal_round_trip(sk, data):
    pk = derive_public_key(sk)
    box = seal_to_key(pk, data)
    assert box == seal_to_key(pk, data)
    assert open_with_key(sk, box) == data
    assert open_with_key(sk, SealedBox.from_bytes(box.to_bytes())) == data


def test_seal_is_not_openable_from_public_data():
    pk = derive_public_key(5)
    box = seal_to_key(pk, b"secret-plaintext")
    assert b"secret" not in box.to_bytes()
    # swapping in another ephemeral key breaks authentication
    other = seal_to_key(pk, b"different-plain!")
    forged = SealedBox(box.recipient_tag, other.ciphertext[:32] + box.ciphertext[32:])
    with pytest.raises(WrongKey):
        open_with_key(5, forged)


def test_seal_to_malformed_key():
    with pytest.raises(WrongKey):
        seal_to_key(bytes(32), b"x")


def test_wrong_key_and_tamper():
    box = seal_to_key(derive_public_key(5), b"secret")
    with pytest.raises(WrongKey):
        open_with_key(6, box)
    flipped = bytes([box.ciphertext[40] ^ 1])
    bad = SealedBox(box.recipient_tag, box.ciphertext[:40] + flipped + box.ciphertext[41:])
    with pytest.raises(WrongKey):
        open_with_key(5, bad)
    with pytest.raises(ValueError):
        SealedBox.from_bytes(b"short")


def test_zero_hash():
    assert zero_hash(0) == 0
    assert zero_hash(1) == node_hash(0, 0) == oracle.node(0, 0)


def test_tree_basics():
    t = CommitmentTree(2)
    assert t.root == zero_hash(2)
    assert t.append([]) == zero_hash(2) and t.roots == []
    r1 = t.append([11, 22])
    r2 = t.append([33])
    assert t.roots == [r1, r2]
    assert t.has_root(r1) and 22 in t and t.index_of(33) == 2
    assert get_root(22, t.proof_for(1, r1), 2) == r1
    assert get_root(22, t.proof_for(1), 2) == r2
    with pytest.raises(TreeFull):
        t.append([1, 2])
    with pytest.raises(IndexOutOfRange):
        t.proof_for(2, r1)
    with pytest.raises(IndexOutOfRange):
        t.proof_for(0, 12345)
    with pytest.raises(PathLengthMismatch):
        get_root(11, t.proof_for(0)[:1], 2)
    with pytest.raises(ValueError):
        CommitmentTree(-1)


def test_depth_zero_tree():
    t = CommitmentTree(0)
    assert t.append([7]) == 7
    with pytest.raises(TreeFull):
        t.append([8])


def test_get_root_orientation():
    assert get_root(5, [MerkleStep(9, at_left=True)]) == oracle.node(9, 5)
    assert get_root(5, [MerkleStep(9, at_left=False)]) == oracle.node(5, 9)


@settings(max_examples=50)
@given(st.lists(words, max_size=16), st.integers(min_value=4, max_value=6))
def test_tree_matches_oracle(leaves, depth):
    t = CommitmentTree(depth)
    t.append(leaves)
    assert t.root == oracle.brute_force_root(leaves, depth)
    for i, leaf in enumerate(leaves):
        assert get_root(leaf, t.proof_for(i), depth) == t.root


def test_default_depth_root_after_one_leaf():
    t = CommitmentTree()
    t.append([hash256(u256(1))])
    assert t.root == get_root(hash256(u256(1)), t.proof_for(0), 32)
