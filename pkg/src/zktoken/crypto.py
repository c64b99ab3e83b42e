"""Hashing, key derivation, sealed boxes, grabber keys and the commitment tree.

All 256-bit quantities (digests, keys, accounts, nonces) are plain ``int``
values in ``[0, 2**256)``. Byte-level hashing is SHA-256; every protocol use
gets its own domain tag so digests from different roles never collide.

Key pairs are X25519: the secret scalar is a hash of the 256-bit ``sk`` so
every ``sk`` maps to a distinct key despite scalar clamping. Sealed boxes use
ECDH against an ephemeral key derived from ``(pk, data)``, which keeps
sealing deterministic at the cost of revealing when the same plaintext is
sealed twice to the same key.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey, X25519PublicKey

from .codec import u256
from .errors import (
    IndexOutOfRange,
    PathLengthMismatch,
    TreeFull,
    WrongKey,
    ZeroKey,
)

DOMAIN_COMMIT = b"zkt/commit"
DOMAIN_COMMIT_PAYLOAD = b"zkt/commit-payload"
DOMAIN_NODE = b"zkt/merkle-node"
DOMAIN_BURN = b"zkt/burn"
DOMAIN_DELEGATE = b"zkt/delegate-bind"
DOMAIN_DVP = b"zkt/dvp-bind"
DOMAIN_DELIVERY = b"zkt/delivery"
DOMAIN_WITNESS = b"zkt/witness"
DOMAIN_PUBKEY = b"zkt/pubkey"
DOMAIN_GRABBER_KEY = b"zkt/grabber-key"
DOMAIN_SEAL_NONCE = b"zkt/seal-nonce"
DOMAIN_SEAL_KEY = b"zkt/seal-key"
DOMAIN_SEAL_MAC = b"zkt/seal-mac"
DOMAIN_PROOF = b"zkt/proof"

DEFAULT_DEPTH = 32


def hash256(data: bytes) -> int:
    """SHA-256 of ``data`` as a 256-bit integer."""
    return int.from_bytes(hashlib.sha256(data).digest(), "big")


def domain_prefix(tag: bytes) -> bytes:
    return len(tag).to_bytes(1, "big") + tag


def tagged_hash(tag: bytes, *parts: bytes) -> int:
    return hash256(domain_prefix(tag) + b"".join(parts))


# -- keys --------------------------------------------------------------------


def _private_key(sk: int) -> X25519PrivateKey:
    if sk == 0:
        raise ZeroKey("secret key must be non-zero")
    return X25519PrivateKey.from_private_bytes(hashlib.sha256(domain_prefix(DOMAIN_PUBKEY) + u256(sk)).digest())


@lru_cache(maxsize=4096)
def derive_public_key(sk: int) -> bytes:
    return _private_key(sk).public_key().public_bytes_raw()


def account_of(pk: bytes) -> int:
    return hash256(pk)


def get_account(sk: int) -> int:
    return account_of(derive_public_key(sk))


def _grabber_mask(pk: bytes) -> int:
    return tagged_hash(DOMAIN_GRABBER_KEY, pk)


def create_grabber_key(sk: int, nonce_g: int) -> int:
    """Bind a contract's grabber nonce to the owner's key pair."""
    return nonce_g ^ _grabber_mask(derive_public_key(sk))


def verify_binding(pk: bytes, gk: int) -> int:
    """Recover the nonce bound into ``gk``; garbage when ``pk`` does not match."""
    return gk ^ _grabber_mask(pk)


# -- sealed boxes ------------------------------------------------------------


@dataclass(frozen=True)
class SealedBox:
    recipient_tag: int
    ciphertext: bytes  # ephemeral pk(32) || body || mac(32)

    def to_bytes(self) -> bytes:
        return u256(self.recipient_tag) + self.ciphertext

    @classmethod
    def from_bytes(cls, raw: bytes) -> SealedBox:
        if len(raw) < 96:
            raise ValueError("sealed box too short")
        return cls(int.from_bytes(raw[:32], "big"), raw[32:])


def _seal_keys(shared: bytes, epk: bytes, pk: bytes, size: int) -> tuple[bytes, bytes]:
    key = hashlib.sha256(domain_prefix(DOMAIN_SEAL_KEY) + shared + epk + pk).digest()
    return key, hashlib.shake_256(key).digest(size)


def _seal_mac(key: bytes, body: bytes) -> bytes:
    return hashlib.sha256(domain_prefix(DOMAIN_SEAL_MAC) + key + body).digest()


def _exchange(private: X25519PrivateKey, peer: bytes) -> bytes:
    try:
        return private.exchange(X25519PublicKey.from_public_bytes(peer))
    except ValueError as exc:
        raise WrongKey(f"unusable public key: {exc}") from exc


def seal_to_key(pk: bytes, data: bytes) -> SealedBox:
    """Encrypt ``data`` to ``pk``. Deterministic in ``(pk, data)``."""
    seed = hashlib.sha256(domain_prefix(DOMAIN_SEAL_NONCE) + pk + data).digest()
    ephemeral = X25519PrivateKey.from_private_bytes(seed)
    epk = ephemeral.public_key().public_bytes_raw()
    key, stream = _seal_keys(_exchange(ephemeral, pk), epk, pk, len(data))
    body = bytes(a ^ b for a, b in zip(data, stream))
    return SealedBox(account_of(pk), epk + body + _seal_mac(key, body))


def open_with_key(sk: int, box: SealedBox) -> bytes:
    pk = derive_public_key(sk)
    if account_of(pk) != box.recipient_tag:
        raise WrongKey("box is sealed to a different key")
    epk, body, mac = box.ciphertext[:32], box.ciphertext[32:-32], box.ciphertext[-32:]
    key, stream = _seal_keys(_exchange(_private_key(sk), epk), epk, pk, len(body))
    if _seal_mac(key, body) != mac:
        raise WrongKey("authentication failed")
    return bytes(a ^ b for a, b in zip(body, stream))


# -- merkle ------------------------------------------------------------------


@dataclass(frozen=True)
class MerkleStep:
    sibling: int
    at_left: bool  # sibling occupies the left slot of the parent


MerklePath = tuple[MerkleStep, ...]


def node_hash(left: int, right: int) -> int:
    return tagged_hash(DOMAIN_NODE, u256(left), u256(right))


@lru_cache(maxsize=None)
def zero_hash(level: int) -> int:
    """Root of an all-empty subtree of the given height. Empty leaves are 0."""
    if level == 0:
        return 0
    z = zero_hash(level - 1)
    return node_hash(z, z)


def get_root(value: int, path: Sequence[MerkleStep], depth: int | None = None) -> int:
    if depth is not None and len(path) != depth:
        raise PathLengthMismatch(f"path has {len(path)} steps, tree depth is {depth}")
    h = value
    for step in path:
        h = node_hash(step.sibling, h) if step.at_left else node_hash(h, step.sibling)
    return h


def _build_levels(leaves: Sequence[int], depth: int) -> list[list[int]]:
    levels = [list(leaves)]
    for level in range(1, depth + 1):
        below = levels[-1]
        z = zero_hash(level - 1)
        row = []
        for i in range(0, len(below), 2):
            right = below[i + 1] if i + 1 < len(below) else z
            row.append(node_hash(below[i], right))
        levels.append(row)
    return levels


def _path_from_levels(levels: list[list[int]], index: int, depth: int) -> MerklePath:
    steps = []
    for level in range(depth):
        row = levels[level]
        pos = index >> level
        sib = pos ^ 1
        sibling = row[sib] if sib < len(row) else zero_hash(level)
        steps.append(MerkleStep(sibling, at_left=bool(pos & 1)))
    return tuple(steps)


class CommitmentTree:
    """Append-only binary Merkle tree that retains every historical root.

    A root is recorded after each non-empty append batch. Single writer;
    readers may share paths and digests freely.
    """

    def __init__(self, depth: int = DEFAULT_DEPTH):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.depth = depth
        self.leaves: list[int] = []
        self.roots: list[int] = []
        self._levels: list[list[int]] = [[] for _ in range(depth + 1)]
        self._leaf_index: dict[int, int] = {}
        self._root_size: dict[int, int] = {}

    @property
    def capacity(self) -> int:
        return 1 << self.depth

    @property
    def next_index(self) -> int:
        return len(self.leaves)

    @property
    def root(self) -> int:
        top = self._levels[self.depth]
        return top[0] if top else zero_hash(self.depth)

    def __contains__(self, leaf: int) -> bool:
        return leaf in self._leaf_index

    def __len__(self) -> int:
        return len(self.leaves)

    def has_root(self, root: int) -> bool:
        return root in self._root_size

    def index_of(self, leaf: int) -> int:
        return self._leaf_index[leaf]

    def append(self, leaves: Iterable[int]) -> int:
        batch = list(leaves)
        if self.next_index + len(batch) > self.capacity:
            raise TreeFull(f"{len(batch)} leaves do not fit; {self.capacity - self.next_index} free")
        if not batch:
            return self.root
        for leaf in batch:
            self._insert(leaf)
        root = self.root
        self.roots.append(root)
        self._root_size.setdefault(root, self.next_index)
        return root

    def _insert(self, leaf: int) -> None:
        u256(leaf)
        index = len(self.leaves)
        self.leaves.append(leaf)
        self._leaf_index.setdefault(leaf, index)
        self._levels[0].append(leaf)
        for level in range(1, self.depth + 1):
            pos = index >> level
            below = self._levels[level - 1]
            left = below[2 * pos]
            right = below[2 * pos + 1] if 2 * pos + 1 < len(below) else zero_hash(level - 1)
            row = self._levels[level]
            if pos == len(row):
                row.append(node_hash(left, right))
            else:
                row[pos] = node_hash(left, right)

    def proof_for(self, leaf_index: int, root: int | None = None) -> MerklePath:
        """Authentication path for a leaf, against the current or a historical root."""
        if root is None or root == self.root:
            size, levels = self.next_index, self._levels
        else:
            if root not in self._root_size:
                raise IndexOutOfRange("root is not in the tree history")
            size = self._root_size[root]
            levels = _build_levels(self.leaves[:size], self.depth)
        if not 0 <= leaf_index < size:
            raise IndexOutOfRange(f"leaf {leaf_index} not in tree of {size} leaves")
        return _path_from_levels(levels, leaf_index, self.depth)
