"""Independent re-derivations used to cross-check the package.

Nothing here imports zktoken; byte layouts are written out by hand with
hashlib and the X25519 primitive from cryptography, so a shared bug in the
package cannot hide itself.
"""

import hashlib

from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey

MASK = (1 << 256) - 1


def be32(x):
    return x.to_bytes(32, "big")


def sha(data):
    return int.from_bytes(hashlib.sha256(data).digest(), "big")


def tagged(tag, data):
    return sha(bytes([len(tag)]) + tag + data)


def pubkey(sk):
    seed = hashlib.sha256(bytes([len(b"zkt/pubkey")]) + b"zkt/pubkey" + be32(sk)).digest()
    return X25519PrivateKey.from_private_bytes(seed).public_key().public_bytes_raw()


def account(sk):
    return sha(pubkey(sk))


def commitment(owner, token_type, nonce, amount=0, id=0, payload=None):
    h = tagged(b"zkt/commit", be32(owner) + be32(token_type) + be32(amount) + be32(id) + be32(nonce))
    if payload is None:
        return h
    return tagged(b"zkt/commit-payload", be32(h) + len(payload).to_bytes(8, "big") + payload)


def nullifier(sk, token_type, nonce, amount=0, id=0, payload=None):
    return commitment(sk, token_type, nonce, amount, id, payload)


def grabber_key(sk, nonce_g):
    return nonce_g ^ tagged(b"zkt/grabber-key", pubkey(sk))


def node(left, right):
    return tagged(b"zkt/merkle-node", be32(left) + be32(right))


def brute_force_root(leaves, depth):
    """Full recompute over the zero-padded leaf row."""
    row = list(leaves) + [0] * ((1 << depth) - len(leaves))
    for _ in range(depth):
        row = [node(row[i], row[i + 1]) for i in range(0, len(row), 2)]
    return row[0]


def mass_ok(in_amounts, out_amounts, burn_a, in_ids, out_ids, burn_ids):
    """Transfer conservation: amounts balance and NFT ids move as a multiset."""
    nz = lambda ids: sorted(i for i in ids if i)
    return sum(in_amounts) == sum(out_amounts) + burn_a and nz(in_ids) == nz(list(out_ids) + list(burn_ids))
