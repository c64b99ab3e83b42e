"""Privacy-preserving UTXO token ledger: commitments, nullifiers, grabbers,
constraint circuits behind a pluggable proof backend, token and DvP contracts,
and a multi-party harness."""

from .backend import Proof, ProofSystem, ReferenceBackend
from .chain import Chain
from .circuits import default_backend, make_backend
from .crypto import CommitmentTree, get_account, get_root, hash256
from .dvp import DvpContract
from .errors import ZkTokenError
from .harness import Harness, audit_decrypt
from .ledger import Event, TokenContract
from .model import TokenPreimage, commit, grab_token, nullify
from .scenario import run_scenario

__all__ = [
    "Chain",
    "CommitmentTree",
    "DvpContract",
    "Event",
    "Harness",
    "Proof",
    "ProofSystem",
    "ReferenceBackend",
    "TokenContract",
    "TokenPreimage",
    "ZkTokenError",
    "audit_decrypt",
    "commit",
    "default_backend",
    "get_account",
    "get_root",
    "grab_token",
    "hash256",
    "make_backend",
    "nullify",
    "run_scenario",
]
