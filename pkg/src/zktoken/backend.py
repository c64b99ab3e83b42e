"""Proof-system seam and the transparent reference backend."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Protocol

from .codec import encode, u256
from .crypto import DOMAIN_PROOF, hash256, tagged_hash
from .errors import UnknownCircuit

Constraint = Callable[[Any, Any], None]


@dataclass(frozen=True)
class Proof:
    circuit_id: str
    binding: int

    def to_bytes(self) -> bytes:
        name = self.circuit_id.encode()
        return len(name).to_bytes(1, "big") + name + u256(self.binding)

    @classmethod
    def from_bytes(cls, raw: bytes) -> Proof:
        n = raw[0]
        if len(raw) != 1 + n + 32:
            raise ValueError("malformed proof encoding")
        return cls(raw[1 : 1 + n].decode(), int.from_bytes(raw[1 + n :], "big"))


class ProofSystem(Protocol):
    def prove(self, circuit_id: str, witness: Any, public: Any) -> Proof: ...

    def verify(self, circuit_id: str, proof: Proof, public: Any) -> bool: ...


class ReferenceBackend:
    """Transparent backend: checks the circuit, then binds the public inputs.

    The proof is a keyed digest over ``(circuit_id, canonical(public))``
    released only after the circuit's constraints pass. It is complete and
    binding but NOT zero-knowledge and not succinct in any cryptographic
    sense; whoever holds ``setup_key`` can forge proofs, much like the
    toxic waste of a trusted setup.
    """

    def __init__(self, circuits: Mapping[str, Constraint], setup_key: int,
                 public_types: Mapping[str, type] | None = None):
        self._circuits = dict(circuits)
        self._public_types = dict(public_types or {})
        self.setup_key = setup_key

    @classmethod
    def from_seed(cls, circuits: Mapping[str, Constraint], seed: bytes | str,
                  public_types: Mapping[str, type] | None = None) -> ReferenceBackend:
        if isinstance(seed, str):
            seed = seed.encode()
        return cls(circuits, hash256(b"zktoken/setup/" + seed), public_types)

    @property
    def circuit_ids(self) -> list[str]:
        return sorted(self._circuits)

    def _constraint(self, circuit_id: str) -> Constraint:
        try:
            return self._circuits[circuit_id]
        except KeyError:
            raise UnknownCircuit(circuit_id) from None

    def _bind(self, circuit_id: str, public: Any) -> int:
        # 0x01: witness-satisfaction flag, only ever bound after the constraint passed
        return tagged_hash(
            DOMAIN_PROOF, u256(self.setup_key), b"\x01", encode(circuit_id), encode(public)
        )

    def prove(self, circuit_id: str, witness: Any, public: Any) -> Proof:
        self._constraint(circuit_id)(witness, public)
        return Proof(circuit_id, self._bind(circuit_id, public))

    def verify(self, circuit_id: str, proof: Proof, public: Any) -> bool:
        self._constraint(circuit_id)
        if not isinstance(proof, Proof) or proof.circuit_id != circuit_id:
            return False
        expected = self._public_types.get(circuit_id)
        if expected is not None and not isinstance(public, expected):
            return False
        try:
            return proof.binding == self._bind(circuit_id, public)
        except (TypeError, ValueError):
            return False
