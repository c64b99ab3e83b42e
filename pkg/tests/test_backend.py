import pytest

from generators import Gen
from zktoken.backend import Proof, ReferenceBackend
from zktoken.circuits import CIRCUITS, PUBLIC_TYPES, default_backend, make_backend
from zktoken.errors import UnknownCircuit


def test_seeded_backends_are_deterministic_and_distinct():
    wit, pub = Gen(1).transfer_instance()
    a, b, c = make_backend("s"), make_backend("s"), make_backend("t")
    assert a.prove("transfer", wit, pub) == b.prove("transfer", wit, pub)
    assert not c.verify("transfer", a.prove("transfer", wit, pub), pub)


def test_circuit_ids():
    assert default_backend().circuit_ids == sorted(CIRCUITS)
    assert set(PUBLIC_TYPES) == set(CIRCUITS)


def test_unknown_circuit():
    with pytest.raises(UnknownCircuit):
        default_backend().prove("nope", None, None)
    with pytest.raises(UnknownCircuit):
        default_backend().verify("nope", Proof("nope", 0), None)


def test_verify_rejects_wrong_shapes():
    backend = default_backend()
    wit, pub = Gen(2).transfer_instance()
    proof = backend.prove("transfer", wit, pub)
    assert not backend.verify("transfer", Proof("mint", proof.binding), pub)
    assert not backend.verify("transfer", "not a proof", pub)
    assert not backend.verify("revealing", proof, pub)
    assert not backend.verify("transfer", Proof("transfer", proof.binding ^ 1), pub)


def test_proof_bytes_round_trip():
    p = Proof("del_transfer", 12345)
    assert Proof.from_bytes(p.to_bytes()) == p
    with pytest.raises(ValueError):
        Proof.from_bytes(p.to_bytes() + b"\x00")


def test_public_type_check_is_optional():
    backend = ReferenceBackend({"t": lambda w, p: None}, setup_key=1)
    proof = backend.prove("t", None, (1, 2))
    assert backend.verify("t", proof, (1, 2))
    assert not backend.verify("t", proof, (1, 3))
