"""Constraint circuits for every transaction kind.

Each circuit is a function ``(witness, public) -> None`` that raises
:class:`ConstraintViolation` naming the first failed requirement. The
``check_*`` helpers expose the individual sub-circuits as booleans. Proving
goes through a :class:`ProofSystem`, which refuses to emit a proof unless
the registered circuit passes.

The ``build_*`` helpers derive the honest public inputs for a witness; they
are what a prover runs before calling ``prove_*``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

from . import codec
from .backend import Proof, ProofSystem, ReferenceBackend
from .codec import U256_MAX, Record, encode, u256
from .crypto import (
    DOMAIN_BURN,
    DOMAIN_DELEGATE,
    DOMAIN_DELIVERY,
    DOMAIN_DVP,
    DOMAIN_WITNESS,
    MerkleStep,
    account_of,
    create_grabber_key,
    get_account,
    get_root,
    hash256,
    seal_to_key,
    tagged_hash,
    verify_binding,
)
from .errors import ConstraintViolation, CryptoError, NotOwner, Overflow
from .model import AuditRecord, TokenPreimage, commit, grab_token, nullify

Address = str


# -- witness / public input types -------------------------------------------


@dataclass(frozen=True)
class ImgPath(Record):
    img: TokenPreimage
    path: tuple[MerkleStep, ...]


@dataclass(frozen=True)
class MintWitness(Record):
    outputs: tuple[TokenPreimage, ...]
    issuer_sk: Optional[int] = None
    path_i: Optional[tuple[MerkleStep, ...]] = None


@dataclass(frozen=True)
class MintPublicInputs(Record):
    type_t: int
    comms: tuple[int, ...]
    root_i: Optional[int] = None


@dataclass(frozen=True)
class TransferWitness(Record):
    inputs: tuple[ImgPath, ...]
    outputs: tuple[TokenPreimage, ...]
    sk: int
    audit_pk: bytes
    burn_a: int = 0
    burn_ids: tuple[int, ...] = ()


@dataclass(frozen=True)
class TransferPublicInputs(Record):
    nulls: tuple[int, ...]
    grabs: tuple[int, ...]
    comms: tuple[int, ...]
    type_t: int
    root_c: int
    nonce_g: int
    burn_c: int
    audit_acc: int
    audit_d: bytes


@dataclass(frozen=True)
class RevealingWitness(Record):
    inputs: tuple[ImgPath, ...]
    sk: int
    audit_pk: bytes
    outputs: tuple[TokenPreimage, ...] = ()


@dataclass(frozen=True)
class RevealingPublicInputs(Record):
    nulls: tuple[int, ...]
    grabs: tuple[int, ...]
    outputs: tuple[TokenPreimage, ...]
    type_t: int
    root_c: int
    nonce_g: int
    audit_d: bytes
    audit_acc: int
    comms: tuple[int, ...] = ()


@dataclass(frozen=True)
class HidingWitness(Record):
    outputs: tuple[TokenPreimage, ...]
    audit_pk: bytes
    sk: Optional[int] = None


@dataclass(frozen=True)
class HidingPublicInputs(Record):
    comms: tuple[int, ...]
    type_t: int
    audit_d: bytes
    audit_acc: int
    amount_i: int = 0
    ids_i: tuple[int, ...] = ()
    acc_i: int = 0


@dataclass(frozen=True)
class GrabWitness(Record):
    inputs: tuple[ImgPath, ...]
    outputs: tuple[TokenPreimage, ...]
    auth_sk: int
    owner_pk: bytes
    grabber_k: int


@dataclass(frozen=True)
class GrabPublicInputs(Record):
    grabs: tuple[int, ...]
    comms: tuple[int, ...]
    type_t: int
    root_c: int
    nonce_g: int
    auth_acc: int


@dataclass(frozen=True)
class DelegatedMintPublicInputs:
    pub: MintPublicInputs
    del_add: Address
    del_b: int


@dataclass(frozen=True)
class DelegatedTransferPublicInputs:
    pub: TransferPublicInputs
    del_add: Address
    del_b: int


@dataclass(frozen=True)
class DelegatedRevealingPublicInputs:
    pub: RevealingPublicInputs
    del_add: Address
    del_b: int


@dataclass(frozen=True)
class DelegatedHidingPublicInputs:
    pub: HidingPublicInputs
    del_add: Address
    del_b: int


# -- transaction envelopes: public inputs plus proof ------------------------


@dataclass(frozen=True)
class MintTransaction:
    pub: MintPublicInputs
    proof: Proof


@dataclass(frozen=True)
class TransferTransaction:
    pub: TransferPublicInputs
    proof: Proof


@dataclass(frozen=True)
class RevealingTransferTransaction:
    pub: RevealingPublicInputs
    proof: Proof


@dataclass(frozen=True)
class HidingTransferTransaction:
    pub: HidingPublicInputs
    proof: Proof


@dataclass(frozen=True)
class GrabTransaction:
    pub: GrabPublicInputs
    proof: Proof


@dataclass(frozen=True)
class DelegatedMintTransaction:
    pub: DelegatedMintPublicInputs
    proof: Proof


@dataclass(frozen=True)
class DelegatedTransferTransaction:
    pub: DelegatedTransferPublicInputs
    proof: Proof


@dataclass(frozen=True)
class DelegatedRevealingTransferTransaction:
    pub: DelegatedRevealingPublicInputs
    proof: Proof


@dataclass(frozen=True)
class DelegatedHidingTransferTransaction:
    pub: DelegatedHidingPublicInputs
    proof: Proof


@dataclass(frozen=True)
class DvpWitness(Record):
    payment_w: TransferWitness
    delivery_w: tuple[TokenPreimage, ...]


@dataclass(frozen=True)
class DvpPublicInputs:
    payment: DelegatedTransferTransaction
    delivery: int
    type_d: int
    dvp_bind: int


@dataclass(frozen=True)
class DvpTransaction:
    pub: DvpPublicInputs
    proof: Proof


# -- hashing helpers ----------------------------------------------------------


def witness_hash(wit: Any) -> int:
    return tagged_hash(DOMAIN_WITNESS, encode(wit))


def burn_commitment(burn_a: int, burn_ids: Sequence[int], blinding: int) -> int:
    """Burn commitment; ``blinding`` is the witness hash, shared with the authority."""
    return tagged_hash(DOMAIN_BURN, encode((burn_a, tuple(burn_ids))), u256(blinding))


def delegate_binding(del_add: Address, wit: Any) -> int:
    return tagged_hash(DOMAIN_DELEGATE, encode(del_add), u256(witness_hash(wit)))


def delivery_hash(tokens: Iterable[TokenPreimage]) -> int:
    """Digest of a deal's token set; order-free since tokens are sorted by commitment."""
    return tagged_hash(DOMAIN_DELIVERY, encode(tuple(sorted(tokens, key=commit))))


def dvp_binding(wit: DvpWitness) -> int:
    return tagged_hash(DOMAIN_DVP, u256(witness_hash(wit)))


def issuer_leaf(account: int) -> int:
    return hash256(u256(account))


def audit_plaintext(record: AuditRecord) -> bytes:
    return codec.dumps(record).encode()


def audit_record(wit: Any) -> AuditRecord:
    return AuditRecord(
        inputs=tuple(i.img for i in getattr(wit, "inputs", ()) or ()),
        outputs=tuple(getattr(wit, "outputs", ()) or ()),
        burn_a=getattr(wit, "burn_a", 0) or 0,
        burn_ids=tuple(getattr(wit, "burn_ids", ()) or ()),
    )


def get_amount_sum(imgs: Iterable[TokenPreimage]) -> int:
    total = 0
    for img in imgs:
        total += img.amount
        if total > U256_MAX:
            raise Overflow("amount sum exceeds 2^256 - 1")
    return total


def _add(a: int, b: int) -> int:
    if a + b > U256_MAX:
        raise Overflow("amount sum exceeds 2^256 - 1")
    return a + b


# -- constraints ---------------------------------------------------------------


def _req(cond: bool, name: str, detail: str = "") -> None:
    if not cond:
        raise ConstraintViolation(name, detail)


def _distinct(items: Sequence[Any]) -> bool:
    return len(set(items)) == len(items)


def _ids(imgs: Iterable[TokenPreimage]) -> list[int]:
    return [t.id for t in imgs if t.id != 0]


def _inputs(wit: Any, pub: Any) -> None:
    imgs = [i.img for i in wit.inputs]
    _req(len(imgs) == len(pub.nulls), "nulls_size")
    _req(len(imgs) == len(pub.grabs), "grabs_size")
    _req(_distinct(imgs), "duplicate_input")
    try:
        grab_k = create_grabber_key(wit.sk, pub.nonce_g)
    except CryptoError as exc:
        raise ConstraintViolation("sk", str(exc)) from exc
    for i, ip in enumerate(wit.inputs):
        img = ip.img
        _req(img.is_spendable, "zero_token", f"input {i}")
        _req(img.token_type == pub.type_t, "type", f"input {i}")
        try:
            null = nullify(img, wit.sk)
        except NotOwner as exc:
            raise ConstraintViolation("owner", f"input {i}") from exc
        _req(null == pub.nulls[i], "nullifier", f"input {i}")
        _req(grab_token(img, grab_k) == pub.grabs[i], "grabber", f"input {i}")
        _req(get_root(commit(img), ip.path) == pub.root_c, "root_c", f"input {i}")


def _outputs(wit: Any, pub: Any) -> None:
    outs = list(wit.outputs)
    _req(len(outs) == len(pub.comms), "comms_size")
    _req(_distinct(outs), "duplicate_output")
    _req(_distinct(list(pub.comms)), "duplicate_commitment")
    for i, img in enumerate(outs):
        _req(img.is_spendable, "zero_token", f"output {i}")
        _req(img.token_type == pub.type_t, "type", f"output {i}")
        _req(commit(img) == pub.comms[i], "commitment", f"output {i}")


def _mass(wit: Any) -> None:
    imgs_in = [i.img for i in wit.inputs]
    burn_a = getattr(wit, "burn_a", 0)
    burn_ids = list(getattr(wit, "burn_ids", ()))
    total_in = get_amount_sum(imgs_in)
    total_out = _add(get_amount_sum(wit.outputs), burn_a)
    _req(total_in == total_out, "mass", f"{total_in} != {total_out}")
    # multiset equality: a duplicated NFT id on the output side must not pass
    _req(Counter(_ids(imgs_in)) == Counter(_ids(wit.outputs) + burn_ids), "ids")


def _burn(wit: Any, pub: Any) -> None:
    _req(_distinct(list(wit.burn_ids)), "burn_ids")
    _req(all(i != 0 for i in wit.burn_ids), "burn_ids", "zero id")
    expected = burn_commitment(wit.burn_a, wit.burn_ids, witness_hash(wit))
    _req(pub.burn_c == expected, "burn_c")


def _audit(wit: Any, pub: Any) -> None:
    _req(pub.audit_acc == account_of(wit.audit_pk), "audit_acc")
    try:
        sealed = seal_to_key(wit.audit_pk, audit_plaintext(audit_record(wit)))
    except CryptoError as exc:
        raise ConstraintViolation("audit_d", str(exc)) from exc
    _req(pub.audit_d == sealed.to_bytes(), "audit_d")


def _clear_outputs(pub: RevealingPublicInputs) -> None:
    for i, o in enumerate(pub.outputs):
        _req(o.is_spendable, "zero_token", f"clear output {i}")
        _req(o.token_type == pub.type_t, "type", f"clear output {i}")
        _req(o.nonce == 0, "nonce", f"clear output {i}")


def _mass_clear_outputs(wit: RevealingWitness, pub: RevealingPublicInputs) -> None:
    imgs_in = [i.img for i in wit.inputs]
    total_in = get_amount_sum(imgs_in)
    total_out = _add(get_amount_sum(wit.outputs), get_amount_sum(pub.outputs))
    _req(total_in == total_out, "mass", f"{total_in} != {total_out}")
    _req(Counter(_ids(imgs_in)) == Counter(_ids(wit.outputs) + _ids(pub.outputs)), "ids")


def _mass_clear_inputs(wit: HidingWitness, pub: HidingPublicInputs) -> None:
    total_out = get_amount_sum(wit.outputs)
    _req(pub.amount_i == total_out, "mass", f"{pub.amount_i} != {total_out}")
    _req(_distinct(list(pub.ids_i)), "ids", "repeated input id")
    _req(Counter(pub.ids_i) == Counter(_ids(wit.outputs)), "ids")


def _grab_inputs(wit: GrabWitness, pub: GrabPublicInputs) -> None:
    imgs = [i.img for i in wit.inputs]
    _req(_distinct(imgs), "duplicate_input")
    _req(len(pub.grabs) == len(imgs), "grabs_size")
    _req(verify_binding(wit.owner_pk, wit.grabber_k) == pub.nonce_g, "nonce_g")
    owner = account_of(wit.owner_pk)
    for i, ip in enumerate(wit.inputs):
        img = ip.img
        _req(img.is_spendable, "zero_token", f"input {i}")
        _req(img.token_type == pub.type_t, "type", f"input {i}")
        _req(img.owner == owner, "owner", f"input {i}")
        _req(grab_token(img, wit.grabber_k) == pub.grabs[i], "grabber", f"input {i}")
        _req(get_root(commit(img), ip.path) == pub.root_c, "root_c", f"input {i}")


def _delegate(wit: Any, pub: Any) -> None:
    _req(pub.del_b == delegate_binding(pub.del_add, wit), "del_b")


def mint_circuit(wit: MintWitness, pub: MintPublicInputs) -> None:
    _req(len(wit.outputs) == len(pub.comms), "comms_size")
    _req(all(t.token_type == pub.type_t for t in wit.outputs), "type")
    _req(_distinct(list(wit.outputs)), "duplicate_output")
    _req(_distinct(list(pub.comms)), "duplicate_commitment")
    for i, t in enumerate(wit.outputs):
        _req(commit(t) == pub.comms[i], "commitment", f"output {i}")
    if pub.root_i:
        _req(bool(wit.issuer_sk), "issuer_sk")
        _req(wit.path_i is not None, "path_i")
        leaf = issuer_leaf(get_account(wit.issuer_sk))
        _req(get_root(leaf, wit.path_i) == pub.root_i, "root_i")


def transfer_circuit(wit: TransferWitness, pub: TransferPublicInputs) -> None:
    _req(len(wit.inputs) > 0, "inputs_empty")
    _inputs(wit, pub)
    _outputs(wit, pub)
    _mass(wit)
    _burn(wit, pub)
    _audit(wit, pub)


def revealing_circuit(wit: RevealingWitness, pub: RevealingPublicInputs) -> None:
    _req(len(wit.inputs) > 0, "inputs_empty")
    _inputs(wit, pub)
    _outputs(wit, pub)
    _clear_outputs(pub)
    _mass_clear_outputs(wit, pub)
    _audit(wit, pub)


def hiding_circuit(wit: HidingWitness, pub: HidingPublicInputs) -> None:
    _req(pub.amount_i != 0 or len(pub.ids_i) > 0, "amount_i")
    if pub.acc_i != 0:
        try:
            ok = bool(wit.sk) and pub.acc_i == get_account(wit.sk)
        except CryptoError:
            ok = False
        _req(ok, "acc_i")
    _outputs(wit, pub)
    _mass_clear_inputs(wit, pub)
    _audit(wit, pub)


def grab_circuit(wit: GrabWitness, pub: GrabPublicInputs) -> None:
    try:
        auth_ok = pub.auth_acc == get_account(wit.auth_sk)
    except CryptoError:
        auth_ok = False
    _req(auth_ok, "auth_acc")
    _req(len(wit.inputs) > 0, "inputs_empty")
    _grab_inputs(wit, pub)
    _outputs(wit, pub)
    _mass(wit)


def _delegated(inner: Callable[[Any, Any], None]) -> Callable[[Any, Any], None]:
    def circuit(wit: Any, pub: Any) -> None:
        _delegate(wit, pub)
        inner(wit, pub.pub)

    circuit.__name__ = f"delegated_{inner.__name__}"
    return circuit


def dvp_circuit(wit: DvpWitness, pub: DvpPublicInputs) -> None:
    _req(pub.delivery == delivery_hash(wit.delivery_w), "delivery")
    _req(pub.dvp_bind == dvp_binding(wit), "dvp_bind")
    # the carried payment must be the one this witness was bound to
    _req(pub.payment.pub.del_b == delegate_binding(pub.payment.pub.del_add, wit.payment_w), "payment")


CIRCUITS: dict[str, Callable[[Any, Any], None]] = {
    "mint": mint_circuit,
    "transfer": transfer_circuit,
    "revealing": revealing_circuit,
    "hiding": hiding_circuit,
    "grab": grab_circuit,
    "del_mint": _delegated(mint_circuit),
    "del_transfer": _delegated(transfer_circuit),
    "del_revealing": _delegated(revealing_circuit),
    "del_hiding": _delegated(hiding_circuit),
    "dvp": dvp_circuit,
}

PUBLIC_TYPES: dict[str, type] = {
    "mint": MintPublicInputs,
    "transfer": TransferPublicInputs,
    "revealing": RevealingPublicInputs,
    "hiding": HidingPublicInputs,
    "grab": GrabPublicInputs,
    "del_mint": DelegatedMintPublicInputs,
    "del_transfer": DelegatedTransferPublicInputs,
    "del_revealing": DelegatedRevealingPublicInputs,
    "del_hiding": DelegatedHidingPublicInputs,
    "dvp": DvpPublicInputs,
}

DEFAULT_SEED = "zktoken-default"


def make_backend(seed: str = DEFAULT_SEED) -> ReferenceBackend:
    return ReferenceBackend.from_seed(CIRCUITS, seed, PUBLIC_TYPES)


_default_backend = make_backend()


def default_backend() -> ReferenceBackend:
    return _default_backend


# -- boolean views of the sub-circuits ---------------------------------------


def _as_bool(fn: Callable[..., None], *args: Any) -> bool:
    try:
        fn(*args)
    except ConstraintViolation:
        return False
    return True


def check_inputs(wit: Any, pub: Any) -> bool:
    return _as_bool(_inputs, wit, pub)


def check_outputs(wit: Any, pub: Any) -> bool:
    return _as_bool(_outputs, wit, pub)


def check_burn(wit: TransferWitness, pub: TransferPublicInputs) -> bool:
    return _as_bool(_burn, wit, pub)


def check_mass_conservation(wit: Any) -> bool:
    return _as_bool(_mass, wit)


def check_audit_data(wit: Any, pub: Any) -> bool:
    return _as_bool(_audit, wit, pub)


def check_clear_outputs(pub: RevealingPublicInputs) -> bool:
    return _as_bool(_clear_outputs, pub)


def check_mass_with_clear_outputs(wit: RevealingWitness, pub: RevealingPublicInputs) -> bool:
    return _as_bool(_mass_clear_outputs, wit, pub)


def check_mass_with_clear_inputs(wit: HidingWitness, pub: HidingPublicInputs) -> bool:
    return _as_bool(_mass_clear_inputs, wit, pub)


def check_grab_inputs(wit: GrabWitness, pub: GrabPublicInputs) -> bool:
    return _as_bool(_grab_inputs, wit, pub)


def check_delegate(wit: Any, pub: Any) -> bool:
    return _as_bool(_delegate, wit, pub)


# -- provers -------------------------------------------------------------------


def _backend(backend: ProofSystem | None) -> ProofSystem:
    return backend if backend is not None else _default_backend


def prove_mint(wit: MintWitness, pub: MintPublicInputs, backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("mint", wit, pub)


def prove_transfer(wit: TransferWitness, pub: TransferPublicInputs,
                   backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("transfer", wit, pub)


def prove_revealing_transfer(wit: RevealingWitness, pub: RevealingPublicInputs,
                             backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("revealing", wit, pub)


def prove_hiding_transfer(wit: HidingWitness, pub: HidingPublicInputs,
                          backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("hiding", wit, pub)


def prove_grabber(wit: GrabWitness, pub: GrabPublicInputs, backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("grab", wit, pub)


def prove_delegated_mint(wit: MintWitness, pub: DelegatedMintPublicInputs,
                         backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("del_mint", wit, pub)


def prove_delegated_transfer(wit: TransferWitness, pub: DelegatedTransferPublicInputs,
                             backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("del_transfer", wit, pub)


def prove_del_rev_transfer(wit: RevealingWitness, pub: DelegatedRevealingPublicInputs,
                           backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("del_revealing", wit, pub)


def prove_del_hid_transfer(wit: HidingWitness, pub: DelegatedHidingPublicInputs,
                           backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("del_hiding", wit, pub)


def prove_dvp(wit: DvpWitness, pub: DvpPublicInputs, backend: ProofSystem | None = None) -> Proof:
    return _backend(backend).prove("dvp", wit, pub)


def verify(circuit_id: str, proof: Proof, public: Any, backend: ProofSystem | None = None) -> bool:
    return _backend(backend).verify(circuit_id, proof, public)


# -- honest public-input derivation ------------------------------------------


def _audit_d(wit: Any) -> bytes:
    return seal_to_key(wit.audit_pk, audit_plaintext(audit_record(wit))).to_bytes()


def _spend_digests(inputs: Sequence[ImgPath], sk: int, nonce_g: int) -> tuple[list[int], list[int]]:
    gk = create_grabber_key(sk, nonce_g)
    imgs = [i.img for i in inputs]
    return [nullify(t, sk) for t in imgs], [grab_token(t, gk) for t in imgs]


def build_mint_public(wit: MintWitness, type_t: int, root_i: int | None = None) -> MintPublicInputs:
    return MintPublicInputs(type_t, tuple(commit(t) for t in wit.outputs), root_i)


def build_transfer_public(wit: TransferWitness, type_t: int, root_c: int, nonce_g: int) -> TransferPublicInputs:
    nulls, grabs = _spend_digests(wit.inputs, wit.sk, nonce_g)
    return TransferPublicInputs(
        nulls=tuple(nulls),
        grabs=tuple(grabs),
        comms=tuple(commit(t) for t in wit.outputs),
        type_t=type_t,
        root_c=root_c,
        nonce_g=nonce_g,
        burn_c=burn_commitment(wit.burn_a, wit.burn_ids, witness_hash(wit)),
        audit_acc=account_of(wit.audit_pk),
        audit_d=_audit_d(wit),
    )


def build_revealing_public(wit: RevealingWitness, clear: Sequence[TokenPreimage], type_t: int,
                           root_c: int, nonce_g: int) -> RevealingPublicInputs:
    nulls, grabs = _spend_digests(wit.inputs, wit.sk, nonce_g)
    return RevealingPublicInputs(
        nulls=tuple(nulls),
        grabs=tuple(grabs),
        outputs=tuple(clear),
        type_t=type_t,
        root_c=root_c,
        nonce_g=nonce_g,
        audit_d=_audit_d(wit),
        audit_acc=account_of(wit.audit_pk),
        comms=tuple(commit(t) for t in wit.outputs),
    )


def build_hiding_public(wit: HidingWitness, type_t: int, amount_i: int = 0,
                        ids_i: Sequence[int] = (), acc_i: int = 0) -> HidingPublicInputs:
    return HidingPublicInputs(
        comms=tuple(commit(t) for t in wit.outputs),
        type_t=type_t,
        audit_d=_audit_d(wit),
        audit_acc=account_of(wit.audit_pk),
        amount_i=amount_i,
        ids_i=tuple(ids_i),
        acc_i=acc_i,
    )


def build_grab_public(wit: GrabWitness, type_t: int, root_c: int, nonce_g: int) -> GrabPublicInputs:
    return GrabPublicInputs(
        grabs=tuple(grab_token(i.img, wit.grabber_k) for i in wit.inputs),
        comms=tuple(commit(t) for t in wit.outputs),
        type_t=type_t,
        root_c=root_c,
        nonce_g=nonce_g,
        auth_acc=get_account(wit.auth_sk),
    )


_DELEGATED = {
    MintPublicInputs: DelegatedMintPublicInputs,
    TransferPublicInputs: DelegatedTransferPublicInputs,
    RevealingPublicInputs: DelegatedRevealingPublicInputs,
    HidingPublicInputs: DelegatedHidingPublicInputs,
}


def delegate(wit: Any, pub: Any, del_add: Address):
    """Wrap inner public inputs in the delegated envelope bound to ``del_add``."""
    return _DELEGATED[type(pub)](pub, del_add, delegate_binding(del_add, wit))


def build_dvp_public(wit: DvpWitness, payment: DelegatedTransferTransaction, type_d: int) -> DvpPublicInputs:
    return DvpPublicInputs(payment, delivery_hash(wit.delivery_w), type_d, dvp_binding(wit))
