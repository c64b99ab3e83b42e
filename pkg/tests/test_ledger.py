from dataclasses import replace

import pytest

from zktoken.circuits import (
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
    DelegatedTransferTransaction,
    build_grab_public,
    build_hiding_public,
    build_mint_public,
    build_revealing_public,
    build_transfer_public,
    delegate,
    issuer_leaf,
)
from zktoken.crypto import CommitmentTree, create_grabber_key, derive_public_key, get_account
from zktoken.errors import (
    DoubleSpend,
    DuplicateCommitment,
    GrabberReuse,
    InsufficientBalance,
    IssuerViolation,
    MissingNft,
    NotAuthority,
    NotDelegate,
    OwnerNotContract,
    ParamMismatch,
    ProofRejected,
    StaleRoot,
    TreeFull,
    TypeMismatch,
    UnknownIssuerRoot,
)
from zktoken.ledger import TokenContract
from zktoken.model import TokenPreimage, commit, nullify

TYPE = 5
AUTH = "auth"
AUTH_SK = 11
AUDIT_SK = 77
NONCE_G = 999
ALICE, BOB = 101, 202
VAULT_SK = 303
AUDIT_PK = derive_public_key(AUDIT_SK)


class World:
    def __init__(self, depth=8):
        self.c = TokenContract("tok", TYPE, AUTH, get_account(AUTH_SK), get_account(AUDIT_SK), NONCE_G, depth=depth)
        self.c.register_issuer(AUTH, True, AUTH)
        self.nonce = 0

    def token(self, sk, amount=0, id=0, type_t=TYPE):
        self.nonce += 1
        return TokenPreimage(get_account(sk), type_t, self.nonce, amount, id)

    def mint_tx(self, *tokens, type_t=TYPE, root_i=None, issuer_sk=None, path_i=None):
        wit = MintWitness(tokens, issuer_sk, path_i)
        pub = build_mint_public(wit, type_t, root_i)
        return MintTransaction(pub, self.c.backend.prove("mint", wit, pub))

    def mint(self, sk, amount=0, id=0):
        t = self.token(sk, amount, id)
        self.c.mint(self.mint_tx(t), AUTH)
        return t

    def paths(self, tokens):
        tree = self.c.state.tree_c
        return tuple(ImgPath(t, tree.proof_for(tree.index_of(commit(t)))) for t in tokens)

    def transfer_wit(self, sk, ins, outs, burn_a=0, burn_ids=(), audit_pk=AUDIT_PK):
        return TransferWitness(self.paths(ins), tuple(outs), sk, audit_pk, burn_a, tuple(burn_ids))

    def transfer_tx(self, sk, ins, outs, burn_a=0, burn_ids=(), audit_pk=AUDIT_PK, nonce_g=NONCE_G):
        wit = self.transfer_wit(sk, ins, outs, burn_a, burn_ids, audit_pk)
        pub = build_transfer_public(wit, TYPE, self.c.state.tree_c.root, nonce_g)
        return TransferTransaction(pub, self.c.backend.prove("transfer", wit, pub))

    def register_vault(self):
        self.c.register_contract_account("vault", get_account(VAULT_SK), AUTH)

    def reveal_tx(self, sk, ins, clear, change=()):
        wit = RevealingWitness(self.paths(ins), sk, AUDIT_PK, tuple(change))
        pub = build_revealing_public(wit, clear, TYPE, self.c.state.tree_c.root, NONCE_G)
        return RevealingTransferTransaction(pub, self.c.backend.prove("revealing", wit, pub))

    def hide_tx(self, outs, amount=0, ids=(), sk=None):
        wit = HidingWitness(tuple(outs), AUDIT_PK, sk)
        pub = build_hiding_public(wit, TYPE, amount, tuple(ids), get_account(sk) if sk else 0)
        return HidingTransferTransaction(pub, self.c.backend.prove("hiding", wit, pub))

    def grab_tx(self, victim_sk, ins, outs, auth_sk=AUTH_SK):
        gk = create_grabber_key(victim_sk, NONCE_G)
        wit = GrabWitness(self.paths(ins), tuple(outs), auth_sk, derive_public_key(victim_sk), gk)
        pub = build_grab_public(wit, TYPE, self.c.state.tree_c.root, NONCE_G)
        return GrabTransaction(pub, self.c.backend.prove("grab", wit, pub))


@pytest.fixture
def w():
    return World()


def test_mint_by_public_issuer(w):
    t = w.mint(ALICE, 50)
    assert w.c.is_unspent(commit(t))
    assert w.c.state.tree_c.roots[-1] == w.c.state.tree_c.root


def test_mint_issuer_rule(w):
    with pytest.raises(IssuerViolation):
        w.c.mint(w.mint_tx(w.token(ALICE, 1)), "stranger")
    # a public issuer may not also present an issuer root
    issuer_sk = 5
    w.c.register_hidden_issuer(get_account(issuer_sk), AUTH)
    tree = CommitmentTree(32)
    tree.append([issuer_leaf(get_account(issuer_sk))])
    tx = w.mint_tx(w.token(ALICE, 1), root_i=tree.root, issuer_sk=issuer_sk, path_i=tree.proof_for(0))
    with pytest.raises(IssuerViolation):
        w.c.mint(tx, AUTH)
    w.c.mint(tx, "anyone")


def test_mint_unknown_issuer_root(w):
    tree = CommitmentTree(32)
    tree.append([issuer_leaf(get_account(5))])
    tx = w.mint_tx(w.token(ALICE, 1), root_i=tree.root, issuer_sk=5, path_i=tree.proof_for(0))
    with pytest.raises(UnknownIssuerRoot):
        w.c.mint(tx, "anyone")


def test_mint_rejections(w):
    good = w.mint_tx(w.token(ALICE, 1))
    with pytest.raises(ProofRejected):
        w.c.mint(MintTransaction(good.pub, w.mint_tx(w.token(ALICE, 2)).proof), AUTH)
    with pytest.raises(TypeMismatch):
        w.c.mint(w.mint_tx(w.token(ALICE, 1, type_t=6), type_t=6), AUTH)
    w.c.mint(good, AUTH)
    with pytest.raises(DuplicateCommitment):
        w.c.mint(good, AUTH)


def test_tree_full_precheck():
    w = World(depth=1)
    w.mint(ALICE, 1)
    w.mint(ALICE, 2)
    before = w.c.snapshot()
    with pytest.raises(TreeFull):
        w.mint(ALICE, 3)
    assert w.c.snapshot() == before


def test_transfer_and_double_spend(w):
    t = w.mint(ALICE, 50)
    tx = w.transfer_tx(ALICE, [t], [w.token(BOB, 30), w.token(ALICE, 20)])
    events = w.c.transfer(tx)
    assert [e.kind for e in events] == ["Transfer", "Burn"]
    assert nullify(t, ALICE) in w.c.state.nullifiers
    assert not w.c.is_unspent(commit(t), nullify(t, ALICE))
    before = w.c.snapshot()
    with pytest.raises(DoubleSpend):
        w.c.transfer(tx)
    assert w.c.snapshot() == before


def test_spend_against_historical_root(w):
    t = w.mint(ALICE, 5)
    tx = w.transfer_tx(ALICE, [t], [w.token(BOB, 5)])
    w.mint(BOB, 9)  # root moves on; the older root stays valid
    w.c.transfer(tx)


def test_stale_root(w):
    t = w.mint(ALICE, 5)
    wit = w.transfer_wit(ALICE, [t], [w.token(BOB, 5)])

    bad_path = (replace(wit.inputs[0], path=()),)
    wit = replace(wit, inputs=bad_path)
    pub = build_transfer_public(wit, TYPE, commit(t), NONCE_G)  # depth-0 path: root is the leaf itself
    with pytest.raises(StaleRoot):
        w.c.transfer(TransferTransaction(pub, w.c.backend.prove("transfer", wit, pub)))


def test_param_mismatches(w):
    t = w.mint(ALICE, 5)
    with pytest.raises(ParamMismatch):
        w.c.transfer(w.transfer_tx(ALICE, [t], [w.token(BOB, 5)], audit_pk=derive_public_key(1)))
    with pytest.raises(ParamMismatch):
        w.c.transfer(w.transfer_tx(ALICE, [t], [w.token(BOB, 5)], nonce_g=NONCE_G + 1))


def test_burn_event_always_emitted(w):
    t = w.mint(ALICE, 5)
    burn = w.c.transfer(w.transfer_tx(ALICE, [t], [w.token(BOB, 2)], burn_a=3))
    u = w.mint(ALICE, 5)
    plain = w.c.transfer(w.transfer_tx(ALICE, [u], [w.token(BOB, 5)]))
    assert [e.kind for e in burn] == [e.kind for e in plain]
    assert set(burn[1].payload) == set(plain[1].payload)


def test_reveal_and_hide(w):
    t = w.mint(ALICE, 10)
    n = w.mint(ALICE, id=42)
    clear = [TokenPreimage(get_account(VAULT_SK), TYPE, 0, 7), TokenPreimage(get_account(VAULT_SK), TYPE, 0, 0, 42)]
    tx = w.reveal_tx(ALICE, [t, n], clear, [w.token(ALICE, 3)])
    with pytest.raises(OwnerNotContract):
        w.c.revealing_transfer(tx)
    w.register_vault()
    w.c.revealing_transfer(tx)
    vault = get_account(VAULT_SK)
    assert w.c.state.balances[vault] == 7 and w.c.state.nfts[vault] == {42}
    assert w.c.open_mass() == 7

    with pytest.raises(InsufficientBalance):
        w.c.hiding_transfer(w.hide_tx([w.token(BOB, 8)], amount=8), "vault")
    with pytest.raises(MissingNft):
        w.c.hiding_transfer(w.hide_tx([w.token(BOB, id=43)], ids=[43]), "vault")
    with pytest.raises(OwnerNotContract):
        w.c.hiding_transfer(w.hide_tx([w.token(BOB, 2)], amount=2), "stranger")
    w.c.hiding_transfer(w.hide_tx([w.token(BOB, 2), w.token(BOB, id=42)], amount=2, ids=[42]), "vault")
    assert w.c.state.balances[vault] == 5 and w.c.state.nfts[vault] == set()
    # a hide signed by the vault key names the vault account directly
    w.c.hiding_transfer(w.hide_tx([w.token(BOB, 5)], amount=5, sk=VAULT_SK), "anyone")
    assert w.c.state.balances[vault] == 0


def test_grab(w):
    t = w.mint(ALICE, 10)
    tx = w.grab_tx(ALICE, [t], [w.token(AUTH_SK, 10)])
    with pytest.raises(NotAuthority):
        w.c.grab(tx, "stranger")
    with pytest.raises(ParamMismatch):
        w.c.grab(w.grab_tx(ALICE, [t], [w.token(AUTH_SK, 10)], auth_sk=12), AUTH)
    w.c.grab(tx, AUTH)
    with pytest.raises(GrabberReuse):
        w.c.transfer(w.transfer_tx(ALICE, [t], [w.token(BOB, 10)]))
    with pytest.raises(GrabberReuse):
        w.c.grab(w.grab_tx(ALICE, [t], [w.token(AUTH_SK, 10)]), AUTH)


def test_spent_token_cannot_be_grabbed(w):
    t = w.mint(ALICE, 10)
    w.c.transfer(w.transfer_tx(ALICE, [t], [w.token(BOB, 10)]))
    with pytest.raises(GrabberReuse):
        w.c.grab(w.grab_tx(ALICE, [t], [w.token(AUTH_SK, 10)]), AUTH)


def test_admin_requires_authority(w):
    with pytest.raises(NotAuthority):
        w.c.register_issuer("x", True, "x")
    with pytest.raises(NotAuthority):
        w.c.register_hidden_issuer(1, "x")
    with pytest.raises(NotAuthority):
        w.c.register_contract_account("x", 1, "x")


def test_delegated_transfer_requires_delegate(w):
    t = w.mint(ALICE, 4)
    wit = w.transfer_wit(ALICE, [t], [w.token(BOB, 4)])
    pub = delegate(wit, build_transfer_public(wit, TYPE, w.c.state.tree_c.root, NONCE_G), "bank")
    tx = DelegatedTransferTransaction(pub, w.c.backend.prove("del_transfer", wit, pub))
    with pytest.raises(NotDelegate):
        w.c.delegated_transfer(tx, "other")
    events = w.c.delegated_transfer(tx, "bank")
    assert events[0].payload["delegate"] == "bank"


def test_save_restore(w):
    saved = w.c.save()
    w.mint(ALICE, 1)
    w.c.restore(saved)
    assert len(w.c.state.tree_c) == 0
