"""Typed error hierarchy.

Every rejected precondition surfaces as exactly one named exception class.
``error.name`` is the stable identifier used in CLI output and replay reports.
"""

from __future__ import annotations


class ZkTokenError(Exception):
    """Base for every error raised by this package."""

    @property
    def name(self) -> str:
        return type(self).__name__


# crypto-core
class CryptoError(ZkTokenError):
    pass


class ZeroKey(CryptoError):
    pass


class PathLengthMismatch(CryptoError):
    pass


class TreeFull(CryptoError):
    pass


class IndexOutOfRange(CryptoError):
    pass


class WrongKey(CryptoError):
    pass


# token-model
class NotOwner(ZkTokenError):
    pass


# proof-circuits
class ConstraintViolation(ZkTokenError):
    """A circuit requirement failed. ``constraint`` names the requirement."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}" if detail else constraint)


class Overflow(ConstraintViolation):
    def __init__(self, detail: str = ""):
        super().__init__("overflow", detail)


class UnknownCircuit(ZkTokenError):
    pass


# ledger / token contract
class LedgerError(ZkTokenError):
    pass


class IssuerViolation(LedgerError):
    pass


class ProofRejected(LedgerError):
    pass


class TypeMismatch(LedgerError):
    pass


class DuplicateCommitment(LedgerError):
    pass


class UnknownIssuerRoot(LedgerError):
    pass


class StaleRoot(LedgerError):
    pass


class DoubleSpend(LedgerError):
    pass


class GrabberReuse(LedgerError):
    pass


class ParamMismatch(LedgerError):
    pass


class OwnerNotContract(LedgerError):
    pass


class InsufficientBalance(LedgerError):
    pass


class MissingNft(LedgerError):
    pass


class NotAuthority(LedgerError):
    pass


class NotDelegate(LedgerError):
    pass


class UnknownContract(LedgerError):
    pass


# dvp
class UnknownTokenType(LedgerError):
    pass


class InnerTransferFailed(LedgerError):
    def __init__(self, cause: ZkTokenError):
        self.cause = cause
        super().__init__(f"{cause.name}: {cause}")


# harness / cli
class ParseError(ZkTokenError):
    pass


class ScenarioAssertionFailed(ZkTokenError):
    def __init__(self, failures: list[dict]):
        self.failures = failures
        super().__init__(f"{len(failures)} assertion(s) failed")


class ReplayError(ZkTokenError):
    def __init__(self, index: int, cause: ZkTokenError):
        self.index = index
        self.cause = cause
        super().__init__(f"transaction {index}: {cause.name}: {cause}")
