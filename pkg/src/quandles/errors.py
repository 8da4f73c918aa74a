"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class QuandlesError(Exception):
    """Base class for all library errors."""


class GroupValidationError(QuandlesError):
    """A multiplication table is not a group; carries a witness."""

    def __init__(self, reason: str, witness=None):
        self.reason = reason
        self.witness = witness
        msg = reason if witness is None else f"{reason} (witness: {witness})"
        super().__init__(msg)


class AxiomViolation(QuandlesError):
    """A table fails a rack/quandle axiom.

    ``axiom`` is one of ``"q1"``, ``"r1"``, ``"r2"``; ``witness`` is the first
    offending element / column / triple in scan order.  A table that satisfies
    (r1), (r2) but fails (q1) is a rack that is not a quandle.
    """

    def __init__(self, axiom: str, witness):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"axiom {axiom} fails at {witness}")


class SizeLimitExceeded(QuandlesError):
    """Construction would exceed a hard size bound."""


class OrderLimitExceeded(QuandlesError):
    """Operation refused: input order above the supported bound."""


class ClosureLimitExceeded(QuandlesError):
    """Group closure grew past the configured limit."""


class SearchLimitExceeded(QuandlesError):
    """Search refused: input size above the supported bound."""


class BudgetExhausted(QuandlesError):
    """A budgeted search ran out of nodes before completing.

    Distinct from a completed search that found nothing.
    """


class NotAbelian(QuandlesError):
    """An abelian group was required."""


class NotASubquandle(QuandlesError):
    """The given subset is not closed under the quandle operation."""


class DuplicateBaseElement(QuandlesError):
    """Base subset A contains a repeated element."""


class IdentityBaseElement(QuandlesError):
    """Base subset A contains the identity (rejected for free products)."""


class UnionConditionViolated(QuandlesError):
    """Union construction input fails one of its compatibility conditions.

    ``which`` names the failed requirement (``"sigma_not_aut"``,
    ``"tau_not_aut"``, ``"sigma_not_hom"``, ``"tau_not_hom"``,
    ``"condition1"``, ``"condition2"``); ``witness`` is the offending tuple.
    """

    def __init__(self, which: str, witness):
        self.which = which
        self.witness = witness
        super().__init__(f"union condition {which} fails at {witness}")


class CertificateFailed(QuandlesError):
    """An assignment does not certify injectivity.

    ``reason`` is one of ``"relator"``, ``"collision"``, ``"not_hom"``.
    """

    def __init__(self, reason: str, witness=None):
        self.reason = reason
        self.witness = witness
        msg = reason if witness is None else f"{reason} (witness: {witness})"
        super().__init__(msg)


class DepthExceeded(QuandlesError):
    """Bounded rewriting refused: depth above the supported bound."""
