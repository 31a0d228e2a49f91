"""Exception hierarchy shared across the package."""

from __future__ import annotations


class BeliefRulesError(Exception):
    """Base class for all errors raised by this package."""


class DocumentError(BeliefRulesError):
    """A rule-base / framework / inputs document is malformed or violates its schema."""


class RuleBaseInvalid(BeliefRulesError):
    """A rule base breaks a structural invariant (duplicate packets, bad indices, ...)."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"rule base failed validation: {lines}")


class GenerationCapExceeded(BeliefRulesError):
    """Combinatorial rule generation would exceed the configured cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"refusing to generate {count} rules (cap is {cap})")


class ScaleMismatch(BeliefRulesError):
    """A belief distribution was supplied over a different scale than expected."""


class NoRuleActivated(BeliefRulesError):
    """Every rule's matching degree is zero; the input region is uncovered.

    Carries the framework node name when raised during tree evaluation.
    """

    def __init__(self, node: str | None = None):
        self.node = node
        where = f" at node '{node}'" if node else ""
        super().__init__(f"no rule activated{where}: inputs match no rule in the base")


class DegenerateAggregation(BeliefRulesError):
    """The evidential-reasoning normalisation denominator vanished (all weights zero)."""


class UnknownNode(BeliefRulesError):
    """A framework node name does not exist."""


class InputsError(BeliefRulesError):
    """Leaf inputs are incomplete or reference unknown leaves."""


class DegenerateLabels(BeliefRulesError):
    """ROC needs at least one positive and one negative label."""
