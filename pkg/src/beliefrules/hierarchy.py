"""Bottom-up evaluation over a framework tree, what-if scenarios, node weighting.

Leaves feed raw inputs into their parent's rule base. An internal child
feeds its parent the crisp expected utility of its own result,
re-transformed over the parent antecedent's scale and scaled by the
child's assigned mass, so ignorance introduced anywhere in the tree keeps
discounting every level above it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InputsError, NoRuleActivated, RuleBaseInvalid, UnknownNode
from .inference import CompiledRuleBase, expected_utility
from .model import (
    AntecedentAttribute,
    BeliefDistribution,
    EvaluationFramework,
    FrameworkNode,
    InternalNode,
    LeafNode,
    RuleBase,
    validate_framework,
)
from .transform import InputValue, transform_crisp, transform_input


@dataclass(frozen=True)
class NodeResult:
    """Result at one framework node; mirrors the framework topology."""

    name: str
    distribution: BeliefDistribution
    crisp: float
    children: tuple["NodeResult", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def unassigned_mass(self) -> float:
        return max(0.0, 1.0 - self.distribution.mass)

    @property
    def percent(self) -> float:
        """Crisp score expressed on a 0-100 scale (ten-point convention)."""
        return self.crisp * 10.0

    def find(self, name: str) -> "NodeResult":
        if self.name == name:
            return self
        for child in self.children:
            try:
                return child.find(name)
            except UnknownNode:
                pass
        raise UnknownNode(f"no result for node {name!r}")

    def crisp_by_node(self) -> dict[str, float]:
        out = {self.name: self.crisp}
        for child in self.children:
            out.update(child.crisp_by_node())
        return out

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "crisp": self.crisp,
            "percent": self.percent,
            "unassigned": self.unassigned_mass,
            "distribution": {
                g: d for g, d in zip(self.distribution.scale.grades, self.distribution.degrees)
            },
        }
        if self.children:
            doc["children"] = [c.to_dict() for c in self.children]
        return doc


def result_from_dict(doc: dict, fw: EvaluationFramework) -> NodeResult:
    """Rebuild a NodeResult tree from its JSON form, resolving scales via ``fw``."""
    node = fw.node(doc["name"])
    scale = node.scale if isinstance(node, LeafNode) else node.rulebase.consequent_scale
    dist = BeliefDistribution.from_dict(scale, doc.get("distribution", {}))
    children = tuple(result_from_dict(c, fw) for c in doc.get("children", []))
    return NodeResult(name=doc["name"], distribution=dist, crisp=float(doc["crisp"]), children=children)


class FrameworkEvaluator:
    """Compiles every rule-base node once for repeated evaluation."""

    def __init__(self, fw: EvaluationFramework):
        issues = validate_framework(fw)
        if issues:
            raise RuleBaseInvalid(issues)
        self.framework = fw
        self._compiled = {n.name: CompiledRuleBase(n.rulebase) for n in fw.internal_nodes()}
        self._leaf_names = [leaf.name for leaf in fw.leaves()]

    @property
    def leaf_names(self) -> list[str]:
        return list(self._leaf_names)

    def evaluate(self, leaf_inputs: Mapping[str, InputValue]) -> NodeResult:
        """Evaluate the whole tree; every leaf needs an entry (MISSING allowed)."""
        unknown = sorted(set(leaf_inputs) - set(self._leaf_names))
        if unknown:
            raise InputsError(f"unknown leaves in inputs: {', '.join(unknown)}")
        absent = [name for name in self._leaf_names if name not in leaf_inputs]
        if absent:
            raise InputsError(f"no input for leaf '{absent[0]}' ({len(absent)} leaves missing)")
        return self._eval_node(self.framework.root, leaf_inputs)

    def _eval_node(self, node: InternalNode, leaf_inputs: Mapping[str, InputValue]) -> NodeResult:
        compiled = self._compiled[node.name]
        child_results: list[NodeResult] = []
        parent_inputs: list[InputValue] = []
        for child, attr in zip(node.children, node.rulebase.antecedents):
            if isinstance(child, LeafNode):
                raw = leaf_inputs[child.name]
                dist = transform_input(raw, child.scale)
                child_results.append(
                    NodeResult(
                        name=child.name,
                        distribution=dist,
                        crisp=expected_utility(dist, child.scale.output_utilities),
                    )
                )
                parent_inputs.append(raw)
            else:
                sub = self._eval_node(child, leaf_inputs)
                child_results.append(sub)
                parent_inputs.append(_chained_input(sub, attr))
        try:
            result = compiled.infer(parent_inputs)
        except NoRuleActivated:
            raise NoRuleActivated(node.name) from None
        return NodeResult(
            name=node.name,
            distribution=result.distribution,
            crisp=result.crisp,
            children=tuple(child_results),
        )


def _chained_input(child: NodeResult, attr: AntecedentAttribute) -> InputValue:
    """Feed a child node's crisp score upward, carrying its ignorance along.

    The crisp score is re-transformed over the parent antecedent's scale;
    scaling the result by the child's assigned mass keeps the missing mass
    missing, so the parent's belief update discounts for it.
    """
    mass = child.distribution.mass
    if mass == 0.0:
        from .transform import MISSING

        return MISSING
    dist = transform_crisp(child.crisp, attr.scale)
    if mass >= 1.0:
        return dist
    return BeliefDistribution(attr.scale, tuple(d * mass for d in dist.degrees))


def evaluate_tree(fw: EvaluationFramework, leaf_inputs: Mapping[str, InputValue]) -> NodeResult:
    """One-shot evaluation; use :class:`FrameworkEvaluator` for batches."""
    return FrameworkEvaluator(fw).evaluate(leaf_inputs)


# ---------------------------------------------------------------------------
# What-if scenarios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    """Named set of leaf overrides; unset leaves inherit the baseline."""

    name: str
    overrides: Mapping[str, InputValue] = field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioOutcome:
    scenario: str
    result: NodeResult | None
    error: str | None
    deltas: dict[str, float]
    root_delta: float | None

    def to_dict(self) -> dict:
        doc: dict = {"scenario": self.scenario}
        if self.error is not None:
            doc["error"] = self.error
        else:
            doc["root_delta"] = self.root_delta
            doc["deltas"] = self.deltas
            doc["result"] = self.result.to_dict()
        return doc


@dataclass(frozen=True)
class WhatIfReport:
    baseline: NodeResult
    outcomes: tuple[ScenarioOutcome, ...]

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline.to_dict(),
            "scenarios": [o.to_dict() for o in self.outcomes],
        }


def what_if(
    fw: EvaluationFramework | FrameworkEvaluator,
    baseline: Mapping[str, InputValue],
    scenarios: Sequence[Scenario],
) -> WhatIfReport:
    """Compare scenarios against a baseline; failures are embedded per scenario.

    Outcomes are ordered by absolute root delta, largest first, with
    failing scenarios at the end.
    """
    evaluator = fw if isinstance(fw, FrameworkEvaluator) else FrameworkEvaluator(fw)
    base_result = evaluator.evaluate(baseline)
    base_crisp = base_result.crisp_by_node()

    outcomes = []
    for scenario in scenarios:
        merged = dict(baseline)
        unknown = sorted(set(scenario.overrides) - set(evaluator.leaf_names))
        try:
            if unknown:
                raise InputsError(f"scenario overrides unknown leaves: {', '.join(unknown)}")
            merged.update(scenario.overrides)
            result = evaluator.evaluate(merged)
        except (InputsError, NoRuleActivated) as exc:
            outcomes.append(
                ScenarioOutcome(scenario=scenario.name, result=None, error=str(exc), deltas={}, root_delta=None)
            )
            continue
        crisp = result.crisp_by_node()
        deltas = {name: crisp[name] - base_crisp[name] for name in base_crisp}
        outcomes.append(
            ScenarioOutcome(
                scenario=scenario.name,
                result=result,
                error=None,
                deltas=deltas,
                root_delta=deltas[base_result.name],
            )
        )
    outcomes.sort(key=lambda o: (o.error is not None, -abs(o.root_delta or 0.0), o.scenario))
    return WhatIfReport(baseline=base_result, outcomes=tuple(outcomes))


# ---------------------------------------------------------------------------
# Node weighting
# ---------------------------------------------------------------------------


def set_weights(fw: EvaluationFramework, node: str, weights: Sequence[float]) -> EvaluationFramework:
    """Return a copy of the framework with new child weights at one node."""
    target = fw.node(node)
    if not isinstance(target, InternalNode):
        raise UnknownNode(f"node {node!r} is a leaf; only rule-base nodes carry child weights")
    if len(weights) != len(target.children):
        raise ValueError(f"node {node!r} has {len(target.children)} children, got {len(weights)} weights")

    def rebuild(n: FrameworkNode) -> FrameworkNode:
        if isinstance(n, LeafNode):
            return n
        children = tuple(rebuild(c) for c in n.children)
        rb = n.rulebase
        if n.name == node:
            antecedents = tuple(
                AntecedentAttribute(name=a.name, scale=a.scale, weight=float(w))
                for a, w in zip(rb.antecedents, weights)
            )
            rb = RuleBase(
                name=rb.name,
                antecedents=antecedents,
                consequent_scale=rb.consequent_scale,
                rules=rb.rules,
            )
        if children == n.children and rb is n.rulebase:
            return n
        return InternalNode(name=n.name, rulebase=rb, children=children)

    new_root = rebuild(fw.root)
    assert isinstance(new_root, InternalNode)
    return EvaluationFramework(name=fw.name, root=new_root)
