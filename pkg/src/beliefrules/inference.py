"""Evidential-reasoning inference over a single rule base.

The pipeline: transform raw inputs to grade distributions, compute each
rule's combined matching degree (weighted product of the input degrees on
its packet grades), normalise into activation weights, discount consequent
beliefs by the mean input completeness, combine the activated consequents
with the evidential-reasoning (ER) rule, and defuzzify to an expected
utility.

Two ER combiners are provided deliberately: the closed-form analytical
expression used in production, and a sequential pairwise combiner that
serves as an independent cross-check. They must agree to high precision on
any input; tests enforce this.

An attribute whose input carries zero mass (a missing answer) contributes
no factor to the matching product: it cannot discriminate between rules,
so it neither activates nor suppresses any of them. Its missing mass is
accounted for by the belief-update discount instead. Only when every
input is missing is there no evidence at all, and activation fails with
:class:`~beliefrules.errors.NoRuleActivated`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateAggregation, NoRuleActivated, RuleBaseInvalid
from .model import BeliefDistribution, BeliefRule, RuleBase, validate_rule_base
from .transform import InputValue, transform_input

_DEGENERATE_EPS = 1e-300


def normalized_attribute_weights(weights: Sequence[float]) -> np.ndarray:
    """Scale relative attribute weights so the largest becomes 1."""
    w = np.asarray(weights, dtype=float)
    if w.size == 0:
        raise ValueError("no attribute weights given")
    top = w.max()
    if not top > 0:
        raise ValueError("attribute weights must contain a positive maximum")
    return w / top


def matching_degree(
    rule: BeliefRule,
    inputs: Sequence[BeliefDistribution],
    weights: Sequence[float],
) -> float:
    """Combined matching degree of one rule against transformed inputs.

    The product of the input degrees on the rule's packet grades, each
    raised to the attribute's normalised weight. Zero-mass (missing)
    inputs are skipped; if all inputs are missing the degree is 0.
    """
    if len(inputs) != len(rule.packet) or len(weights) != len(rule.packet):
        raise ValueError(
            f"rule '{rule.id}' binds {len(rule.packet)} antecedents, "
            f"got {len(inputs)} inputs and {len(weights)} weights"
        )
    norm = normalized_attribute_weights(weights)
    degree = 1.0
    informative = False
    for dist, grade, w in zip(inputs, rule.packet, norm):
        if dist.mass == 0.0:
            continue
        informative = True
        factor = dist.degrees[grade]
        if w == 1.0:
            degree *= factor
        else:
            # 0**0 == 1 in IEEE semantics: a zero-weight attribute is ignored
            degree *= factor**w
        if degree == 0.0:
            return 0.0
    return degree if informative else 0.0


def completeness_factor(inputs: Sequence[BeliefDistribution]) -> float:
    """Mean input mass across all antecedents; missing inputs count as 0."""
    if not inputs:
        raise ValueError("no inputs")
    return sum(d.mass for d in inputs) / len(inputs)


def update_beliefs(rule: BeliefRule, inputs: Sequence[BeliefDistribution]) -> tuple[float, ...]:
    """Discount a rule's consequent beliefs by the mean input completeness.

    With fully complete inputs the consequent is unchanged; each missing
    or partial input shifts a proportional share of belief into ignorance.
    """
    factor = completeness_factor(inputs)
    return tuple(b * factor for b in rule.consequent.degrees)


def _matching_vector(rb: RuleBase, inputs: Sequence[BeliefDistribution]) -> np.ndarray:
    """Matching degrees for every rule at once (vectorised)."""
    t = rb.attribute_count
    if len(inputs) != t:
        raise ValueError(f"rule base has {t} antecedents, got {len(inputs)} inputs")
    packets = np.array([r.packet for r in rb.rules], dtype=np.intp)
    norm = normalized_attribute_weights([a.weight for a in rb.antecedents])
    alpha = np.ones(rb.rule_count)
    informative = False
    for i in range(t):
        dist = inputs[i]
        if dist.mass == 0.0:
            continue
        informative = True
        col = np.asarray(dist.degrees)[packets[:, i]]
        alpha *= col if norm[i] == 1.0 else col ** norm[i]
    if not informative:
        return np.zeros(rb.rule_count)
    return alpha


def activation_weights(rb: RuleBase, inputs: Sequence[BeliefDistribution]) -> np.ndarray:
    """Rule-weighted, normalised matching degrees; they sum to 1.

    Raises :class:`NoRuleActivated` when every matching degree is zero,
    which can happen with partial rule bases or all-missing inputs.
    """
    alpha = _matching_vector(rb, inputs)
    theta = np.array([r.weight for r in rb.rules])
    weighted = theta * alpha
    total = weighted.sum()
    if total <= 0.0:
        raise NoRuleActivated()
    return weighted / total


@dataclass(frozen=True)
class ActivationRecord:
    """Per-rule trace of one inference: matching, activation, discounted beliefs."""

    rule_id: str
    matching_degree: float
    activation_weight: float
    updated_beliefs: tuple[float, ...]


def activation_records(rb: RuleBase, inputs: Sequence[BeliefDistribution]) -> list[ActivationRecord]:
    omega = activation_weights(rb, inputs)
    alpha = _matching_vector(rb, inputs)
    factor = completeness_factor(inputs)
    return [
        ActivationRecord(
            rule_id=r.id,
            matching_degree=float(a),
            activation_weight=float(w),
            updated_beliefs=tuple(b * factor for b in r.consequent.degrees),
        )
        for r, a, w in zip(rb.rules, alpha, omega)
    ]


# ---------------------------------------------------------------------------
# Evidential-reasoning combination
# ---------------------------------------------------------------------------


def aggregate_analytical(
    weights: Sequence[float],
    beliefs: Sequence[Sequence[float]] | np.ndarray,
    n_grades: int,
) -> np.ndarray:
    """Closed-form ER combination of per-rule consequent beliefs.

    ``weights`` are the activation weights (summing to 1), ``beliefs`` a
    rules-by-grades matrix. For each grade the combined degree is

        beta_j = (P_j - Q) / (1/mu - R)

    with P_j = prod_k (w_k * b_jk + 1 - w_k * s_k), Q = prod_k (1 - w_k * s_k),
    R = prod_k (1 - w_k), 1/mu = sum_j P_j - (N - 1) * Q, and s_k the mass
    of rule k's consequent. Grades untouched by any activated rule end at
    exactly 0; the combined mass never exceeds 1 and equals 1 when every
    activated rule is complete.
    """
    w = np.asarray(weights, dtype=float)
    b = np.asarray(beliefs, dtype=float)
    if b.ndim != 2 or b.shape != (w.size, n_grades):
        raise ValueError(f"beliefs must be {w.size} x {n_grades}, got {b.shape}")
    s = b.sum(axis=1)
    residue = 1.0 - w * s  # mass rule k leaves unassigned after weighting
    p = np.prod(w[:, None] * b + residue[:, None], axis=0)
    q = float(np.prod(residue))
    r = float(np.prod(1.0 - w))
    mu_inv = float(p.sum()) - (n_grades - 1) * q
    denom = mu_inv - r
    if abs(denom) < _DEGENERATE_EPS:
        raise DegenerateAggregation("normalisation denominator vanished; are all weights zero?")
    beta = (p - q) / denom
    return np.clip(beta, 0.0, 1.0)


def aggregate_recursive(
    weights: Sequence[float],
    beliefs: Sequence[Sequence[float]] | np.ndarray,
    n_grades: int,
) -> np.ndarray:
    """Sequential pairwise ER combination; independent oracle for the closed form.

    Each rule contributes basic probability masses m_jk = w_k * b_jk. The
    remaining mass splits into a weight-induced reserve (1 - w_k), which
    every source keeps for the others, and an incompleteness-induced part
    w_k * (1 - s_k). Rules are folded in one at a time with per-step
    conflict normalisation; the final reserve is removed proportionally.
    """
    w = np.asarray(weights, dtype=float)
    b = np.asarray(beliefs, dtype=float)
    if b.ndim != 2 or b.shape != (w.size, n_grades):
        raise ValueError(f"beliefs must be {w.size} x {n_grades}, got {b.shape}")
    s = b.sum(axis=1)
    assigned = w[:, None] * b
    reserve = 1.0 - w
    incomplete = w * (1.0 - s)

    m = assigned[0].copy()
    m_bar = reserve[0]
    m_tilde = incomplete[0]
    for k in range(1, w.size):
        mk = assigned[k]
        mk_bar = reserve[k]
        mk_tilde = incomplete[k]
        m_h = m_bar + m_tilde
        mk_h = mk_bar + mk_tilde
        conflict = float(m.sum() * mk.sum() - m @ mk)
        scale = 1.0 - conflict
        if abs(scale) < _DEGENERATE_EPS:
            raise DegenerateAggregation("total conflict between combined sources")
        k_norm = 1.0 / scale
        m, m_tilde, m_bar = (
            k_norm * (m * mk + m * mk_h + m_h * mk),
            k_norm * (m_tilde * mk_tilde + m_tilde * mk_bar + m_bar * mk_tilde),
            k_norm * (m_bar * mk_bar),
        )
    denom = 1.0 - m_bar
    if abs(denom) < _DEGENERATE_EPS:
        raise DegenerateAggregation("normalisation denominator vanished; are all weights zero?")
    return np.clip(m / denom, 0.0, 1.0)


def expected_utility(
    dist: BeliefDistribution | Sequence[float],
    utilities: Sequence[float],
) -> float:
    """Crisp score of a belief distribution: sum of degree times grade utility.

    Unassigned mass contributes nothing, making this a pessimistic point
    estimate for incomplete distributions.
    """
    degrees = dist.degrees if isinstance(dist, BeliefDistribution) else tuple(dist)
    if len(degrees) != len(utilities):
        raise ValueError(f"{len(degrees)} degrees vs {len(utilities)} utilities")
    return float(sum(u * d for u, d in zip(utilities, degrees)))


@dataclass(frozen=True)
class InferenceResult:
    """Combined consequent distribution plus its crisp reading."""

    distribution: BeliefDistribution
    crisp: float
    unassigned_mass: float
    #: Crisp range if the unassigned mass resolved to the worst / best grade.
    utility_interval: tuple[float, float]


class CompiledRuleBase:
    """A rule base flattened into arrays for repeated evaluation.

    Validates once at construction and raises
    :class:`~beliefrules.errors.RuleBaseInvalid` on structural errors.
    """

    def __init__(self, rb: RuleBase):
        errors = [i for i in validate_rule_base(rb) if i.severity == "ERROR"]
        if errors:
            raise RuleBaseInvalid(errors)
        self.rulebase = rb
        self.packets = np.array([r.packet for r in rb.rules], dtype=np.intp)
        self.beliefs = np.array([r.consequent.degrees for r in rb.rules])
        self.theta = np.array([r.weight for r in rb.rules])
        self.delta_bar = normalized_attribute_weights([a.weight for a in rb.antecedents])
        self.n_grades = rb.consequent_scale.size

    def transform(self, raw_inputs: Sequence[InputValue]) -> list[BeliefDistribution]:
        if len(raw_inputs) != self.rulebase.attribute_count:
            raise ValueError(
                f"rule base '{self.rulebase.name}' has {self.rulebase.attribute_count} "
                f"antecedents, got {len(raw_inputs)} inputs"
            )
        return [
            transform_input(v, a.scale)
            for v, a in zip(raw_inputs, self.rulebase.antecedents)
        ]

    def matching_degrees(self, inputs: Sequence[BeliefDistribution]) -> np.ndarray:
        alpha = np.ones(len(self.theta))
        informative = False
        for i, dist in enumerate(inputs):
            if dist.mass == 0.0:
                continue
            informative = True
            col = np.asarray(dist.degrees)[self.packets[:, i]]
            alpha *= col if self.delta_bar[i] == 1.0 else col ** self.delta_bar[i]
        return alpha if informative else np.zeros(len(self.theta))

    def infer_transformed(self, inputs: Sequence[BeliefDistribution]) -> InferenceResult:
        alpha = self.matching_degrees(inputs)
        weighted = self.theta * alpha
        total = weighted.sum()
        if total <= 0.0:
            raise NoRuleActivated()
        omega = weighted / total
        factor = completeness_factor(inputs)
        updated = self.beliefs if factor == 1.0 else self.beliefs * factor
        beta = aggregate_analytical(omega, updated, self.n_grades)
        scale = self.rulebase.consequent_scale
        dist = BeliefDistribution(scale, tuple(float(x) for x in beta))
        crisp = expected_utility(dist, scale.output_utilities)
        leftover = max(0.0, 1.0 - dist.mass)
        lo = crisp + leftover * min(scale.output_utilities)
        hi = crisp + leftover * max(scale.output_utilities)
        return InferenceResult(
            distribution=dist,
            crisp=crisp,
            unassigned_mass=leftover,
            utility_interval=(lo, hi),
        )

    def infer(self, raw_inputs: Sequence[InputValue]) -> InferenceResult:
        return self.infer_transformed(self.transform(raw_inputs))


def infer(rb: RuleBase, raw_inputs: Sequence[InputValue]) -> InferenceResult:
    """Run the full single-rule-base pipeline on raw inputs."""
    return CompiledRuleBase(rb).infer(raw_inputs)
