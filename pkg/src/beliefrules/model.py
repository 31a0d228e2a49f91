"""Domain types for belief-rule bases.

A rule base maps packet antecedents (one referential grade per antecedent
attribute) to consequents expressed as belief distributions over a graded
scale. Everything here is an immutable value object: construction performs
the cheap per-field checks, while :func:`validate_rule_base` reports the
cross-rule invariants as issues instead of raising, so that editors and
loaders can surface all problems at once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Sequence, Union

from .errors import GenerationCapExceeded

#: Slack allowed on belief-mass sums before they count as "over 1".
MASS_TOL = 1e-6

#: A distribution is complete when its mass is within this band of 1.
COMPLETE_TOL = 1e-6

#: Default cap on combinatorial rule generation.
DEFAULT_GENERATION_CAP = 10**6


def _check_finite(values: Iterable[float], what: str) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{what} must be finite, got {v!r}")


@dataclass(frozen=True)
class ReferentialScale:
    """Ordered linguistic grades with numeric utility anchors.

    Grades are ordered ascending: index 0 is the lowest grade (e.g. Poor)
    and the anchors must increase strictly with the grade index. Output
    utilities default to the anchors.
    """

    name: str
    grades: tuple[str, ...]
    anchors: tuple[float, ...]
    output_utilities: tuple[float, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "grades", tuple(self.grades))
        object.__setattr__(self, "anchors", tuple(float(a) for a in self.anchors))
        if len(self.grades) < 2:
            raise ValueError(f"scale '{self.name}' needs at least 2 grades")
        if len(set(self.grades)) != len(self.grades):
            raise ValueError(f"scale '{self.name}' has duplicate grade labels")
        if len(self.anchors) != len(self.grades):
            raise ValueError(f"scale '{self.name}': {len(self.anchors)} anchors for {len(self.grades)} grades")
        _check_finite(self.anchors, "anchors")
        for lo, hi in zip(self.anchors, self.anchors[1:]):
            if not lo < hi:
                raise ValueError(f"scale '{self.name}': anchors must be strictly increasing")
        if self.output_utilities is None:
            object.__setattr__(self, "output_utilities", self.anchors)
        else:
            utilities = tuple(float(u) for u in self.output_utilities)
            if len(utilities) != len(self.grades):
                raise ValueError(f"scale '{self.name}': wrong number of output utilities")
            _check_finite(utilities, "output utilities")
            object.__setattr__(self, "output_utilities", utilities)

    @property
    def size(self) -> int:
        return len(self.grades)

    def index_of(self, label: str) -> int:
        try:
            return self.grades.index(label)
        except ValueError:
            raise KeyError(f"scale '{self.name}' has no grade {label!r}") from None


@dataclass(frozen=True)
class BeliefDistribution:
    """Degrees of belief assigned to the grades of one scale.

    The mass (sum of degrees) may fall short of 1; the shortfall is
    unassigned belief (ignorance). Mass above 1 + MASS_TOL is rejected.
    """

    scale: ReferentialScale
    degrees: tuple[float, ...]

    def __post_init__(self):
        degrees = tuple(float(d) for d in self.degrees)
        if len(degrees) != self.scale.size:
            raise ValueError(f"{len(degrees)} degrees for {self.scale.size} grades")
        for d in degrees:
            if not math.isfinite(d) or d < 0.0 or d > 1.0 + MASS_TOL:
                raise ValueError(f"belief degree out of [0, 1]: {d!r}")
        if sum(degrees) > 1.0 + MASS_TOL:
            raise ValueError(f"belief mass {sum(degrees)} exceeds 1")
        object.__setattr__(self, "degrees", degrees)

    @property
    def mass(self) -> float:
        """Total assigned belief; 1 - mass is ignorance."""
        return sum(self.degrees)

    @property
    def is_complete(self) -> bool:
        return abs(self.mass - 1.0) <= COMPLETE_TOL

    def as_dict(self, skip_zero: bool = True) -> dict[str, float]:
        return {
            g: d
            for g, d in zip(self.scale.grades, self.degrees)
            if d != 0.0 or not skip_zero
        }

    @classmethod
    def from_dict(cls, scale: ReferentialScale, by_label: dict[str, float]) -> "BeliefDistribution":
        degrees = [0.0] * scale.size
        for label, degree in by_label.items():
            degrees[scale.index_of(label)] = float(degree)
        return cls(scale, tuple(degrees))


@dataclass(frozen=True)
class AntecedentAttribute:
    """A named input variable, its grading scale, and its relative weight."""

    name: str
    scale: ReferentialScale
    weight: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.weight) and self.weight > 0):
            raise ValueError(f"attribute '{self.name}': weight must be > 0, got {self.weight!r}")


@dataclass(frozen=True)
class BeliefRule:
    """One belief rule: a packet antecedent plus a consequent distribution.

    ``packet`` holds one 0-based grade index per antecedent attribute.
    An incomplete consequent (mass < 1) is allowed and flagged by
    :func:`validate_rule_base` as a warning.
    """

    id: str
    packet: tuple[int, ...]
    consequent: BeliefDistribution
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "packet", tuple(int(i) for i in self.packet))
        if not (math.isfinite(self.weight) and self.weight > 0):
            raise ValueError(f"rule '{self.id}': rule weight must be > 0, got {self.weight!r}")


@dataclass(frozen=True)
class RuleBase:
    """An ordered collection of belief rules over a fixed antecedent list."""

    name: str
    antecedents: tuple[AntecedentAttribute, ...]
    consequent_scale: ReferentialScale
    rules: tuple[BeliefRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def attribute_count(self) -> int:
        return len(self.antecedents)

    @property
    def rule_count(self) -> int:
        return len(self.rules)


Severity = Literal["ERROR", "WARN"]


@dataclass(frozen=True)
class ValidationIssue:
    severity: Severity
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity} {self.location}: {self.message}"


def validate_rule_base(rb: RuleBase) -> list[ValidationIssue]:
    """Check cross-rule invariants; an empty list means the base is valid.

    Structural breaches are ERROR issues; incomplete consequents are WARN.
    """
    issues: list[ValidationIssue] = []
    t = rb.attribute_count

    if t == 0:
        issues.append(ValidationIssue("ERROR", rb.name, "rule base has no antecedent attributes"))
    if rb.rule_count == 0:
        issues.append(ValidationIssue("ERROR", rb.name, "rule base has no rules"))

    names = [a.name for a in rb.antecedents]
    if len(set(names)) != len(names):
        issues.append(ValidationIssue("ERROR", rb.name, "duplicate antecedent attribute names"))

    seen: dict[tuple[int, ...], str] = {}
    for pos, rule in enumerate(rb.rules):
        loc = f"rules[{pos}] ({rule.id})"
        if len(rule.packet) != t:
            issues.append(
                ValidationIssue("ERROR", loc, f"packet binds {len(rule.packet)} antecedents, rule base has {t}")
            )
            continue
        for i, g in enumerate(rule.packet):
            size = rb.antecedents[i].scale.size
            if not 0 <= g < size:
                issues.append(
                    ValidationIssue("ERROR", loc, f"grade index {g} out of range for '{names[i]}' (size {size})")
                )
        if rule.packet in seen:
            issues.append(
                ValidationIssue("ERROR", loc, f"duplicate packet antecedent (same as rule {seen[rule.packet]})")
            )
        else:
            seen[rule.packet] = rule.id
        if rule.consequent.scale != rb.consequent_scale:
            issues.append(ValidationIssue("ERROR", loc, "consequent is over a different scale than the rule base"))
        elif not rule.consequent.is_complete:
            issues.append(
                ValidationIssue("WARN", loc, f"incomplete rule, Σβ = {rule.consequent.mass:g}")
            )
    return issues


FillPolicy = Literal["uniform", "diagonal", "blank"]


def _diagonal_consequent(packet: tuple[int, ...], n_grades: int) -> list[float]:
    # belief 1 on the grade closest to the mean antecedent grade (half rounds up)
    mean_grade = sum(g + 1 for g in packet) / len(packet)
    idx = int(math.floor(mean_grade + 0.5)) - 1
    idx = min(max(idx, 0), n_grades - 1)
    degrees = [0.0] * n_grades
    degrees[idx] = 1.0
    return degrees


def generate_complete_rule_base(
    antecedents: Sequence[AntecedentAttribute],
    consequent_scale: ReferentialScale,
    fill_policy: FillPolicy = "uniform",
    name: str = "generated",
    cap: int = DEFAULT_GENERATION_CAP,
) -> RuleBase:
    """Build one rule per grade combination, ordered lexicographically.

    Fill policies: ``uniform`` spreads belief equally over the consequent
    grades, ``diagonal`` puts full belief on the grade matching the rounded
    mean antecedent grade, ``blank`` leaves all consequents empty for
    expert editing.
    """
    antecedents = tuple(antecedents)
    if not antecedents:
        raise ValueError("need at least one antecedent attribute")
    if fill_policy not in ("uniform", "diagonal", "blank"):
        raise ValueError(f"unknown fill policy {fill_policy!r}")

    count = math.prod(a.scale.size for a in antecedents)
    if count > cap:
        raise GenerationCapExceeded(count, cap)

    n = consequent_scale.size
    width = len(str(count - 1))
    uniform = tuple(1.0 / n for _ in range(n))
    blank = tuple(0.0 for _ in range(n))

    rules = []
    ranges = [range(a.scale.size) for a in antecedents]
    for k, packet in enumerate(itertools.product(*ranges)):
        if fill_policy == "uniform":
            degrees = uniform
        elif fill_policy == "blank":
            degrees = blank
        else:
            degrees = tuple(_diagonal_consequent(packet, n))
        rules.append(
            BeliefRule(
                id=f"r{k:0{width}d}",
                packet=packet,
                consequent=BeliefDistribution(consequent_scale, degrees),
            )
        )
    return RuleBase(name=name, antecedents=antecedents, consequent_scale=consequent_scale, rules=tuple(rules))


# ---------------------------------------------------------------------------
# Evaluation frameworks: trees of rule-base nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeafNode:
    """An externally assessed variable; inputs are transformed over its scale."""

    name: str
    scale: ReferentialScale


@dataclass(frozen=True)
class InternalNode:
    """A rule-base node whose antecedents correspond 1:1, in order, to its children.

    Child weights live on the rule base's antecedent attributes.
    """

    name: str
    rulebase: RuleBase
    children: tuple["FrameworkNode", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


FrameworkNode = Union[LeafNode, InternalNode]


@dataclass(frozen=True)
class EvaluationFramework:
    """A single-rooted tree of rule-base nodes over externally assessed leaves."""

    name: str
    root: InternalNode

    def walk(self) -> Iterator[FrameworkNode]:
        """Yield nodes depth-first, parent before children."""
        stack: list[FrameworkNode] = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, InternalNode):
                stack.extend(reversed(node.children))

    def leaves(self) -> list[LeafNode]:
        return [n for n in self.walk() if isinstance(n, LeafNode)]

    def internal_nodes(self) -> list[InternalNode]:
        return [n for n in self.walk() if isinstance(n, InternalNode)]

    def node(self, name: str) -> FrameworkNode:
        for n in self.walk():
            if n.name == name:
                return n
        from .errors import UnknownNode

        raise UnknownNode(f"framework has no node named {name!r}")


def validate_framework(fw: EvaluationFramework) -> list[ValidationIssue]:
    """Arity, naming and scale-consistency checks over the whole tree."""
    issues: list[ValidationIssue] = []
    seen: set[str] = set()
    for node in fw.walk():
        if node.name in seen:
            issues.append(ValidationIssue("ERROR", node.name, "duplicate node name in framework"))
        seen.add(node.name)
        if not isinstance(node, InternalNode):
            continue
        rb = node.rulebase
        if rb.attribute_count != len(node.children):
            issues.append(
                ValidationIssue(
                    "ERROR",
                    node.name,
                    f"rule base has {rb.attribute_count} antecedents for {len(node.children)} children",
                )
            )
            continue
        for attr, child in zip(rb.antecedents, node.children):
            child_scale = child.scale if isinstance(child, LeafNode) else child.rulebase.consequent_scale
            if attr.scale != child_scale:
                issues.append(
                    ValidationIssue(
                        "ERROR",
                        node.name,
                        f"antecedent '{attr.name}' scale differs from child '{child.name}' scale",
                    )
                )
        issues.extend(
            ValidationIssue(i.severity, f"{node.name}: {i.location}", i.message)
            for i in validate_rule_base(rb)
            if i.severity == "ERROR"
        )
    return issues
