"""JSON persistence for rule bases, frameworks, inputs, and scenarios.

Documents are validated against the schema files shipped under
``beliefrules/schemas``. Serialization is canonical: fixed key order,
two-space indent, scale registry sorted by name, trailing newline. Storing
the same value twice therefore yields byte-identical text, and
``parse(store(x)) == x`` for any valid value.

Rule consequents whose degrees sum to slightly more than 1 (printing or
rounding artifacts, up to 1.01) can be rescaled to sum 1 by setting
``"renormalize": true`` in the document; larger sums are always rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

import jsonschema

from .errors import DocumentError, InputsError, RuleBaseInvalid
from .hierarchy import Scenario
from .model import (
    MASS_TOL,
    AntecedentAttribute,
    BeliefDistribution,
    BeliefRule,
    EvaluationFramework,
    FrameworkNode,
    InternalNode,
    LeafNode,
    ReferentialScale,
    RuleBase,
    generate_complete_rule_base,
    validate_framework,
    validate_rule_base,
)
from .transform import MISSING, InputValue

#: Consequent sums above 1 are renormalizable only up to this bound.
RENORMALIZE_MAX = 1.01

_SCHEMA_CACHE: dict[str, dict] = {}


def _schema(name: str) -> dict:
    if name not in _SCHEMA_CACHE:
        text = resources.files("beliefrules.schemas").joinpath(name).read_text("utf-8")
        _SCHEMA_CACHE[name] = json.loads(text)
    return _SCHEMA_CACHE[name]


def _check_schema(doc: Any, schema_name: str) -> None:
    validator = jsonschema.Draft7Validator(_schema(schema_name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "document root"
        raise DocumentError(f"schema violation at {where}: {first.message}")


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None


def canonical_json(doc: Any) -> str:
    """Deterministic JSON text: 2-space indent, insertion order, newline at end."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Scales
# ---------------------------------------------------------------------------


def _parse_scale(name: str, sdoc: Mapping[str, Any]) -> ReferentialScale:
    grades = list(sdoc["grades"])
    anchors = [float(a) for a in sdoc["anchors"]]
    utilities = [float(u) for u in sdoc.get("utilities", anchors)]
    if len(anchors) != len(grades):
        raise DocumentError(f"scale '{name}': {len(anchors)} anchors for {len(grades)} grades")
    if len(utilities) != len(grades):
        raise DocumentError(f"scale '{name}': {len(utilities)} utilities for {len(grades)} grades")
    # grade index must run in ascending anchor order; reorder if the document doesn't
    order = sorted(range(len(grades)), key=lambda i: anchors[i])
    if order != list(range(len(grades))):
        grades = [grades[i] for i in order]
        utilities = [utilities[i] for i in order]
        anchors = sorted(anchors)
    try:
        return ReferentialScale(name=name, grades=tuple(grades), anchors=tuple(anchors), output_utilities=tuple(utilities))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _parse_scales(doc: Mapping[str, Any]) -> dict[str, ReferentialScale]:
    return {name: _parse_scale(name, sdoc) for name, sdoc in doc.get("scales", {}).items()}


def _lookup_scale(scales: Mapping[str, ReferentialScale], name: str, where: str) -> ReferentialScale:
    try:
        return scales[name]
    except KeyError:
        raise DocumentError(f"{where} references undeclared scale '{name}'") from None


def _scale_to_doc(scale: ReferentialScale) -> dict:
    doc: dict = {"grades": list(scale.grades), "anchors": list(scale.anchors)}
    if scale.output_utilities != scale.anchors:
        doc["utilities"] = list(scale.output_utilities)
    return doc


def _collect_scales(scales: Sequence[ReferentialScale]) -> dict[str, ReferentialScale]:
    registry: dict[str, ReferentialScale] = {}
    for scale in scales:
        if scale.name in registry and registry[scale.name] != scale:
            raise ValueError(f"two different scales share the name '{scale.name}'")
        registry[scale.name] = scale
    return dict(sorted(registry.items()))


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------


def _rule_from_doc(
    rdoc: Mapping[str, Any],
    pos: int,
    antecedents: Sequence[AntecedentAttribute],
    consequent_scale: ReferentialScale,
    renormalize: bool,
) -> BeliefRule:
    rid = rdoc.get("id", f"r{pos + 1}")
    labels = rdoc["if"]
    if len(labels) != len(antecedents):
        raise DocumentError(
            f"rule '{rid}': 'if' binds {len(labels)} antecedents, rule base has {len(antecedents)}"
        )
    packet = []
    for attr, label in zip(antecedents, labels):
        try:
            packet.append(attr.scale.index_of(label))
        except KeyError:
            raise DocumentError(
                f"rule '{rid}': antecedent '{attr.name}' has no grade {label!r} on scale '{attr.scale.name}'"
            ) from None

    degrees = [0.0] * consequent_scale.size
    for label, degree in rdoc["then"].items():
        try:
            degrees[consequent_scale.index_of(label)] = float(degree)
        except KeyError:
            raise DocumentError(
                f"rule '{rid}': consequent scale '{consequent_scale.name}' has no grade {label!r}"
            ) from None
    total = sum(degrees)
    if total > RENORMALIZE_MAX + 1e-12:
        raise DocumentError(
            f"rule '{rid}': consequent degrees sum to {total:g}, above the renormalizable limit {RENORMALIZE_MAX}"
        )
    if renormalize and total > 1.0:
        degrees = [d / total for d in degrees]
    elif total > 1.0 + MASS_TOL:
        raise DocumentError(
            f"rule '{rid}': consequent degrees sum to {total:g} > 1; set \"renormalize\": true to rescale"
        )
    try:
        return BeliefRule(
            id=str(rid),
            packet=tuple(packet),
            consequent=BeliefDistribution(consequent_scale, tuple(degrees)),
            weight=float(rdoc.get("weight", 1.0)),
        )
    except ValueError as exc:
        raise DocumentError(f"rule '{rid}': {exc}") from None


def _rule_to_doc(rule: BeliefRule, antecedents: Sequence[AntecedentAttribute]) -> dict:
    return {
        "id": rule.id,
        "weight": float(rule.weight),
        "if": [attr.scale.grades[g] for attr, g in zip(antecedents, rule.packet)],
        "then": rule.consequent.as_dict(skip_zero=True),
    }


def _parse_attributes(doc: Mapping[str, Any], scales: Mapping[str, ReferentialScale]) -> tuple[AntecedentAttribute, ...]:
    attrs = []
    for adoc in doc["attributes"]:
        scale = _lookup_scale(scales, adoc["scale"], f"attribute '{adoc['name']}'")
        try:
            attrs.append(AntecedentAttribute(name=adoc["name"], scale=scale, weight=float(adoc.get("weight", 1.0))))
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    return tuple(attrs)


# ---------------------------------------------------------------------------
# Rule bases
# ---------------------------------------------------------------------------


def rule_base_from_doc(
    doc: Mapping[str, Any], renormalize: bool | None = None, check: bool = True
) -> RuleBase:
    """Build a rule base from a parsed document.

    With ``check`` (the default), structural validation errors raise; pass
    ``check=False`` to get the object and run validation separately, as the
    ``validate`` command does to list every issue.
    """
    _check_schema(doc, "rulebase.schema.json")
    scales = _parse_scales(doc)
    renorm = bool(doc.get("renormalize", False)) if renormalize is None else renormalize
    antecedents = _parse_attributes(doc, scales)
    consequent_scale = _lookup_scale(scales, doc["consequent_scale"], "consequent_scale")

    if "rules" in doc:
        rules = tuple(
            _rule_from_doc(rdoc, pos, antecedents, consequent_scale, renorm)
            for pos, rdoc in enumerate(doc["rules"])
        )
        rb = RuleBase(
            name=doc.get("name", "rulebase"),
            antecedents=antecedents,
            consequent_scale=consequent_scale,
            rules=rules,
        )
    elif "generate" in doc:
        rb = generate_complete_rule_base(
            antecedents,
            consequent_scale,
            fill_policy=doc["generate"]["fill"],
            name=doc.get("name", "generated"),
        )
    else:
        raise DocumentError("document has neither 'rules' nor a 'generate' directive")

    if check:
        errors = [i for i in validate_rule_base(rb) if i.severity == "ERROR"]
        if errors:
            raise RuleBaseInvalid(errors)
    return rb


def parse_rule_base(text: str, renormalize: bool | None = None, check: bool = True) -> RuleBase:
    return rule_base_from_doc(_loads(text), renormalize=renormalize, check=check)


def load_rule_base(path: str | Path, renormalize: bool | None = None, check: bool = True) -> RuleBase:
    return parse_rule_base(Path(path).read_text("utf-8"), renormalize=renormalize, check=check)


@dataclass(frozen=True)
class GenerationSpec:
    """Header of a rule-base document without rules: the seed for generation."""

    name: str
    antecedents: tuple[AntecedentAttribute, ...]
    consequent_scale: ReferentialScale


def load_generation_spec(path: str | Path) -> GenerationSpec:
    doc = _loads(Path(path).read_text("utf-8"))
    _check_schema(doc, "rulebase.schema.json")
    if "rules" in doc:
        raise DocumentError("document already contains rules; generation would discard them")
    scales = _parse_scales(doc)
    antecedents = _parse_attributes(doc, scales)
    consequent_scale = _lookup_scale(scales, doc["consequent_scale"], "consequent_scale")
    return GenerationSpec(
        name=doc.get("name", "generated"),
        antecedents=antecedents,
        consequent_scale=consequent_scale,
    )


def rule_base_to_doc(rb: RuleBase) -> dict:
    scales = _collect_scales([a.scale for a in rb.antecedents] + [rb.consequent_scale])
    return {
        "name": rb.name,
        "scales": {name: _scale_to_doc(scale) for name, scale in scales.items()},
        "attributes": [
            {"name": a.name, "scale": a.scale.name, "weight": float(a.weight)} for a in rb.antecedents
        ],
        "consequent_scale": rb.consequent_scale.name,
        "rules": [_rule_to_doc(rule, rb.antecedents) for rule in rb.rules],
    }


def store_rule_base(rb: RuleBase) -> str:
    """Canonical document text; stable byte-for-byte across runs."""
    return canonical_json(rule_base_to_doc(rb))


def save_rule_base(rb: RuleBase, path: str | Path) -> None:
    Path(path).write_text(store_rule_base(rb), "utf-8")


# ---------------------------------------------------------------------------
# Frameworks
# ---------------------------------------------------------------------------


def _child_scale(child: FrameworkNode) -> ReferentialScale:
    return child.scale if isinstance(child, LeafNode) else child.rulebase.consequent_scale


def framework_from_doc(
    doc: Mapping[str, Any], renormalize: bool | None = None, check: bool = True
) -> EvaluationFramework:
    _check_schema(doc, "framework.schema.json")
    scales = _parse_scales(doc)
    renorm = bool(doc.get("renormalize", False)) if renormalize is None else renormalize

    def build(ndoc: Mapping[str, Any]) -> FrameworkNode:
        name = ndoc["name"]
        scale = _lookup_scale(scales, ndoc["scale"], f"node '{name}'")
        children_docs = ndoc.get("children")
        if not children_docs:
            if "rulebase" in ndoc or "weights" in ndoc:
                raise DocumentError(f"leaf node '{name}' cannot carry a rulebase or weights")
            return LeafNode(name=name, scale=scale)

        children = tuple(build(c) for c in children_docs)
        weights = ndoc.get("weights", [1.0] * len(children))
        if len(weights) != len(children):
            raise DocumentError(f"node '{name}': {len(weights)} weights for {len(children)} children")
        try:
            antecedents = tuple(
                AntecedentAttribute(name=child.name, scale=_child_scale(child), weight=float(w))
                for child, w in zip(children, weights)
            )
        except ValueError as exc:
            raise DocumentError(f"node '{name}': {exc}") from None

        rbdoc = ndoc.get("rulebase")
        if rbdoc is None:
            raise DocumentError(f"internal node '{name}' needs a rulebase")
        if "generate" in rbdoc:
            rb = generate_complete_rule_base(
                antecedents, scale, fill_policy=rbdoc["generate"]["fill"], name=name
            )
        else:
            rules = tuple(
                _rule_from_doc(rdoc, pos, antecedents, scale, renorm)
                for pos, rdoc in enumerate(rbdoc["rules"])
            )
            rb = RuleBase(name=name, antecedents=antecedents, consequent_scale=scale, rules=rules)
        return InternalNode(name=name, rulebase=rb, children=children)

    root = build(doc["nodes"])
    if not isinstance(root, InternalNode):
        raise DocumentError("framework root must have children")
    fw = EvaluationFramework(name=doc.get("name", "framework"), root=root)
    if check:
        errors = [i for i in validate_framework(fw) if i.severity == "ERROR"]
        if errors:
            raise RuleBaseInvalid(errors)
    return fw


def parse_framework(text: str, renormalize: bool | None = None, check: bool = True) -> EvaluationFramework:
    return framework_from_doc(_loads(text), renormalize=renormalize, check=check)


def load_framework(path: str | Path, renormalize: bool | None = None, check: bool = True) -> EvaluationFramework:
    return parse_framework(Path(path).read_text("utf-8"), renormalize=renormalize, check=check)


def packaged_framework_text() -> str:
    """The bundled default assessment framework document."""
    return resources.files("beliefrules.data").joinpath("egov_framework.json").read_text("utf-8")


def load_default_framework() -> EvaluationFramework:
    return parse_framework(packaged_framework_text())


def framework_to_doc(fw: EvaluationFramework) -> dict:
    """Serialize with rules fully expanded; generate directives are not kept."""
    all_scales: list[ReferentialScale] = []
    for node in fw.walk():
        if isinstance(node, LeafNode):
            all_scales.append(node.scale)
        else:
            all_scales.append(node.rulebase.consequent_scale)
            all_scales.extend(a.scale for a in node.rulebase.antecedents)
    scales = _collect_scales(all_scales)

    def node_doc(node: FrameworkNode) -> dict:
        if isinstance(node, LeafNode):
            return {"name": node.name, "scale": node.scale.name}
        rb = node.rulebase
        return {
            "name": node.name,
            "scale": rb.consequent_scale.name,
            "weights": [float(a.weight) for a in rb.antecedents],
            "rulebase": {"rules": [_rule_to_doc(rule, rb.antecedents) for rule in rb.rules]},
            "children": [node_doc(c) for c in node.children],
        }

    return {
        "name": fw.name,
        "scales": {name: _scale_to_doc(scale) for name, scale in scales.items()},
        "nodes": node_doc(fw.root),
    }


def store_framework(fw: EvaluationFramework) -> str:
    return canonical_json(framework_to_doc(fw))


def save_framework(fw: EvaluationFramework, path: str | Path) -> None:
    Path(path).write_text(store_framework(fw), "utf-8")


# ---------------------------------------------------------------------------
# Inputs and scenarios
# ---------------------------------------------------------------------------


def parse_inputs(text: str) -> dict[str, Any]:
    """Raw leaf→value map; values resolve against leaf scales later."""
    doc = _loads(text)
    _check_schema(doc, "inputs.schema.json")
    if "inputs" not in doc:
        raise DocumentError("expected an inputs document with a top-level 'inputs' map")
    return dict(doc["inputs"])


def load_inputs(path: str | Path) -> dict[str, Any]:
    return parse_inputs(Path(path).read_text("utf-8"))


def parse_scenarios(text: str) -> list[tuple[str, dict[str, Any]]]:
    """Raw (name, overrides) pairs from a scenario document (single or list)."""
    doc = _loads(text)
    _check_schema(doc, "inputs.schema.json")
    if "scenarios" in doc:
        return [(s["name"], dict(s["overrides"])) for s in doc["scenarios"]]
    if "name" in doc and "overrides" in doc:
        return [(doc["name"], dict(doc["overrides"]))]
    raise DocumentError("expected a scenario document ('name'+'overrides' or 'scenarios' list)")


def load_scenarios(path: str | Path) -> list[tuple[str, dict[str, Any]]]:
    return parse_scenarios(Path(path).read_text("utf-8"))


def resolve_input_value(raw: Any, scale: ReferentialScale) -> InputValue:
    """Turn one JSON input value into an InputValue over ``scale``.

    Numbers stay crisp, ``null`` or ``"missing"`` mean no answer, and a
    grade→degree map becomes a belief distribution.
    """
    if raw is None:
        return MISSING
    if isinstance(raw, str):
        if raw.strip().lower() == "missing":
            return MISSING
        raise DocumentError(f"cannot read input value {raw!r}; use a number, \"missing\", or a grade map")
    if isinstance(raw, bool):
        raise DocumentError(f"cannot read input value {raw!r}; use a number, \"missing\", or a grade map")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, Mapping):
        try:
            return BeliefDistribution.from_dict(scale, {str(k): float(v) for k, v in raw.items()})
        except (KeyError, ValueError) as exc:
            raise DocumentError(f"bad belief map for scale '{scale.name}': {exc}") from None
    raise DocumentError(f"cannot read input value of type {type(raw).__name__}")


def resolve_inputs(raw_map: Mapping[str, Any], fw: EvaluationFramework) -> dict[str, InputValue]:
    """Resolve a raw leaf→value map against the framework's leaf scales."""
    leaf_scales = {leaf.name: leaf.scale for leaf in fw.leaves()}
    unknown = sorted(set(raw_map) - set(leaf_scales))
    if unknown:
        raise InputsError(f"unknown leaves in inputs: {', '.join(unknown)}")
    return {name: resolve_input_value(raw, leaf_scales[name]) for name, raw in raw_map.items()}


def resolve_scenarios(
    raw_scenarios: Sequence[tuple[str, Mapping[str, Any]]], fw: EvaluationFramework
) -> list[Scenario]:
    """Resolve scenario overrides; unknown leaf names are kept so the
    what-if runner can report them as per-scenario errors."""
    leaf_scales = {leaf.name: leaf.scale for leaf in fw.leaves()}
    out = []
    for name, overrides in raw_scenarios:
        resolved: dict[str, InputValue] = {}
        for leaf, raw in overrides.items():
            if leaf in leaf_scales:
                resolved[leaf] = resolve_input_value(raw, leaf_scales[leaf])
            else:
                resolved[leaf] = MISSING
        out.append(Scenario(name=name, overrides=resolved))
    return out
