"""Belief-rule-base decision engine with evidential-reasoning aggregation.

The package models IF-THEN rules whose consequents are belief distributions
over graded scales, activates them against crisp, distributed, or missing
inputs, and combines the activated evidence analytically. Rule bases can be
stacked into hierarchical evaluation frameworks, compared against a mean
baseline on survey data via ROC analysis, and served over HTTP.
"""

from .errors import (
    BeliefRulesError,
    DegenerateAggregation,
    DegenerateLabels,
    DocumentError,
    GenerationCapExceeded,
    InputsError,
    NoRuleActivated,
    RuleBaseInvalid,
    ScaleMismatch,
    UnknownNode,
)
from .hierarchy import (
    FrameworkEvaluator,
    NodeResult,
    Scenario,
    ScenarioOutcome,
    WhatIfReport,
    evaluate_tree,
    result_from_dict,
    set_weights,
    what_if,
)
from .inference import (
    ActivationRecord,
    CompiledRuleBase,
    InferenceResult,
    activation_records,
    activation_weights,
    aggregate_analytical,
    aggregate_recursive,
    expected_utility,
    infer,
    matching_degree,
    update_beliefs,
)
from .model import (
    AntecedentAttribute,
    BeliefDistribution,
    BeliefRule,
    EvaluationFramework,
    InternalNode,
    LeafNode,
    ReferentialScale,
    RuleBase,
    ValidationIssue,
    generate_complete_rule_base,
    validate_framework,
    validate_rule_base,
)
from .storage import (
    load_default_framework,
    load_framework,
    load_inputs,
    load_rule_base,
    load_scenarios,
    parse_framework,
    parse_rule_base,
    save_framework,
    save_rule_base,
    store_framework,
    store_rule_base,
)
from .transform import MISSING, InputValue, missing_distribution, transform_crisp, transform_input
from .validation import (
    ComparisonReport,
    RocCurve,
    SurveyRecord,
    auc_trapezoid,
    compare,
    concordance_auc,
    load_survey,
    lrf_score,
    parse_survey,
    roc_points,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationRecord",
    "AntecedentAttribute",
    "BeliefDistribution",
    "BeliefRule",
    "BeliefRulesError",
    "ComparisonReport",
    "CompiledRuleBase",
    "DegenerateAggregation",
    "DegenerateLabels",
    "DocumentError",
    "EvaluationFramework",
    "FrameworkEvaluator",
    "GenerationCapExceeded",
    "InferenceResult",
    "InputValue",
    "InputsError",
    "InternalNode",
    "LeafNode",
    "MISSING",
    "NoRuleActivated",
    "NodeResult",
    "ReferentialScale",
    "RocCurve",
    "RuleBase",
    "RuleBaseInvalid",
    "ScaleMismatch",
    "Scenario",
    "ScenarioOutcome",
    "SurveyRecord",
    "UnknownNode",
    "ValidationIssue",
    "WhatIfReport",
    "activation_records",
    "activation_weights",
    "aggregate_analytical",
    "aggregate_recursive",
    "auc_trapezoid",
    "compare",
    "concordance_auc",
    "evaluate_tree",
    "expected_utility",
    "generate_complete_rule_base",
    "infer",
    "load_default_framework",
    "load_framework",
    "load_inputs",
    "load_rule_base",
    "load_scenarios",
    "load_survey",
    "lrf_score",
    "matching_degree",
    "missing_distribution",
    "parse_framework",
    "parse_rule_base",
    "parse_survey",
    "result_from_dict",
    "roc_points",
    "save_framework",
    "save_rule_base",
    "set_weights",
    "store_framework",
    "store_rule_base",
    "transform_crisp",
    "transform_input",
    "update_beliefs",
    "validate_framework",
    "validate_rule_base",
    "what_if",
]
