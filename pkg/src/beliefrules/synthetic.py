"""Seeded synthetic survey with ground truth planted in a framework.

The planted framework is the bundled assessment tree with one change: the
root rule base weights its three branches 4:1:1 instead of equally, both in
the antecedent weights and in the rule consequents (each consequent grade is
the weighted mean of the antecedent grades, split between the two nearest
grades). The overall score is therefore dominated by the determinants
branch.

Each leaf group draws its own latent level per respondent; leaves are that
level plus noise. The ground-truth label thresholds the planted framework's
root score on the complete data at the median. A fixed number of answers per
respondent are then blanked (recorded as 0), all of them outside the
determinants section: respondents always finish the core section and skip
questions in the later ones. No group is ever blanked completely, since a
node with no informative input at all cannot activate any rule.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from typing import Mapping

import numpy as np

from .hierarchy import FrameworkEvaluator
from .model import EvaluationFramework, LeafNode
from .storage import framework_from_doc, packaged_framework_text

DEFAULT_SEED = 20240611
N_RECORDS = 300
NOISE_SD = 0.8
LATENT_RANGE = (2.5, 9.5)

#: Root branch weights planted into the synthetic framework.
ROOT_WEIGHTS = (4.0, 1.0, 1.0)

#: Unanswered questions per respondent, by leaf-group node: 6 of 21 answers
#: (29%) are blank, none of them under ``determinants``.
MISSING_PER_GROUP: Mapping[str, int] = {
    "user_environment": 1,
    "resource_management": 2,
    "authentication_protocol": 1,
    "result_analysis": 1,
    "result_specification": 1,
}


def _weighted_rules(grades: list[str], weights: tuple[float, ...]) -> list[dict]:
    """Complete rule docs with consequent = weighted mean of antecedent grades.

    A fractional mean splits its belief between the two bracketing grades, so
    the consequent moves smoothly rather than in whole-grade steps.
    """
    share = [w / sum(weights) for w in weights]
    packets = list(itertools.product(range(len(grades)), repeat=len(weights)))
    width = len(str(len(packets) - 1))
    rules = []
    for k, packet in enumerate(packets):
        # snap means that are integral up to FP error, so single-grade
        # consequents serialize without epsilon-sized residue beliefs
        mean = round(sum(s * g for s, g in zip(share, packet)), 12)
        low = min(int(math.floor(mean)), len(grades) - 2)
        frac = mean - low
        then = {grades[low]: 1.0 - frac} if frac < 1.0 else {}
        if frac > 0.0:
            then[grades[low + 1]] = frac
        rules.append(
            {
                "id": f"r{k:0{width}d}",
                "weight": 1.0,
                "if": [grades[g] for g in packet],
                "then": then,
            }
        )
    return rules


def synthetic_framework_doc() -> dict:
    """The planted framework as a storable document."""
    doc = json.loads(packaged_framework_text())
    doc["name"] = "egov_synthetic"
    root = doc["nodes"]
    grades = doc["scales"][root["scale"]]["grades"]
    root["weights"] = list(ROOT_WEIGHTS)
    root["rulebase"] = {"rules": _weighted_rules(grades, ROOT_WEIGHTS)}
    return doc


def synthetic_framework() -> EvaluationFramework:
    return framework_from_doc(synthetic_framework_doc())


def _leaf_groups(fw: EvaluationFramework) -> dict[str, list[int]]:
    """Column indices of each node whose children are all leaves."""
    order = {name: i for i, name in enumerate(leaf.name for leaf in fw.leaves())}
    groups: dict[str, list[int]] = {}
    for node in fw.internal_nodes():
        if all(isinstance(c, LeafNode) for c in node.children):
            groups[node.name] = [order[c.name] for c in node.children]
    return groups


def generate_survey(
    fw: EvaluationFramework,
    n_records: int = N_RECORDS,
    seed: int = DEFAULT_SEED,
    noise: float = NOISE_SD,
    missing_per_group: Mapping[str, int] | None = None,
) -> str:
    """CSV text: id column, one column per leaf, binary label column."""
    evaluator = FrameworkEvaluator(fw)
    leaves = evaluator.leaf_names
    groups = _leaf_groups(fw)
    missing = dict(MISSING_PER_GROUP if missing_per_group is None else missing_per_group)

    unknown = sorted(set(missing) - set(groups))
    if unknown:
        raise ValueError(f"missing_per_group names unknown groups: {', '.join(unknown)}")
    for name, k in missing.items():
        if not 0 <= k < len(groups[name]):
            raise ValueError(
                f"group '{name}' has {len(groups[name])} leaves; cannot blank {k} of them"
            )

    rng = np.random.default_rng(seed)
    values = np.zeros((n_records, len(leaves)))
    for cols in groups.values():
        level = rng.uniform(*LATENT_RANGE, size=n_records)
        values[:, cols] = level[:, None]
    values = np.round(np.clip(values + rng.normal(0.0, noise, values.shape), 0.5, 10.0), 2)

    crisp = np.array(
        [evaluator.evaluate(dict(zip(leaves, row))).crisp for row in values.tolist()]
    )
    labels = (crisp > float(np.median(crisp))).astype(int)

    masks = np.zeros((n_records, len(leaves)), dtype=bool)
    for r in range(n_records):
        for name, k in missing.items():
            if k:
                masks[r, rng.choice(groups[name], size=k, replace=False)] = True

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", *leaves, "label"])
    for r in range(n_records):
        cells = ["0" if masks[r, i] else f"{values[r, i]:g}" for i in range(len(leaves))]
        writer.writerow([str(r + 1), *cells, str(labels[r])])
    return out.getvalue()
