"""Survey ingestion, baseline scoring, ROC curves, and engine-vs-baseline reports.

The baseline scorer ("LRF") is a plain arithmetic mean over the raw survey
values with missing answers counted as zero. It has no mechanism for
partial information, which is exactly the weakness the rule engine's
ignorance handling is meant to expose, so no imputation is applied.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateLabels, DocumentError, InputsError
from .hierarchy import FrameworkEvaluator, NodeResult
from .model import EvaluationFramework, InternalNode, LeafNode
from .transform import MISSING, InputValue


@dataclass(frozen=True)
class SurveyRecord:
    """One respondent: raw per-variable values (MISSING for no answer) and
    a binary ground-truth perception label."""

    id: str
    values: Mapping[str, InputValue]
    label: int

    def raw(self, variable: str) -> float:
        """The value as recorded in the survey, with missing read as 0."""
        v = self.values[variable]
        return 0.0 if v is MISSING else float(v)


def parse_survey(text: str, known_variables: Sequence[str] | None = None) -> list[SurveyRecord]:
    """Read survey rows from CSV text.

    The header names the variables plus a ``label`` column; an ``id``
    column is optional. Cell value 0 means no answer; values must lie in
    [0, 10].
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise DocumentError("survey has no header row")
    fields = list(reader.fieldnames)
    if "label" not in fields:
        raise DocumentError("survey needs a 'label' column")
    variables = [f for f in fields if f not in ("label", "id")]
    if not variables:
        raise DocumentError("survey has no variable columns")
    if known_variables is not None:
        unknown = sorted(set(variables) - set(known_variables))
        if unknown:
            raise DocumentError(f"unknown variable columns: {', '.join(unknown)}")

    records = []
    for lineno, row in enumerate(reader, start=2):
        values: dict[str, InputValue] = {}
        for var in variables:
            cell = (row[var] or "").strip()
            try:
                x = float(cell)
            except ValueError:
                raise DocumentError(f"line {lineno}, column '{var}': non-numeric cell {cell!r}") from None
            if not 0.0 <= x <= 10.0:
                raise DocumentError(f"line {lineno}, column '{var}': value {x:g} outside [0, 10]")
            values[var] = MISSING if x == 0.0 else x
        label_cell = (row["label"] or "").strip()
        if label_cell not in ("0", "1"):
            raise DocumentError(f"line {lineno}: label must be 0 or 1, got {label_cell!r}")
        records.append(
            SurveyRecord(id=(row.get("id") or str(lineno - 1)).strip(), values=values, label=int(label_cell))
        )
    return records


def load_survey(path: str | Path, known_variables: Sequence[str] | None = None) -> list[SurveyRecord]:
    return parse_survey(Path(path).read_text("utf-8"), known_variables)


def lrf_score(record: SurveyRecord, variables: Sequence[str] | None = None) -> float:
    """Arithmetic mean of the raw values, missing counted as 0."""
    names = list(variables) if variables is not None else list(record.values)
    if not names:
        raise ValueError("no variables to average")
    return sum(record.raw(v) for v in names) / len(names)


# ---------------------------------------------------------------------------
# ROC
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RocCurve:
    """Threshold-sweep operating points from (0,0) to (1,1) plus the area."""

    points: tuple[tuple[float, float], ...]
    auc: float


def _check_labels(labels: Sequence[int]) -> tuple[int, int]:
    n_pos = sum(1 for y in labels if y == 1)
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels(
            f"need at least one positive and one negative label, got {n_pos} positive of {len(labels)}"
        )
    return n_pos, n_neg


def roc_points(scores: Sequence[float], labels: Sequence[int]) -> RocCurve:
    """Sweep thresholds over the distinct scores, descending, ties grouped."""
    if len(scores) != len(labels):
        raise ValueError(f"{len(scores)} scores for {len(labels)} labels")
    n_pos, n_neg = _check_labels(labels)

    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(order):
        s = scores[order[i]]
        while i < len(order) and scores[order[i]] == s:
            if labels[order[i]] == 1:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((fp / n_neg, tp / n_pos))
    return RocCurve(points=tuple(points), auc=auc_trapezoid(points))


def auc_trapezoid(curve: RocCurve | Sequence[tuple[float, float]]) -> float:
    """Area under the curve by the trapezoid rule."""
    points = curve.points if isinstance(curve, RocCurve) else tuple(curve)
    area = 0.0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        area += (x2 - x1) * (y1 + y2) / 2.0
    return area


def concordance_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Pairwise positive-over-negative concordance with ties counted half.

    Independent of the threshold sweep; equals the trapezoidal area.
    """
    n_pos, n_neg = _check_labels(labels)
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    pos = s[y == 1][:, None]
    neg = s[y == 0][None, :]
    wins = np.count_nonzero(pos > neg) + 0.5 * np.count_nonzero(pos == neg)
    return float(wins) / (n_pos * n_neg)


# ---------------------------------------------------------------------------
# Engine vs baseline comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionComparison:
    dimension: str
    engine_auc: float
    lrf_auc: float
    engine_curve: RocCurve
    lrf_curve: RocCurve


@dataclass(frozen=True)
class ComparisonReport:
    dimensions: tuple[DimensionComparison, ...]
    n_records: int
    n_positive: int

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "n_positive": self.n_positive,
            "dimensions": [
                {"dimension": d.dimension, "engine_auc": d.engine_auc, "lrf_auc": d.lrf_auc}
                for d in self.dimensions
            ],
        }

    def to_table(self) -> str:
        width = max(len("dimension"), max(len(d.dimension) for d in self.dimensions))
        lines = [f"{'dimension':<{width}}  engine_auc  lrf_auc"]
        for d in self.dimensions:
            lines.append(f"{d.dimension:<{width}}  {d.engine_auc:>10.4f}  {d.lrf_auc:>7.4f}")
        lines.append(f"records: {self.n_records} ({self.n_positive} positive)")
        return "\n".join(lines)


def _subtree_leaf_names(node) -> list[str]:
    if isinstance(node, LeafNode):
        return [node.name]
    names: list[str] = []
    for child in node.children:
        names.extend(_subtree_leaf_names(child))
    return names


def compare(
    fw: EvaluationFramework | FrameworkEvaluator, records: Sequence[SurveyRecord]
) -> ComparisonReport:
    """Score every record with the engine and the mean baseline, then report
    one AUC pair per dimension: each child of the root, plus overall."""
    if not records:
        raise DegenerateLabels("no survey records to compare")
    labels = [r.label for r in records]
    _check_labels(labels)

    evaluator = fw if isinstance(fw, FrameworkEvaluator) else FrameworkEvaluator(fw)
    leaf_names = evaluator.leaf_names
    for record in records:
        missing_vars = set(leaf_names) - set(record.values)
        if missing_vars:
            raise InputsError(
                f"record '{record.id}' lacks variables: {', '.join(sorted(missing_vars))}"
            )

    results: list[NodeResult] = [evaluator.evaluate(r.values) for r in records]

    dimensions: list[tuple[str, str, list[str]]] = []  # (label, node name, leaf subset)
    root = evaluator.framework.root
    for child in root.children:
        dimensions.append((child.name, child.name, _subtree_leaf_names(child)))
    dimensions.append(("overall", root.name, leaf_names))

    comparisons = []
    for label_name, node_name, subset in dimensions:
        engine_scores = [res.find(node_name).crisp for res in results]
        lrf_scores = [lrf_score(r, subset) for r in records]
        engine_curve = roc_points(engine_scores, labels)
        lrf_curve = roc_points(lrf_scores, labels)
        comparisons.append(
            DimensionComparison(
                dimension=label_name,
                engine_auc=engine_curve.auc,
                lrf_auc=lrf_curve.auc,
                engine_curve=engine_curve,
                lrf_curve=lrf_curve,
            )
        )
    return ComparisonReport(
        dimensions=tuple(comparisons), n_records=len(records), n_positive=sum(labels)
    )


def auc_csv(report: ComparisonReport) -> str:
    """Delimited summary, one row per dimension."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["dimension", "engine_auc", "lrf_auc"])
    for d in report.dimensions:
        writer.writerow([d.dimension, f"{d.engine_auc:.6f}", f"{d.lrf_auc:.6f}"])
    return out.getvalue()
