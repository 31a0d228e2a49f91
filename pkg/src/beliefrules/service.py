"""HTTP facade over framework evaluation, what-if runs, weighting, and ROC.

The framework lives in memory behind an atomic holder: a weight update
builds a new compiled evaluator and swaps it in one assignment, so every
evaluation sees exactly one framework version and reports it. Weight edits
are not persisted; the CLI owns files.
"""

from __future__ import annotations

import threading
from typing import Mapping

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    DegenerateLabels,
    DocumentError,
    InputsError,
    NoRuleActivated,
    RuleBaseInvalid,
    UnknownNode,
)
from .hierarchy import FrameworkEvaluator, set_weights, what_if
from .model import EvaluationFramework, LeafNode
from .storage import resolve_inputs, resolve_scenarios
from .validation import compare, parse_survey


def _topology(fw: EvaluationFramework, version: int) -> dict:
    def node_doc(node) -> dict:
        if isinstance(node, LeafNode):
            return {"name": node.name, "scale": node.scale.name, "leaf": True}
        rb = node.rulebase
        return {
            "name": node.name,
            "scale": rb.consequent_scale.name,
            "leaf": False,
            "weights": [float(a.weight) for a in rb.antecedents],
            "rule_count": rb.rule_count,
            "children": [node_doc(c) for c in node.children],
        }

    scales = {}
    for node in fw.walk():
        scale = node.scale if isinstance(node, LeafNode) else node.rulebase.consequent_scale
        scales[scale.name] = {
            "grades": list(scale.grades),
            "anchors": list(scale.anchors),
            "utilities": list(scale.output_utilities),
        }
    return {
        "name": fw.name,
        "version": version,
        "scales": dict(sorted(scales.items())),
        "leaves": [leaf.name for leaf in fw.leaves()],
        "nodes": node_doc(fw.root),
    }


class _Holder:
    """One-cell store of (evaluator, version); swap is atomic for readers."""

    def __init__(self, fw: EvaluationFramework):
        self._lock = threading.Lock()
        self._state: tuple[FrameworkEvaluator, int] = (FrameworkEvaluator(fw), 1)

    @property
    def current(self) -> tuple[FrameworkEvaluator, int]:
        return self._state

    def update_weights(self, node: str, weights: list[float]) -> tuple[FrameworkEvaluator, int]:
        with self._lock:
            evaluator, version = self._state
            new_fw = set_weights(evaluator.framework, node, weights)
            self._state = (FrameworkEvaluator(new_fw), version + 1)
            return self._state


def _bad_request(detail: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": detail})


def create_app(framework: EvaluationFramework) -> FastAPI:
    holder = _Holder(framework)
    app = FastAPI(title="beliefrules service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def _schema_error(request, exc: RequestValidationError):
        return _bad_request(f"request body invalid: {exc.errors()[0].get('msg', 'schema violation')}")

    @app.get("/framework")
    def get_framework():
        evaluator, version = holder.current
        return _topology(evaluator.framework, version)

    @app.post("/evaluate")
    def evaluate(body: dict):
        evaluator, version = holder.current
        inputs_doc = body.get("inputs")
        if not isinstance(inputs_doc, Mapping):
            return _bad_request("body needs an 'inputs' object mapping leaves to values")
        try:
            inputs = resolve_inputs(inputs_doc, evaluator.framework)
            result = evaluator.evaluate(inputs)
        except (InputsError, DocumentError) as exc:
            return _bad_request(str(exc))
        except NoRuleActivated as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc), "node": exc.node})
        return {"framework_version": version, "result": result.to_dict()}

    @app.post("/whatif")
    def whatif(body: dict):
        evaluator, version = holder.current
        baseline_doc = body.get("baseline")
        scenarios_doc = body.get("scenarios", [])
        if not isinstance(baseline_doc, Mapping):
            return _bad_request("body needs a 'baseline' object mapping leaves to values")
        if not isinstance(scenarios_doc, list):
            return _bad_request("'scenarios' must be a list")
        raw = []
        for s in scenarios_doc:
            if not isinstance(s, Mapping) or "name" not in s or not isinstance(s.get("overrides"), Mapping):
                return _bad_request("each scenario needs a 'name' and an 'overrides' object")
            raw.append((str(s["name"]), dict(s["overrides"])))
        try:
            baseline = resolve_inputs(baseline_doc, evaluator.framework)
            scenarios = resolve_scenarios(raw, evaluator.framework)
            report = what_if(evaluator, baseline, scenarios)
        except (InputsError, DocumentError) as exc:
            return _bad_request(str(exc))
        except NoRuleActivated as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc), "node": exc.node})
        doc = report.to_dict()
        doc["framework_version"] = version
        return doc

    @app.put("/weights")
    def put_weights(body: dict):
        node = body.get("node")
        weights = body.get("weights")
        if not isinstance(node, str) or not isinstance(weights, list) or not weights:
            return _bad_request("body needs 'node' (string) and 'weights' (non-empty list)")
        try:
            values = [float(w) for w in weights]
        except (TypeError, ValueError):
            return _bad_request("weights must be numbers")
        evaluator, _ = holder.current
        try:
            target = evaluator.framework.node(node)
        except UnknownNode as exc:
            return JSONResponse(status_code=404, content={"detail": str(exc)})
        if isinstance(target, LeafNode):
            return _bad_request(f"node '{node}' is a leaf and carries no child weights")
        try:
            new_evaluator, version = holder.update_weights(node, values)
        except (ValueError, RuleBaseInvalid) as exc:
            return _bad_request(str(exc))
        return _topology(new_evaluator.framework, version)

    @app.post("/roc")
    def roc(body: dict):
        evaluator, version = holder.current
        csv_text = body.get("csv")
        if not isinstance(csv_text, str):
            return _bad_request("body needs 'csv': survey text with a label column")
        try:
            records = parse_survey(csv_text, known_variables=evaluator.leaf_names)
            report = compare(evaluator, records)
        except (DocumentError, InputsError) as exc:
            return _bad_request(str(exc))
        except DegenerateLabels as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        except NoRuleActivated as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc), "node": exc.node})
        doc = report.to_dict()
        doc["framework_version"] = version
        return doc

    return app
