"""Command-line interface.

Subcommands: validate, gen, infer, eval, whatif, roc, serve. Output is a
human-readable table by default or JSON with ``--format json``; JSON output
is deterministic, so identical invocations are byte-identical.

Exit codes: 0 success, 1 usage or input error, 2 document/validation
failure, 3 runtime evaluation error (for example no rule activated).

The framework argument of eval/whatif/roc/serve may be omitted, in which
case the path in $BELIEFRULES_FRAMEWORK is used, falling back to the
bundled default framework.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import storage
from .errors import (
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
from .hierarchy import FrameworkEvaluator, NodeResult, what_if
from .inference import infer
from .model import (
    EvaluationFramework,
    generate_complete_rule_base,
    validate_framework,
    validate_rule_base,
)
from .transform import MISSING, InputValue
from .validation import auc_csv, compare, load_survey

FRAMEWORK_ENV_VAR = "BELIEFRULES_FRAMEWORK"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this project reserves 2 for
    validation failures, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_framework_arg(arg: str | None) -> EvaluationFramework:
    if arg:
        return storage.load_framework(arg)
    env = os.environ.get(FRAMEWORK_ENV_VAR)
    if env:
        return storage.load_framework(env)
    return storage.load_default_framework()


def _parse_inline_inputs(chunks: list[str]) -> dict[str, InputValue]:
    out: dict[str, InputValue] = {}
    for chunk in chunks:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise InputsError(f"bad input {item!r}, expected name=value")
            key, _, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if value.lower() == "missing":
                out[key] = MISSING
            else:
                try:
                    out[key] = float(value)
                except ValueError:
                    raise InputsError(f"bad numeric value for '{key}': {value!r}") from None
    return out


def _distribution_lines(dist, indent: str = "  ") -> list[str]:
    width = max(len(g) for g in dist.scale.grades)
    return [f"{indent}{g:<{width}}  {d:.4f}" for g, d in zip(dist.scale.grades, dist.degrees)]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    text = Path(args.document).read_text("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document root must be a JSON object")
    if "nodes" in doc:
        fw = storage.framework_from_doc(doc, check=False)
        issues = validate_framework(fw)
    else:
        rb = storage.rule_base_from_doc(doc, check=False)
        issues = validate_rule_base(rb)
    errors = [i for i in issues if i.severity == "ERROR"]
    warnings = [i for i in issues if i.severity == "WARN"]
    if args.format == "json":
        out = {
            "errors": [{"location": i.location, "message": i.message} for i in errors],
            "warnings": [{"location": i.location, "message": i.message} for i in warnings],
        }
        sys.stdout.write(storage.canonical_json(out))
    else:
        for issue in issues:
            print(str(issue))
        print(f"{len(errors)} errors, {len(warnings)} warnings")
    return 2 if errors else 0


def _cmd_gen(args) -> int:
    spec = storage.load_generation_spec(args.spec)
    rb = generate_complete_rule_base(
        spec.antecedents,
        spec.consequent_scale,
        fill_policy=args.fill,
        name=args.name or spec.name,
        cap=args.cap,
    )
    text = storage.store_rule_base(rb)
    if args.out:
        Path(args.out).write_text(text, "utf-8")
        print(f"wrote {rb.rule_count} rules to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_infer(args) -> int:
    rb = storage.load_rule_base(args.rulebase)
    given = _parse_inline_inputs(args.input)
    names = [a.name for a in rb.antecedents]
    unknown = sorted(set(given) - set(names))
    if unknown:
        raise InputsError(f"unknown attributes: {', '.join(unknown)}")
    absent = [n for n in names if n not in given]
    if absent:
        raise InputsError(f"no input for attribute '{absent[0]}'")
    result = infer(rb, [given[n] for n in names])
    doc = {
        "crisp": result.crisp,
        "unassigned": result.unassigned_mass,
        "utility_interval": list(result.utility_interval),
        "distribution": {
            g: d for g, d in zip(result.distribution.scale.grades, result.distribution.degrees)
        },
    }
    if args.format == "json":
        sys.stdout.write(storage.canonical_json(doc))
    else:
        print(f"crisp: {result.crisp:.4f}")
        print(f"unassigned: {result.unassigned_mass:.4f}")
        print("distribution:")
        for line in _distribution_lines(result.distribution):
            print(line)
    return 0


def _tree_lines(res: NodeResult, depth: int = 0) -> list[str]:
    pad = "  " * depth
    shown = ", ".join(f"{g} {d:.4f}" for g, d in res.distribution.as_dict().items()) or "(no belief)"
    lines = [f"{pad}{res.name}: crisp {res.crisp:.4f}  [{shown}]"]
    for child in res.children:
        lines.extend(_tree_lines(child, depth + 1))
    return lines


def _cmd_eval(args) -> int:
    fw = _load_framework_arg(args.framework)
    raw = storage.load_inputs(args.inputs)
    inputs = storage.resolve_inputs(raw, fw)
    result = FrameworkEvaluator(fw).evaluate(inputs)
    if args.format == "json":
        sys.stdout.write(storage.canonical_json({"result": result.to_dict()}))
    else:
        print(f"overall score: {result.percent:.3f}%")
        for line in _tree_lines(result):
            print(line)
    return 0


def _cmd_whatif(args) -> int:
    fw = _load_framework_arg(args.framework)
    baseline = storage.resolve_inputs(storage.load_inputs(args.baseline), fw)
    raw_scenarios = []
    for path in args.scenario:
        raw_scenarios.extend(storage.load_scenarios(path))
    scenarios = storage.resolve_scenarios(raw_scenarios, fw)
    report = what_if(fw, baseline, scenarios)
    if args.format == "json":
        sys.stdout.write(storage.canonical_json(report.to_dict()))
    else:
        print(f"baseline root crisp: {report.baseline.crisp:.4f}")
        width = max([len("scenario")] + [len(o.scenario) for o in report.outcomes])
        print(f"{'scenario':<{width}}  root_delta")
        for o in report.outcomes:
            if o.error is not None:
                print(f"{o.scenario:<{width}}  ERROR: {o.error}")
            else:
                print(f"{o.scenario:<{width}}  {o.root_delta:+.4f}")
    return 0


def _cmd_roc(args) -> int:
    fw = _load_framework_arg(args.framework)
    leaf_names = [leaf.name for leaf in fw.leaves()]
    records = load_survey(args.survey, known_variables=leaf_names)
    report = compare(fw, records)
    if args.outdir:
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "auc_summary.csv").write_text(auc_csv(report), "utf-8")
        from .plots import save_roc_figures

        written = save_roc_figures(report, outdir)
        print(f"wrote {outdir / 'auc_summary.csv'} and {len(written)} figures", file=sys.stderr)
    if args.format == "json":
        sys.stdout.write(storage.canonical_json(report.to_dict()))
    else:
        print(report.to_table())
    return 0


def _cmd_serve(args) -> int:
    fw = _load_framework_arg(args.framework)
    import uvicorn

    from .service import create_app

    app = create_app(fw)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="beliefrules", description="Belief-rule-base decision engine")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("validate", parents=[fmt], help="check a rule-base or framework document")
    p.add_argument("document")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("gen", parents=[fmt], help="generate a complete rule base from a spec document")
    p.add_argument("spec")
    p.add_argument("--fill", choices=("uniform", "diagonal", "blank"), default="uniform")
    p.add_argument("--name", default=None)
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("infer", parents=[fmt], help="run one rule base on inline inputs")
    p.add_argument("rulebase")
    p.add_argument("--input", action="append", default=[], metavar="k=v,...")
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("eval", parents=[fmt], help="evaluate a framework on a leaf-inputs file")
    p.add_argument("framework", nargs="?", default=None)
    p.add_argument("--inputs", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("whatif", parents=[fmt], help="compare scenarios against a baseline")
    p.add_argument("framework", nargs="?", default=None)
    p.add_argument("--baseline", required=True)
    p.add_argument("--scenario", action="append", required=True)
    p.set_defaults(func=_cmd_whatif)

    p = sub.add_parser("roc", parents=[fmt], help="engine vs mean-baseline AUC on a survey CSV")
    p.add_argument("framework", nargs="?", default=None)
    p.add_argument("--survey", required=True)
    p.add_argument("--outdir", default=None, help="write auc_summary.csv and ROC SVG figures here")
    p.set_defaults(func=_cmd_roc)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("framework", nargs="?", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DocumentError, RuleBaseInvalid, GenerationCapExceeded, DegenerateLabels, UnknownNode, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoRuleActivated, DegenerateAggregation, ScaleMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
