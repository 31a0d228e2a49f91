#!/usr/bin/env python3
"""Regenerate the committed synthetic survey and its planted framework.

Writes data/synthetic_framework.json and data/synthetic_survey.csv, then
prints the per-dimension AUC comparison as a self-check. Output is fully
determined by the seed, so rerunning with the same seed reproduces the
committed files byte for byte.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from beliefrules import compare, load_survey
from beliefrules.storage import canonical_json, framework_from_doc
from beliefrules.synthetic import DEFAULT_SEED, generate_survey, synthetic_framework_doc


def main() -> None:
    repo = Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--records", type=int, default=300)
    parser.add_argument("--out-framework", type=Path, default=repo / "data" / "synthetic_framework.json")
    parser.add_argument("--out-survey", type=Path, default=repo / "data" / "synthetic_survey.csv")
    args = parser.parse_args()

    doc = synthetic_framework_doc()
    fw = framework_from_doc(doc)
    csv_text = generate_survey(fw, n_records=args.records, seed=args.seed)

    args.out_framework.parent.mkdir(parents=True, exist_ok=True)
    args.out_framework.write_text(canonical_json(doc), "utf-8")
    args.out_survey.write_text(csv_text, "utf-8")
    print(f"wrote {args.out_framework}")
    print(f"wrote {args.out_survey}")

    records = load_survey(args.out_survey, known_variables=[l.name for l in fw.leaves()])
    report = compare(fw, records)
    print(report.to_table())


if __name__ == "__main__":
    main()
