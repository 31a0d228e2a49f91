"""Shared fixtures: scales, documents, and the bundled frameworks."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from beliefrules import storage
from beliefrules.model import ReferentialScale

REPO = Path(__file__).resolve().parent.parent

FIVE_SCALE_DOC = {
    "grades": ["Poor", "Satisfactory", "Good", "Very Good", "Excellent"],
    "anchors": [4, 5, 6, 7, 10],
}

# The worked single-rule base: three graded antecedents, one rule whose
# consequent leans Good with some belief on Very Good.
RULE_ONE_DOC = {
    "name": "user_environment",
    "scales": {"five_grade": FIVE_SCALE_DOC},
    "attributes": [
        {"name": "interaction", "scale": "five_grade", "weight": 1.0},
        {"name": "integration", "scale": "five_grade", "weight": 1.0},
        {"name": "personalization", "scale": "five_grade", "weight": 1.0},
    ],
    "consequent_scale": "five_grade",
    "rules": [
        {
            "id": "r1",
            "weight": 1.0,
            "if": ["Excellent", "Very Good", "Satisfactory"],
            "then": {"Very Good": 0.2222, "Good": 0.7778},
        }
    ],
}


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO


@pytest.fixture
def five_scale() -> ReferentialScale:
    return ReferentialScale(
        name="five_grade",
        grades=tuple(FIVE_SCALE_DOC["grades"]),
        anchors=tuple(FIVE_SCALE_DOC["anchors"]),
    )


@pytest.fixture
def rule_one_doc() -> dict:
    return json.loads(json.dumps(RULE_ONE_DOC))


@pytest.fixture(scope="session")
def toy_framework():
    return storage.load_framework(REPO / "data" / "toy_framework.json")


@pytest.fixture(scope="session")
def default_framework():
    return storage.load_default_framework()


@pytest.fixture(scope="session")
def synthetic_framework_path() -> Path:
    return REPO / "data" / "synthetic_framework.json"


@pytest.fixture(scope="session")
def synthetic_survey_path() -> Path:
    return REPO / "data" / "synthetic_survey.csv"
