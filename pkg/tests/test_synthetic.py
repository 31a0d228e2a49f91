"""The bundled synthetic survey: planted framework, generation, reproducibility."""

from __future__ import annotations

import pytest

from beliefrules import storage
from beliefrules.model import validate_framework
from beliefrules.synthetic import (
    DEFAULT_SEED,
    MISSING_PER_GROUP,
    N_RECORDS,
    ROOT_WEIGHTS,
    generate_survey,
    synthetic_framework,
    synthetic_framework_doc,
)
from beliefrules.transform import MISSING
from beliefrules.validation import parse_survey


@pytest.fixture(scope="module")
def fw():
    return synthetic_framework()


class TestPlantedFramework:
    def test_shape_and_weights(self, fw):
        assert fw.name == "egov_synthetic"
        assert len(fw.leaves()) == 21
        root = fw.root
        assert [a.weight for a in root.rulebase.antecedents] == list(ROOT_WEIGHTS)
        assert root.rulebase.rule_count == 125
        assert validate_framework(fw) == []

    def test_consequents_follow_weighted_mean(self, fw):
        rules = {r.packet: r for r in fw.root.rulebase.rules}
        # packet (4, 0, 0): weighted mean grade 4*4/6 = 8/3, split 1/3 : 2/3
        split = rules[(4, 0, 0)].consequent.as_dict()
        assert split == pytest.approx({"Good": 1 / 3, "Very Good": 2 / 3})
        # an integral mean stays on a single grade
        assert rules[(0, 0, 0)].consequent.as_dict() == {"Poor": 1.0}
        assert rules[(4, 4, 4)].consequent.as_dict() == {"Excellent": 1.0}
        for rule in fw.root.rulebase.rules:
            assert rule.consequent.is_complete

    def test_consequents_track_dominant_branch(self, fw):
        rules = {r.packet: r for r in fw.root.rulebase.rules}
        utilities = fw.root.rulebase.consequent_scale.output_utilities

        def crisp(packet):
            c = rules[packet].consequent
            return sum(d * u for d, u in zip(c.degrees, utilities))

        # raising the heavy first branch moves the consequent much more
        # than raising either light branch
        assert crisp((4, 0, 0)) - crisp((0, 0, 0)) > 2 * (crisp((0, 4, 0)) - crisp((0, 0, 0)))
        assert crisp((0, 4, 0)) == crisp((0, 0, 4))

    def test_document_round_trips(self, fw):
        text = storage.canonical_json(synthetic_framework_doc())
        assert storage.parse_framework(text) == fw


class TestGenerateSurvey:
    def test_deterministic_per_seed(self, fw):
        a = generate_survey(fw, n_records=40, seed=7)
        b = generate_survey(fw, n_records=40, seed=7)
        c = generate_survey(fw, n_records=40, seed=8)
        assert a == b
        assert a != c

    def test_structure(self, fw):
        records = parse_survey(generate_survey(fw, n_records=50, seed=3))
        assert len(records) == 50
        leaf_names = [leaf.name for leaf in fw.leaves()]
        groups = {
            "determinants": leaf_names[0:5],
            "user_environment": leaf_names[5:8],
            "resource_management": leaf_names[8:12],
            "authentication_protocol": leaf_names[12:14],
            "result_analysis": leaf_names[14:18],
            "result_specification": leaf_names[18:21],
        }
        for record in records:
            assert set(record.values) == set(leaf_names)
            blanks = {v for v, x in record.values.items() if x is MISSING}
            assert len(blanks) == sum(MISSING_PER_GROUP.values())
            # the heavy branch is always fully answered
            assert not blanks & set(groups["determinants"])
            for group, k in MISSING_PER_GROUP.items():
                assert len(blanks & set(groups[group])) == k
            for value in record.values.values():
                if value is not MISSING:
                    assert 0.5 <= value <= 10.0
                    assert round(value, 2) == value

    def test_both_classes_present(self, fw):
        records = parse_survey(generate_survey(fw, n_records=60, seed=5))
        labels = [r.label for r in records]
        assert 0 < sum(labels) < len(labels)

    def test_unknown_group_rejected(self, fw):
        with pytest.raises(ValueError, match="unknown groups: nope"):
            generate_survey(fw, n_records=5, missing_per_group={"nope": 1})

    def test_blanking_a_whole_group_rejected(self, fw):
        with pytest.raises(ValueError, match="has 3 leaves; cannot blank 3"):
            generate_survey(fw, n_records=5, missing_per_group={"user_environment": 3})
        with pytest.raises(ValueError):
            generate_survey(fw, n_records=5, missing_per_group={"user_environment": -1})


class TestCommittedArtifacts:
    def test_framework_file_matches_generator(self, fw, synthetic_framework_path):
        text = storage.canonical_json(synthetic_framework_doc())
        assert synthetic_framework_path.read_text("utf-8") == text
        assert storage.load_framework(synthetic_framework_path) == fw

    def test_survey_file_matches_generator(self, fw, synthetic_survey_path):
        assert synthetic_survey_path.read_text("utf-8") == generate_survey(
            fw, n_records=N_RECORDS, seed=DEFAULT_SEED
        )

    def test_survey_file_shape(self, synthetic_survey_path):
        records = parse_survey(synthetic_survey_path.read_text("utf-8"))
        assert len(records) == N_RECORDS
        labels = [r.label for r in records]
        assert sum(labels) == 150
        blank_share = sum(
            1 for r in records for v in r.values.values() if v is MISSING
        ) / (len(records) * 21)
        assert blank_share == pytest.approx(6 / 21, abs=1e-12)
