"""HTTP service: endpoints, status codes, and atomic weight swaps."""

from __future__ import annotations

import threading
import time

import pytest
from fastapi.testclient import TestClient

from beliefrules.hierarchy import evaluate_tree, set_weights
from beliefrules.service import create_app
from beliefrules.storage import load_default_framework

TOY_INPUTS = {"quality": 6.5, "adoption": 6.0}


@pytest.fixture
def client(toy_framework):
    return TestClient(create_app(toy_framework))


class TestFrameworkEndpoint:
    def test_topology(self, client):
        r = client.get("/framework")
        assert r.status_code == 200
        doc = r.json()
        assert doc["name"] == "toy"
        assert doc["version"] == 1
        assert doc["leaves"] == ["quality", "adoption"]
        root = doc["nodes"]
        assert root["name"] == "overall"
        assert root["leaf"] is False
        assert root["weights"] == [1.0, 1.0]
        assert root["rule_count"] == 25
        assert [c["name"] for c in root["children"]] == ["quality", "adoption"]
        assert all(c["leaf"] for c in root["children"])
        scale = doc["scales"]["five_grade"]
        assert scale["grades"][0] == "Poor"
        assert scale["anchors"] == [4.0, 5.0, 6.0, 7.0, 10.0]

    def test_bundled_framework(self):
        client = TestClient(create_app(load_default_framework()))
        doc = client.get("/framework").json()
        assert doc["name"] == "egov"
        assert len(doc["leaves"]) == 21
        assert len(doc["nodes"]["children"]) == 3

    def test_cors_header(self, client):
        r = client.get("/framework", headers={"Origin": "http://localhost:5173"})
        assert r.headers["access-control-allow-origin"] == "*"


class TestEvaluate:
    def test_complete_inputs(self, client):
        r = client.post("/evaluate", json={"inputs": TOY_INPUTS})
        assert r.status_code == 200
        doc = r.json()
        assert doc["framework_version"] == 1
        result = doc["result"]
        assert result["name"] == "overall"
        assert result["crisp"] == pytest.approx(6.5, abs=1e-9)
        assert result["percent"] == pytest.approx(65.0, abs=1e-6)
        assert result["unassigned"] == 0.0
        assert [c["name"] for c in result["children"]] == ["quality", "adoption"]

    def test_null_means_no_answer(self, client):
        r = client.post("/evaluate", json={"inputs": {"quality": 6.5, "adoption": None}})
        assert r.status_code == 200
        result = r.json()["result"]
        assert result["unassigned"] == pytest.approx(0.426872, abs=1e-6)
        adoption = result["children"][1]
        assert adoption["unassigned"] == 1.0

    def test_belief_map_input(self, client):
        dist = {"Good": 0.5, "Very Good": 0.5}
        r = client.post("/evaluate", json={"inputs": {"quality": dist, "adoption": 6.0}})
        assert r.status_code == 200
        assert r.json()["result"]["children"][0]["crisp"] == pytest.approx(6.5, abs=1e-9)

    def test_body_without_inputs(self, client):
        r = client.post("/evaluate", json={})
        assert r.status_code == 400
        assert "'inputs' object" in r.json()["detail"]

    def test_non_object_body(self, client):
        r = client.post("/evaluate", json=[1, 2, 3])
        assert r.status_code == 400
        assert "request body invalid" in r.json()["detail"]

    def test_unknown_leaf(self, client):
        r = client.post("/evaluate", json={"inputs": {"bogus": 5.0}})
        assert r.status_code == 400
        assert "unknown leaves" in r.json()["detail"]

    def test_absent_leaf(self, client):
        r = client.post("/evaluate", json={"inputs": {"quality": 6.5}})
        assert r.status_code == 400
        assert "no input for leaf 'adoption'" in r.json()["detail"]

    def test_bad_value_type(self, client):
        r = client.post("/evaluate", json={"inputs": {"quality": True, "adoption": 6.0}})
        assert r.status_code == 400

    def test_all_missing_is_unprocessable(self, client):
        r = client.post("/evaluate", json={"inputs": {"quality": None, "adoption": "missing"}})
        assert r.status_code == 422
        doc = r.json()
        assert doc["node"] == "overall"
        assert "no rule activated" in doc["detail"]


class TestWhatIf:
    def test_report(self, client):
        r = client.post(
            "/whatif",
            json={
                "baseline": TOY_INPUTS,
                "scenarios": [
                    {"name": "noop", "overrides": {}},
                    {"name": "drop", "overrides": {"adoption": None}},
                    {"name": "bad", "overrides": {"bogus": 1.0}},
                ],
            },
        )
        assert r.status_code == 200
        doc = r.json()
        assert doc["framework_version"] == 1
        assert doc["baseline"]["crisp"] == pytest.approx(6.5, abs=1e-9)
        names = [s["scenario"] for s in doc["scenarios"]]
        assert names == ["drop", "noop", "bad"]
        assert doc["scenarios"][0]["root_delta"] == pytest.approx(-2.667076, abs=1e-6)
        assert "error" in doc["scenarios"][2]

    def test_empty_scenario_list_allowed(self, client):
        r = client.post("/whatif", json={"baseline": TOY_INPUTS})
        assert r.status_code == 200
        assert r.json()["scenarios"] == []

    def test_baseline_required(self, client):
        r = client.post("/whatif", json={"scenarios": []})
        assert r.status_code == 400
        assert "'baseline' object" in r.json()["detail"]

    def test_scenarios_must_be_list(self, client):
        r = client.post("/whatif", json={"baseline": TOY_INPUTS, "scenarios": {}})
        assert r.status_code == 400
        assert "must be a list" in r.json()["detail"]

    def test_scenario_shape_enforced(self, client):
        r = client.post("/whatif", json={"baseline": TOY_INPUTS, "scenarios": [{"name": "x"}]})
        assert r.status_code == 400
        assert "'overrides' object" in r.json()["detail"]

    def test_unevaluable_baseline_is_unprocessable(self, client):
        r = client.post(
            "/whatif", json={"baseline": {"quality": None, "adoption": None}, "scenarios": []}
        )
        assert r.status_code == 422
        assert r.json()["node"] == "overall"


class TestWeights:
    def test_update_bumps_version_and_changes_results(self, client):
        inputs = {"quality": 9.0, "adoption": 4.2}
        before = client.post("/evaluate", json={"inputs": inputs}).json()
        assert before["framework_version"] == 1

        r = client.put("/weights", json={"node": "overall", "weights": [5, 1]})
        assert r.status_code == 200
        topo = r.json()
        assert topo["version"] == 2
        assert topo["nodes"]["weights"] == [5.0, 1.0]

        assert client.get("/framework").json()["version"] == 2
        after = client.post("/evaluate", json={"inputs": inputs}).json()
        assert after["framework_version"] == 2
        assert after["result"]["crisp"] != pytest.approx(before["result"]["crisp"], abs=1e-6)

    def test_unknown_node_404(self, client):
        r = client.put("/weights", json={"node": "nope", "weights": [1, 1]})
        assert r.status_code == 404
        assert "no node named 'nope'" in r.json()["detail"]

    def test_leaf_node_400(self, client):
        r = client.put("/weights", json={"node": "quality", "weights": [1]})
        assert r.status_code == 400
        assert "is a leaf" in r.json()["detail"]

    def test_wrong_count_400(self, client):
        r = client.put("/weights", json={"node": "overall", "weights": [1, 2, 3]})
        assert r.status_code == 400
        assert "has 2 children, got 3 weights" in r.json()["detail"]

    def test_nonpositive_400(self, client):
        r = client.put("/weights", json={"node": "overall", "weights": [0, 1]})
        assert r.status_code == 400
        assert "must be > 0" in r.json()["detail"]

    def test_non_numeric_400(self, client):
        r = client.put("/weights", json={"node": "overall", "weights": ["heavy", 1]})
        assert r.status_code == 400
        assert "weights must be numbers" in r.json()["detail"]

    def test_missing_fields_400(self, client):
        assert client.put("/weights", json={"weights": [1, 1]}).status_code == 400
        assert client.put("/weights", json={"node": "overall"}).status_code == 400
        assert client.put("/weights", json={"node": "overall", "weights": []}).status_code == 400


class TestRoc:
    CSV = (
        "id,quality,adoption,label\n"
        "1,9.0,8.5,1\n2,8.0,0,1\n3,6.5,6.0,1\n4,5.0,4.5,0\n5,4.5,0,0\n6,4.0,5.0,0\n"
    )

    def test_comparison(self, client):
        r = client.post("/roc", json={"csv": self.CSV})
        assert r.status_code == 200
        doc = r.json()
        assert doc["framework_version"] == 1
        assert doc["n_records"] == 6
        assert [d["dimension"] for d in doc["dimensions"]] == ["quality", "adoption", "overall"]
        for d in doc["dimensions"]:
            assert 0.0 <= d["engine_auc"] <= 1.0
            assert 0.0 <= d["lrf_auc"] <= 1.0

    def test_one_class_is_unprocessable(self, client):
        csv_text = "quality,adoption,label\n5,5,1\n6,6,1\n"
        r = client.post("/roc", json={"csv": csv_text})
        assert r.status_code == 422
        assert "at least one positive and one negative" in r.json()["detail"]

    def test_csv_required_as_string(self, client):
        assert client.post("/roc", json={}).status_code == 400
        assert client.post("/roc", json={"csv": 42}).status_code == 400

    def test_unknown_column_400(self, client):
        r = client.post("/roc", json={"csv": "quality,typo,label\n5,5,1\n6,6,0\n"})
        assert r.status_code == 400
        assert "unknown variable columns: typo" in r.json()["detail"]


def test_weight_updates_swap_atomically(toy_framework):
    """Readers hammering /evaluate during weight swaps must always see a
    crisp score consistent with the version each response reports."""
    app = create_app(toy_framework)
    inputs = {"quality": 9.0, "adoption": 4.2}
    weight_sets = [[float(i), 1.0] for i in range(2, 7)]

    expected = {1: evaluate_tree(toy_framework, inputs).crisp}
    for version, ws in enumerate(weight_sets, start=2):
        fw = set_weights(toy_framework, "overall", ws)
        expected[version] = evaluate_tree(fw, inputs).crisp
    assert len(set(expected.values())) == len(expected)

    observations: list[tuple[int, float]] = []
    failures: list[str] = []
    stop = threading.Event()

    def reader():
        client = TestClient(app)
        while not stop.is_set():
            r = client.post("/evaluate", json={"inputs": inputs})
            if r.status_code != 200:
                failures.append(r.text)
                return
            doc = r.json()
            observations.append((doc["framework_version"], doc["result"]["crisp"]))

    threads = [threading.Thread(target=reader) for _ in range(4)]
    for t in threads:
        t.start()
    writer = TestClient(app)
    try:
        for ws in weight_sets:
            assert writer.put("/weights", json={"node": "overall", "weights": ws}).status_code == 200
            time.sleep(0.01)
    finally:
        stop.set()
        for t in threads:
            t.join(timeout=30)

    assert not failures
    assert observations
    for version, crisp in observations:
        assert crisp == pytest.approx(expected[version], abs=1e-9), f"version {version}"
