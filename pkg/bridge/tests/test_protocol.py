"""Wire-protocol conformance of the bridge service (echo backend)."""

import pytest
from fastapi.testclient import TestClient

from equnova_bridge import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(max_batch=64))


class TestHealth:
    def test_reports_backend_and_version(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        body = resp.json()
        assert body["backend"] == "echo"
        assert body["version"]
        assert body["max_batch"] == 64


class TestEntail:
    def test_identity_pair_scores_one(self, client):
        resp = client.post("/entail", json={"pairs": [["a question", "a question"]]})
        assert resp.status_code == 200
        assert resp.json()["probabilities"] == [1.0]

    def test_disjoint_pair_scores_zero(self, client):
        resp = client.post("/entail", json={"pairs": [["alpha beta", "gamma delta"]]})
        assert resp.json()["probabilities"] == [0.0]

    def test_alignment_across_sizes(self, client):
        for size in (1, 2, 63, 64):
            pairs = [[f"premise {i}", f"hypothesis {i}"] for i in range(size)]
            resp = client.post("/entail", json={"pairs": pairs})
            assert resp.status_code == 200
            probs = resp.json()["probabilities"]
            assert len(probs) == size
            assert all(0.0 <= p <= 1.0 for p in probs)

    def test_oversize_batch_rejected(self, client):
        pairs = [["a", "b"]] * 65
        resp = client.post("/entail", json={"pairs": pairs})
        assert resp.status_code == 413

    def test_stateless_repeat(self, client):
        payload = {"pairs": [["what is covid", "what is the virus"], ["x y", "y z"]]}
        first = client.post("/entail", json=payload).json()
        second = client.post("/entail", json=payload).json()
        assert first == second


class TestRelevance:
    def test_alignment_and_ranges(self, client):
        body = {"question": "origin of covid", "sentences": ["covid origin", "nothing", ""]}
        resp = client.post("/relevance", json=body)
        scores = resp.json()["scores"]
        assert len(scores) == 3
        assert all(0.0 <= s <= 1.0 for s in scores)
        assert scores[0] > scores[1] == scores[2] == 0.0

    def test_identity_sentence_scores_one(self, client):
        body = {"question": "origin of covid", "sentences": ["origin of covid"]}
        assert client.post("/relevance", json=body).json()["scores"] == [1.0]

    def test_oversize_rejected(self, client):
        body = {"question": "q", "sentences": ["s"] * 65}
        assert client.post("/relevance", json=body).status_code == 413


class TestGenerate:
    def test_bounded_by_k_with_substring_snippets(self, client):
        sentence = "The outbreak started in Wuhan City."
        resp = client.post("/generate", json={"sentence": sentence, "k": 2})
        questions = resp.json()["questions"]
        assert 0 < len(questions) <= 2
        for q in questions:
            assert q["text"]
            assert q["answer_snippet"] in sentence

    def test_empty_sentence_yields_nothing(self, client):
        resp = client.post("/generate", json={"sentence": "...", "k": 3})
        assert resp.json()["questions"] == []

    def test_k_must_be_positive(self, client):
        resp = client.post("/generate", json={"sentence": "abc", "k": 0})
        assert resp.status_code == 400


class TestErrors:
    def test_malformed_json_is_400(self, client):
        resp = client.post(
            "/entail", content=b"{not json", headers={"content-type": "application/json"}
        )
        assert resp.status_code == 400
        assert "error" in resp.json()

    def test_wrong_shape_is_400(self, client):
        assert client.post("/entail", json={"pairs": [["only-one"]]}).status_code == 400
        assert client.post("/relevance", json={"question": "q"}).status_code == 400
