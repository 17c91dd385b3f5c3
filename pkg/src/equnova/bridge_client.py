"""HTTP client for the external model bridge, plus port adapters.

The bridge exposes three POST endpoints speaking JSON:

    /relevance  {"question": str, "sentences": [str]}  -> {"scores": [float]}
    /generate   {"sentence": str, "k": int}            -> {"questions": [{"text", "answer_snippet"}]}
    /entail     {"pairs": [[premise, hypothesis]]}     -> {"probabilities": [float]}
    /health     GET                                    -> {"backend": str, "version": str}

Any transport or protocol violation raises BridgeError; a scorer never
silently returns 0. Requests are batched (max_batch items per call) and
the number of in-flight HTTP requests is bounded by a semaphore so many
pipeline workers can share one client.
"""

from __future__ import annotations

import threading
from typing import Sequence

import requests

from .corpus import Sentence
from .scoring import EntailmentScorer, GeneratedQuestion, QuestionGenerator, RelevanceScorer


class BridgeError(RuntimeError):
    """Bridge unreachable, non-2xx response, or malformed/misaligned payload."""


class BridgeClient:
    def __init__(
        self,
        base_url: str,
        timeout: float = 30.0,
        max_batch: int = 64,
        max_in_flight: int = 8,
        session: requests.Session | None = None,
    ):
        if max_batch < 1 or max_in_flight < 1:
            raise ValueError("max_batch and max_in_flight must be >= 1")
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_batch = max_batch
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._session = session or requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.base_url}{path}"
        try:
            with self._semaphore:
                resp = self._session.post(url, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise BridgeError(f"bridge unreachable at {url}: {exc}") from exc
        if resp.status_code != 200:
            raise BridgeError(f"bridge {path} returned {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise BridgeError(f"bridge {path} returned invalid JSON") from exc

    def health(self) -> dict:
        url = f"{self.base_url}/health"
        try:
            resp = self._session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise BridgeError(f"bridge unreachable at {url}: {exc}") from exc
        if resp.status_code != 200:
            raise BridgeError(f"bridge /health returned {resp.status_code}")
        return resp.json()

    @staticmethod
    def _check_probabilities(values: object, expected: int, path: str) -> list[float]:
        if not isinstance(values, list) or len(values) != expected:
            raise BridgeError(
                f"bridge {path}: expected {expected} values, got "
                f"{len(values) if isinstance(values, list) else type(values).__name__}"
            )
        out = []
        for v in values:
            if not isinstance(v, (int, float)) or not 0.0 <= float(v) <= 1.0:
                raise BridgeError(f"bridge {path}: value {v!r} outside [0, 1]")
            out.append(float(v))
        return out

    def relevance(self, question: str, sentences: Sequence[str]) -> list[float]:
        scores: list[float] = []
        for start in range(0, len(sentences), self.max_batch):
            chunk = list(sentences[start : start + self.max_batch])
            body = self._post("/relevance", {"question": question, "sentences": chunk})
            scores.extend(self._check_probabilities(body.get("scores"), len(chunk), "/relevance"))
        return scores

    def generate(self, sentence_text: str, k: int) -> list[dict]:
        body = self._post("/generate", {"sentence": sentence_text, "k": k})
        questions = body.get("questions")
        if not isinstance(questions, list) or len(questions) > k:
            raise BridgeError(f"bridge /generate: expected <= {k} questions")
        return questions

    def entail(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        probs: list[float] = []
        for start in range(0, len(pairs), self.max_batch):
            chunk = [[p, h] for p, h in pairs[start : start + self.max_batch]]
            body = self._post("/entail", {"pairs": chunk})
            probs.extend(self._check_probabilities(body.get("probabilities"), len(chunk), "/entail"))
        return probs


class BridgeRelevance(RelevanceScorer):
    def __init__(self, client: BridgeClient):
        self._client = client

    def score(self, question_text: str, sentence_text: str) -> float:
        return self._client.relevance(question_text, [sentence_text])[0]

    def score_many(self, question_text: str, sentence_texts: Sequence[str]) -> list[float]:
        return self._client.relevance(question_text, list(sentence_texts))


class BridgeGenerator(QuestionGenerator):
    def __init__(self, client: BridgeClient):
        self._client = client

    def generate(self, sentence: Sentence, k: int) -> list[GeneratedQuestion]:
        raw = self._client.generate(sentence.text, k)
        out = []
        for n, item in enumerate(raw):
            text = item.get("text") if isinstance(item, dict) else None
            snippet = item.get("answer_snippet") if isinstance(item, dict) else None
            if not isinstance(text, str) or not text or not isinstance(snippet, str) or not snippet:
                raise BridgeError(f"bridge /generate: malformed question {item!r}")
            if snippet not in sentence.text:
                raise BridgeError(
                    f"bridge /generate: snippet {snippet!r} is not a substring of the sentence"
                )
            out.append(GeneratedQuestion(f"{sentence.sentence_id}-Q{n}", text, sentence.sentence_id, snippet))
        return out


class BridgeEntailment(EntailmentScorer):
    def __init__(self, client: BridgeClient):
        self._client = client

    def score(self, premise: str, hypothesis: str) -> float:
        return self._client.entail([(premise, hypothesis)])[0]

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return self._client.entail(list(pairs))
