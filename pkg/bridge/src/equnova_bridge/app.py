"""Scoring bridge service: three stateless POST endpoints plus /health.

    POST /relevance  {"question": str, "sentences": [str]}  -> {"scores": [float]}
    POST /generate   {"sentence": str, "k": int}            -> {"questions": [{"text", "answer_snippet"}]}
    POST /entail     {"pairs": [[premise, hypothesis]]}     -> {"probabilities": [float]}
    GET  /health                                            -> {"backend": str, "version": str, "max_batch": int}

Responses align one-to-one with request arrays; probabilities are always in
[0, 1]. Malformed or invalid request bodies get 400; batches larger than
max_batch get 413. Handlers hold no state between requests, so identical
requests always produce identical responses.

The echo backend is a deterministic lexical stand-in so the protocol can be
exercised without model weights; real model backends implement the same
Backend interface and are selected with --backend.
"""

from __future__ import annotations

import re
from typing import Protocol

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

__version__ = "0.1.0"

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _tokens(text: str) -> set[str]:
    return {t.lower() for t in _TOKEN_RE.findall(text)}


class Backend(Protocol):
    name: str

    def relevance(self, question: str, sentences: list[str]) -> list[float]: ...

    def generate(self, sentence: str, k: int) -> list[dict]: ...

    def entail(self, pairs: list[tuple[str, str]]) -> list[float]: ...


class EchoBackend:
    """Normalized token overlap in place of neural scoring.

    relevance: fraction of the question's tokens present in the sentence.
    entail: fraction of the hypothesis' tokens present in the premise, so
    identical texts score 1.0. Token-less inputs score 1.0 only on exact
    string equality. generate: one "What about <token>?" question per
    distinct token (first k), the token's first occurrence as the snippet.
    """

    name = "echo"

    def relevance(self, question: str, sentences: list[str]) -> list[float]:
        q = _tokens(question)
        out = []
        for sentence in sentences:
            if not q:
                out.append(1.0 if sentence == question else 0.0)
                continue
            out.append(len(q & _tokens(sentence)) / len(q))
        return out

    def generate(self, sentence: str, k: int) -> list[dict]:
        questions = []
        seen: set[str] = set()
        for match in _TOKEN_RE.finditer(sentence):
            token = match.group(0)
            if token.lower() in seen:
                continue
            seen.add(token.lower())
            questions.append(
                {"text": f"What about {token.lower()}?", "answer_snippet": token}
            )
            if len(questions) == k:
                break
        return questions

    def entail(self, pairs: list[tuple[str, str]]) -> list[float]:
        out = []
        for premise, hypothesis in pairs:
            h = _tokens(hypothesis)
            if not h:
                out.append(1.0 if premise == hypothesis else 0.0)
                continue
            out.append(len(h & _tokens(premise)) / len(h))
        return out


BACKENDS = {"echo": EchoBackend}


class RelevanceRequest(BaseModel):
    question: str
    sentences: list[str]


class GenerateRequest(BaseModel):
    sentence: str
    k: int = Field(ge=1)


class EntailRequest(BaseModel):
    pairs: list[tuple[str, str]]


def create_app(backend: Backend | None = None, max_batch: int = 64) -> FastAPI:
    backend = backend if backend is not None else EchoBackend()
    app = FastAPI(title="equnova-bridge", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    def check_batch(size: int) -> None:
        if size > max_batch:
            raise HTTPException(
                status_code=413, detail=f"batch of {size} exceeds max_batch {max_batch}"
            )

    @app.get("/health")
    def health():
        return {"backend": backend.name, "version": __version__, "max_batch": max_batch}

    @app.post("/relevance")
    def relevance(body: RelevanceRequest):
        check_batch(len(body.sentences))
        scores = backend.relevance(body.question, body.sentences)
        return {"scores": scores}

    @app.post("/entail")
    def entail(body: EntailRequest):
        check_batch(len(body.pairs))
        probabilities = backend.entail(body.pairs)
        return {"probabilities": probabilities}

    @app.post("/generate")
    def generate(body: GenerateRequest):
        questions = backend.generate(body.sentence, body.k)
        return {"questions": questions}

    return app
