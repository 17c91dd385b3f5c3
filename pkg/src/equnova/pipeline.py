"""End-to-end per-question flow: retrieve, select, generate, EQG, re-rank.

Shared structures (corpus, index, scorers) are immutable or stateless, so
questions can be processed concurrently; results are assembled in input
order, which keeps batch output independent of the worker count.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Iterable

from .bridge_client import BridgeClient, BridgeEntailment, BridgeGenerator, BridgeRelevance
from .corpus import AnswerSpan, Corpus
from .eqg import EqgConfig, build_eqg, connected_components, eqg_to_dict, select_nugget_questions
from .index import InvertedIndex, candidate_sentences, search_contexts
from .rerank import RankedAnswer, Variant, assign_nuggets, format_run_line, greedy_rerank
from .scoring import (
    EntailmentScorer,
    GenerationConfig,
    LexicalEntailment,
    LexicalRelevance,
    Question,
    QuestionGenerator,
    RelevanceScorer,
    TemplateGenerator,
    select_top_sentences,
)


@dataclass(frozen=True)
class PipelineConfig:
    generation: GenerationConfig = GenerationConfig()
    eqg: EqgConfig = EqgConfig()
    variant: Variant = Variant.EXACT
    top_contexts: int = 200
    top_sentences: int = 1000
    max_questions_for_eqg: int = 500
    relevance: str = "lexical"
    qgen: str = "template"
    entail: str = "lexical"
    bridge_url: str | None = None
    run_tag: str = "equnova"
    rerank: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.run_tag.strip():
            raise ValueError("run_tag must be non-empty")
        for name in ("top_contexts", "top_sentences", "max_questions_for_eqg", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name, allowed in (
            ("relevance", {"lexical", "bridge"}),
            ("qgen", {"template", "bridge"}),
            ("entail", {"lexical", "bridge"}),
        ):
            if getattr(self, name) not in allowed:
                raise ValueError(f"{name} must be one of {sorted(allowed)}")
        if "bridge" in (self.relevance, self.qgen, self.entail) and not self.bridge_url:
            raise ValueError("bridge scorers selected but no bridge_url configured")


def config_from_json(text: str) -> PipelineConfig:
    """Build a PipelineConfig from its JSON form (unknown keys rejected)."""
    raw = json.loads(text)
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    kwargs: dict = {}
    known = {
        "variant", "top_contexts", "top_sentences", "max_questions_for_eqg",
        "relevance", "qgen", "entail", "bridge_url", "run_tag", "rerank", "workers",
    }
    for key, value in raw.items():
        if key == "generation":
            kwargs["generation"] = GenerationConfig(**value)
        elif key == "eqg":
            kwargs["eqg"] = EqgConfig(**value)
        elif key == "variant":
            kwargs["variant"] = Variant(value)
        elif key in known:
            kwargs[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return PipelineConfig(**kwargs)


@dataclass
class QuestionSet:
    questions: list[Question]
    task: str | None = None  # optional label: expert | consumer

    def __post_init__(self) -> None:
        qids = [q.qid for q in self.questions]
        if len(set(qids)) != len(qids):
            raise ValueError("duplicate qids in question set")


def load_questions(stream: IO[str] | Iterable[str], task: str | None = None) -> QuestionSet:
    questions = []
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            questions.append(Question(obj["qid"], obj["text"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"questions line {line_no}: {exc}") from None
    return QuestionSet(questions, task)


@dataclass
class Scorers:
    relevance: RelevanceScorer
    qgen: QuestionGenerator
    entail: EntailmentScorer


def build_scorers(config: PipelineConfig, index: InvertedIndex) -> Scorers:
    client = None
    if "bridge" in (config.relevance, config.qgen, config.entail):
        client = BridgeClient(config.bridge_url)
    relevance = LexicalRelevance(index) if config.relevance == "lexical" else BridgeRelevance(client)
    qgen = TemplateGenerator(index) if config.qgen == "template" else BridgeGenerator(client)
    entail = LexicalEntailment(index) if config.entail == "lexical" else BridgeEntailment(client)
    return Scorers(relevance, qgen, entail)


@dataclass
class PipelineResult:
    question: Question
    lines: list[str]
    eqg_dump: dict | None = None
    nugget_warnings: int = 0


def run_pipeline(
    question: Question,
    corpus: Corpus,
    index: InvertedIndex,
    config: PipelineConfig,
    scorers: Scorers | None = None,
    dump_eqg: bool = False,
) -> PipelineResult:
    """Retrieve and rank answers for one question. Deterministic for fixed
    config and baseline scorers; a question matching nothing yields no lines."""
    if scorers is None:
        scorers = build_scorers(config, index)

    ranked_contexts = search_contexts(index, question.text, config.top_contexts)
    candidates = candidate_sentences(corpus, ranked_contexts)
    if not candidates:
        return PipelineResult(question, [])

    scores = scorers.relevance.score_many(question.text, [c.sentence.text for c in candidates])
    top = select_top_sentences(candidates, scores, config.top_sentences)
    answers = [
        RankedAnswer(
            answer=AnswerSpan(c.context_id, c.sentence_index, c.sentence_index),
            sentence_ids=(c.sentence.sentence_id,),
            original_rank=i + 1,
            relevance=score,
        )
        for i, (c, score) in enumerate(top)
    ]

    if not config.rerank:
        lines = [
            format_run_line(question.qid, a, rank, config.run_tag)
            for rank, a in enumerate(answers, start=1)
        ]
        return PipelineResult(question, lines)

    generated = []
    for c, _score in top:
        generated.extend(scorers.qgen.generate(c.sentence, config.generation.k))
        if len(generated) >= config.max_questions_for_eqg:
            break
    generated = generated[: config.max_questions_for_eqg]

    graph = build_eqg(generated, question, scorers.entail, config.eqg)
    components = connected_components(graph)
    nugget_questions = select_nugget_questions(graph, components, config.eqg)
    assignment = assign_nuggets(answers, generated, nugget_questions, components)
    reordered = greedy_rerank(answers, assignment, config.variant)

    lines = [
        format_run_line(question.qid, a, rank, config.run_tag)
        for rank, a in enumerate(reordered, start=1)
    ]
    dump = eqg_to_dict(graph, components, nugget_questions) if dump_eqg else None
    return PipelineResult(question, lines, dump, assignment.skipped)


@dataclass
class BatchResult:
    results: list[PipelineResult] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)  # (qid, error)

    @property
    def lines(self) -> list[str]:
        return [line for r in self.results for line in r.lines]


def run_batch(
    question_set: QuestionSet,
    corpus: Corpus,
    index: InvertedIndex,
    config: PipelineConfig,
    strict: bool = False,
    dump_eqg: bool = False,
) -> BatchResult:
    """Per-question runs concatenated in input order. One question's failure
    never corrupts another's output; with strict=True the first failure
    raises instead of being recorded."""
    scorers = build_scorers(config, index)
    batch = BatchResult()

    def one(question: Question) -> PipelineResult | Exception:
        try:
            return run_pipeline(question, corpus, index, config, scorers, dump_eqg)
        except Exception as exc:  # noqa: BLE001 - isolated per question
            return exc

    if config.workers == 1:
        outcomes = [one(q) for q in question_set.questions]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(one, question_set.questions))

    for question, outcome in zip(question_set.questions, outcomes):
        if isinstance(outcome, Exception):
            if strict:
                raise outcome
            batch.failures.append((question.qid, str(outcome)))
        else:
            batch.results.append(outcome)
    return batch
