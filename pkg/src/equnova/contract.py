"""Behavioral contract checks for scorer ports.

Every backend (lexical baseline or bridge) must pass these. Each check
raises AssertionError on violation; call them from a test suite with any
port implementation and a few representative sentences.
"""

from __future__ import annotations

from .corpus import Sentence
from .scoring import EntailmentScorer, QuestionGenerator, RelevanceScorer


def check_relevance_scorer(scorer: RelevanceScorer, question: str, sentences: list[str]) -> None:
    scores = scorer.score_many(question, sentences)
    assert len(scores) == len(sentences), "score_many must align with its input"
    again = scorer.score_many(question, sentences)
    assert scores == again, "relevance scoring must be deterministic"
    for text, score in zip(sentences, scores):
        assert 0.0 <= score <= 1.0, f"score {score} for {text!r} outside [0, 1]"
        assert scorer.score(question, text) == score, "score and score_many must agree"
    assert scorer.score(question, question) == 1.0, "identical texts must score 1.0"


def check_entailment_scorer(scorer: EntailmentScorer, questions: list[str]) -> None:
    pairs = [(p, h) for p in questions for h in questions]
    probs = scorer.score_pairs(pairs)
    assert len(probs) == len(pairs), "score_pairs must align with its input"
    assert probs == scorer.score_pairs(pairs), "entailment scoring must be deterministic"
    for (p, h), prob in zip(pairs, probs):
        assert 0.0 <= prob <= 1.0, f"probability {prob} for {(p, h)!r} outside [0, 1]"
        assert scorer.score(p, h) == prob, "score and score_pairs must agree"
        if p == h:
            assert prob == 1.0, f"identity pair {p!r} must score 1.0, got {prob}"


def check_question_generator(generator: QuestionGenerator, sentence: Sentence, k: int) -> None:
    questions = generator.generate(sentence, k)
    assert len(questions) <= k, f"generator returned {len(questions)} questions for k={k}"
    repeat = generator.generate(sentence, k)
    assert [(q.text, q.answer_snippet) for q in questions] == [
        (q.text, q.answer_snippet) for q in repeat
    ], "generation must be deterministic"
    for q in questions:
        assert q.text.strip(), "generated question text must be non-empty"
        assert q.source_sentence == sentence.sentence_id, "source_sentence must be set"
        assert q.answer_snippet, "answer snippet must be non-empty"
        assert q.answer_snippet in sentence.text, (
            f"snippet {q.answer_snippet!r} is not a substring of the sentence"
        )
