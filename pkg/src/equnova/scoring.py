"""Pluggable scoring contracts and their deterministic lexical baselines.

Three ports drive the pipeline: sentence relevance, question generation,
and question entailment. Neural backends are reachable only through the
HTTP bridge (see bridge_client); the baselines here are pure functions of
their inputs and an inverted index, so the whole pipeline runs end-to-end
without any model weights.

Baseline rules, exactly as implemented:

Relevance (idf-weighted overlap)
    score = sum(idf(t) for distinct question terms t also in the sentence)
          / sum(idf(t) for distinct question terms t),
    clamped to [0, 1]. Terms come from the index tokenizer (stopwords
    removed, no stemming); idf is the index's BM25 idf.

Entailment (directional coverage with wh-class gate)
    Hypothesis content terms = distinct tokens minus wh-words. Coverage is
    the idf-weighted fraction of those terms present in the premise's
    tokens. The wh-class of a question is the class of its first wh-word
    (what/which share one class; who/whom/whose another; where, when, why,
    how each their own; no wh-word = "none"). Mismatched classes multiply
    the coverage by 0.5. Result clamped to [0, 1].

Question templates (per sentence, emitted in this order, cut at k)
    1. Entity runs: maximal runs of consecutive capitalized, non-stopword
       tokens. A run that is only the sentence's first token is kept only
       if that token is an all-caps acronym (>= 2 chars). If the token
       before the run is a locative preposition the question is
       "Where ...?", otherwise "Who ...?"; the question body is every
       other token of the sentence, lowercased; the answer snippet is the
       run's original substring. Runs whose removal leaves no content
       token produce nothing.
    2. Numeric tokens (digits only): "How many ...?" with the same body
       rule and the numeric token as snippet.
    3. Only if 1 and 2 produced nothing: one "What ...?" question about
       the highest-idf content term (longest term when no index is
       available; ties broken by earliest occurrence). If the term is the
       sentence's only content token the text is "What is <term>?".
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

from .corpus import Sentence
from .index import InvertedIndex, IndexConfig, raw_tokens, tokenize

WH_CLASSES = {
    "what": "what",
    "which": "what",
    "who": "who",
    "whom": "who",
    "whose": "who",
    "where": "where",
    "when": "when",
    "why": "why",
    "how": "how",
}

LOCATIVE_PREPOSITIONS = frozenset(
    {"from", "in", "at", "to", "into", "near", "within", "across", "throughout", "on"}
)


@dataclass(frozen=True)
class Question:
    qid: str
    text: str

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError(f"question {self.qid!r} has empty text")


@dataclass(frozen=True)
class GeneratedQuestion:
    """A question synthesized from one candidate sentence.

    answer_snippet must be a substring of the source sentence's text;
    generators guarantee this, the bridge adapter enforces it.
    """

    gqid: str
    text: str
    source_sentence: str
    answer_snippet: str


@dataclass(frozen=True)
class GenerationConfig:
    k: int = 3

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class EntailmentScore:
    """Directional: premise entails hypothesis with this probability."""

    premise_id: str
    hypothesis_id: str
    probability: float


class RelevanceScorer(ABC):
    """Scores a sentence against a question; higher = more relevant."""

    @abstractmethod
    def score(self, question_text: str, sentence_text: str) -> float: ...

    def score_many(self, question_text: str, sentence_texts: Sequence[str]) -> list[float]:
        return [self.score(question_text, s) for s in sentence_texts]


class QuestionGenerator(ABC):
    @abstractmethod
    def generate(self, sentence: Sentence, k: int) -> list[GeneratedQuestion]: ...


class EntailmentScorer(ABC):
    """Directional entailment probability in [0, 1]; not assumed symmetric."""

    @abstractmethod
    def score(self, premise: str, hypothesis: str) -> float: ...

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [self.score(p, h) for p, h in pairs]


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def wh_class(tokens: Sequence[str]) -> str:
    """Class of the first wh-word in a token sequence, or "none"."""
    for t in tokens:
        cls = WH_CLASSES.get(t.lower())
        if cls is not None:
            return cls
    return "none"


def lexical_relevance(question_text: str, sentence_text: str, index: InvertedIndex) -> float:
    """Idf-weighted token overlap between question and sentence (see module doc)."""
    q_terms = tokenize(question_text, index.config)
    if not q_terms:
        raise ValueError(f"empty query: {question_text!r} has no indexable terms")
    q_unique = dict.fromkeys(q_terms)
    s_terms = set(tokenize(sentence_text, index.config))
    q_mass = sum(index.idf(t) for t in q_unique)
    shared = sum(index.idf(t) for t in q_unique if t in s_terms)
    return _clamp(shared / q_mass)


class LexicalRelevance(RelevanceScorer):
    def __init__(self, index: InvertedIndex):
        self._index = index

    def score(self, question_text: str, sentence_text: str) -> float:
        return lexical_relevance(question_text, sentence_text, self._index)


def lexical_entailment(premise: str, hypothesis: str, index: InvertedIndex) -> float:
    """Idf-weighted coverage of hypothesis content terms, wh-class gated."""
    p_tokens = tokenize(premise, index.config)
    h_tokens = tokenize(hypothesis, index.config)
    h_content = [t for t in dict.fromkeys(h_tokens) if t.lower() not in WH_CLASSES]
    if not h_content:
        raise ValueError(f"hypothesis has no content tokens: {hypothesis!r}")
    p_content = {t for t in p_tokens if t.lower() not in WH_CLASSES}
    mass = sum(index.idf(t) for t in h_content)
    covered = sum(index.idf(t) for t in h_content if t in p_content)
    score = covered / mass
    if wh_class(p_tokens) != wh_class(h_tokens):
        score *= 0.5
    return _clamp(score)


class LexicalEntailment(EntailmentScorer):
    def __init__(self, index: InvertedIndex):
        self._index = index

    def score(self, premise: str, hypothesis: str) -> float:
        return lexical_entailment(premise, hypothesis, self._index)


def select_top_sentences(candidates: list, scores: list[float], limit: int = 1000) -> list[tuple]:
    """Stable partial sort: (candidate, score) by score descending, input order
    on ties, truncated to limit."""
    if len(candidates) != len(scores):
        raise ValueError(f"{len(candidates)} candidates but {len(scores)} scores")
    order = sorted(range(len(candidates)), key=lambda i: (-scores[i], i))
    return [(candidates[i], scores[i]) for i in order[:limit]]


def _is_numeric(token: str) -> bool:
    return token.isdigit()


def _is_capitalized(token: str) -> bool:
    return token[0].isupper()


def template_generate(
    sentence: Sentence,
    k: int,
    index: InvertedIndex | None = None,
    config: IndexConfig = IndexConfig(),
) -> list[GeneratedQuestion]:
    """Rule-based question generation; rules in the module docstring.

    Deterministic; emits at most k questions with gqids
    ``<sentence_id>-Q<n>``. A sentence with no content tokens yields [].
    """
    if index is not None:
        config = index.config
    tokens = raw_tokens(sentence.text)
    candidates: list[tuple[str, str]] = []  # (question text, snippet)

    def is_stop(tok: str) -> bool:
        return (tok.lower() if config.lowercase else tok) in config.stopwords

    def body(excluded: set[int]) -> tuple[str, bool]:
        kept = [t.lower() for i, (t, _, _) in enumerate(tokens) if i not in excluded]
        has_content = any(not is_stop(t) and t not in WH_CLASSES for t in kept)
        return " ".join(kept), has_content

    # 1. capitalized entity runs
    runs: list[tuple[int, int]] = []  # [start_token, end_token) index ranges
    i = 0
    while i < len(tokens):
        tok = tokens[i][0]
        if _is_capitalized(tok) and not is_stop(tok) and not _is_numeric(tok):
            j = i + 1
            while j < len(tokens):
                nxt = tokens[j][0]
                if _is_capitalized(nxt) and not is_stop(nxt) and not _is_numeric(nxt):
                    j += 1
                else:
                    break
            first_only = i == 0 and j == 1
            acronym = tokens[i][0].isupper() and len(tokens[i][0]) >= 2
            if not first_only or acronym:
                runs.append((i, j))
            i = j
        else:
            i += 1
    for start, end in runs:
        text, ok = body(set(range(start, end)))
        if not ok:
            continue
        prev = tokens[start - 1][0].lower() if start > 0 else ""
        wh = "Where" if prev in LOCATIVE_PREPOSITIONS else "Who"
        snippet = sentence.text[tokens[start][1] : tokens[end - 1][2]]
        candidates.append((f"{wh} {text}?", snippet))

    # 2. numeric tokens
    for i, (tok, start, end) in enumerate(tokens):
        if not _is_numeric(tok):
            continue
        text, ok = body({i})
        if not ok:
            continue
        candidates.append((f"How many {text}?", sentence.text[start:end]))

    # 3. fallback "what" question from the highest-idf content term
    if not candidates:
        content = [
            (i, tok)
            for i, (tok, _, _) in enumerate(tokens)
            if not is_stop(tok) and tok.lower() not in WH_CLASSES and not _is_numeric(tok)
        ]
        if content:
            if index is not None:
                best_i, best_tok = max(
                    content, key=lambda it: (index.idf(it[1].lower() if config.lowercase else it[1]), -it[0])
                )
            else:
                best_i, best_tok = max(content, key=lambda it: (len(it[1]), -it[0]))
            text, ok = body({best_i})
            snippet = sentence.text[tokens[best_i][1] : tokens[best_i][2]]
            if ok:
                candidates.append((f"What {text}?", snippet))
            else:
                candidates.append((f"What is {best_tok.lower()}?", snippet))

    return [
        GeneratedQuestion(f"{sentence.sentence_id}-Q{n}", text, sentence.sentence_id, snippet)
        for n, (text, snippet) in enumerate(candidates[:k])
    ]


class TemplateGenerator(QuestionGenerator):
    def __init__(self, index: InvertedIndex | None = None, config: IndexConfig = IndexConfig()):
        self._index = index
        self._config = index.config if index is not None else config

    def generate(self, sentence: Sentence, k: int) -> list[GeneratedQuestion]:
        return template_generate(sentence, k, self._index, self._config)
