"""Inverted index over contexts with Okapi BM25 scoring.

One indexed unit per context. Scoring uses the non-negative idf

    idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))

and the Okapi term saturation

    score(q, d) = sum over query terms of
        idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(d) / avglen))

Query terms are summed with multiplicity (a term listed twice contributes
twice). Terms absent from the context contribute 0. The index is immutable
once built; concurrent searches need no coordination.
"""

from __future__ import annotations

import json
import math
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import IO

from .corpus import Corpus, Sentence

# Lucene's classic English stopword list (33 words).
DEFAULT_STOPWORDS = frozenset(
    """a an and are as at be but by for if in into is it no not of on or such
    that the their then there these they this to was will with""".split()
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

INDEX_FORMAT = "equnova-index"
INDEX_VERSION = 1


@dataclass(frozen=True)
class IndexConfig:
    k1: float = 1.2
    b: float = 0.75
    lowercase: bool = True
    stopwords: frozenset[str] = DEFAULT_STOPWORDS

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


def tokenize(text: str, config: IndexConfig = IndexConfig()) -> list[str]:
    """Split on non-alphanumeric runs (Unicode-aware), lowercase, drop stopwords.

    Stopwords are matched against the token after case handling, so with
    lowercasing disabled only exact-case stopwords are removed.
    """
    tokens = _TOKEN_RE.findall(text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    return [t for t in tokens if t not in config.stopwords]


def raw_tokens(text: str) -> list[tuple[str, int, int]]:
    """Tokens with their [start, end) offsets, original casing preserved."""
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass
class InvertedIndex:
    config: IndexConfig
    context_ids: list[str]
    doc_lengths: list[int]
    # term -> [(context ordinal, term frequency)], ordinals ascending
    postings: dict[str, list[tuple[int, int]]] = field(repr=False)

    @property
    def n_contexts(self) -> int:
        return len(self.context_ids)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths) / len(self.doc_lengths)

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        df = self.df(term)
        return math.log(1.0 + (self.n_contexts - df + 0.5) / (df + 0.5))

    def tf(self, term: str, ordinal: int) -> int:
        plist = self.postings.get(term)
        if not plist:
            return 0
        i = bisect_left(plist, (ordinal, 0))
        if i < len(plist) and plist[i][0] == ordinal:
            return plist[i][1]
        return 0


@dataclass(frozen=True)
class ScoredContext:
    context_id: str
    score: float


def build_index(corpus: Corpus, config: IndexConfig = IndexConfig()) -> InvertedIndex:
    """Index every context of the corpus, in document order. Deterministic."""
    context_ids: list[str] = []
    doc_lengths: list[int] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    for ctx in corpus.contexts():
        ordinal = len(context_ids)
        context_ids.append(ctx.context_id)
        terms = tokenize(ctx.text, config)
        doc_lengths.append(len(terms))
        counts: dict[str, int] = {}
        for t in terms:
            counts[t] = counts.get(t, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((ordinal, tf))
    return InvertedIndex(config, context_ids, doc_lengths, postings)


def bm25_score(index: InvertedIndex, query_terms: list[str], ordinal: int) -> float:
    """BM25 score of one context for a tokenized query."""
    if not 0 <= ordinal < index.n_contexts:
        raise IndexError(f"context ordinal {ordinal} out of range (n={index.n_contexts})")
    k1, b = index.config.k1, index.config.b
    avglen = index.avg_doc_length
    norm = 1.0 - b + b * index.doc_lengths[ordinal] / avglen if avglen > 0 else 1.0
    score = 0.0
    for term in query_terms:
        tf = index.tf(term, ordinal)
        if tf == 0:
            continue
        score += index.idf(term) * tf * (k1 + 1.0) / (tf + k1 * norm)
    return score


def search_contexts(index: InvertedIndex, question: str, top_n: int) -> list[ScoredContext]:
    """Top contexts for a question, score descending, ties by ascending ordinal."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    query_terms = tokenize(question, index.config)
    k1, b = index.config.k1, index.config.b
    avglen = index.avg_doc_length
    accum: dict[int, float] = {}
    for term in query_terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for ordinal, tf in plist:
            norm = 1.0 - b + b * index.doc_lengths[ordinal] / avglen if avglen > 0 else 1.0
            accum[ordinal] = accum.get(ordinal, 0.0) + idf * tf * (k1 + 1.0) / (tf + k1 * norm)
    ranked = sorted(
        ((ordinal, score) for ordinal, score in accum.items() if score > 0.0),
        key=lambda item: (-item[1], item[0]),
    )
    return [ScoredContext(index.context_ids[o], s) for o, s in ranked[:top_n]]


@dataclass(frozen=True)
class CandidateSentence:
    """A sentence expanded from a ranked context, carrying its parent's score."""

    sentence: Sentence
    context_id: str
    sentence_index: int
    context_score: float


def candidate_sentences(corpus: Corpus, ranked: list[ScoredContext]) -> list[CandidateSentence]:
    """All sentences of the ranked contexts, in context-rank then sentence order.

    Deduplicates by sentence_id (IDs are globally unique, so this only
    matters if the same context appears twice in the ranking).
    """
    out: list[CandidateSentence] = []
    seen: set[str] = set()
    for sc in ranked:
        ctx = corpus.get_context(sc.context_id)
        for i, sent in enumerate(ctx.sentences):
            if sent.sentence_id in seen:
                continue
            seen.add(sent.sentence_id)
            out.append(CandidateSentence(sent, ctx.context_id, i, sc.score))
    return out


def save_index(index: InvertedIndex, stream: IO[str]) -> None:
    """Persist as canonical JSON: same corpus + config => byte-identical file."""
    payload = {
        "format": INDEX_FORMAT,
        "version": INDEX_VERSION,
        "config": {
            "k1": index.config.k1,
            "b": index.config.b,
            "lowercase": index.config.lowercase,
            "stopwords": sorted(index.config.stopwords),
        },
        "context_ids": index.context_ids,
        "doc_lengths": index.doc_lengths,
        "postings": {term: [list(p) for p in plist] for term, plist in index.postings.items()},
    }
    json.dump(payload, stream, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def load_index(stream: IO[str]) -> InvertedIndex:
    payload = json.load(stream)
    if payload.get("format") != INDEX_FORMAT:
        raise ValueError("not an equnova index file")
    if payload.get("version") != INDEX_VERSION:
        raise ValueError(f"unsupported index version {payload.get('version')!r}")
    cfg = payload["config"]
    config = IndexConfig(
        k1=cfg["k1"],
        b=cfg["b"],
        lowercase=cfg["lowercase"],
        stopwords=frozenset(cfg["stopwords"]),
    )
    postings = {
        term: [(int(o), int(tf)) for o, tf in plist]
        for term, plist in payload["postings"].items()
    }
    return InvertedIndex(config, payload["context_ids"], payload["doc_lengths"], postings)
