"""Document / context / sentence data model and JSONL corpus ingestion.

A corpus is a list of documents; each document holds ordered contexts
(paragraph-sized retrieval units); each context holds ordered sentences
addressed by character offsets into the context text. Answers are spans
of consecutive sentences within a single context.

Corpus JSONL, one document per line::

    {"document_id": str, "title": str,
     "contexts": [{"context_id": str, "text": str,
                   "sentences": [{"sentence_id": str, "start": int, "end": int}]}]}

Sentence text is derived from the context text plus offsets, never stored
redundantly. IDs are opaque strings; no naming convention is enforced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple


class CorpusError(ValueError):
    """Malformed corpus input: bad JSON, duplicate IDs, or invalid offsets."""


@dataclass(frozen=True)
class Sentence:
    sentence_id: str
    text: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class Context:
    context_id: str
    text: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Document:
    document_id: str
    title: str
    contexts: tuple[Context, ...]


@dataclass(frozen=True)
class AnswerSpan:
    """Consecutive sentences [first_sentence, last_sentence] of one context."""

    context_id: str
    first_sentence: int
    last_sentence: int

    @property
    def answer_id(self) -> str:
        return f"{self.context_id}:{self.first_sentence}-{self.last_sentence}"


class SentenceCoord(NamedTuple):
    document_index: int
    context_index: int
    sentence_index: int


@dataclass
class Corpus:
    documents: tuple[Document, ...]
    id_index: dict[str, SentenceCoord] = field(repr=False)
    context_index: dict[str, tuple[int, int]] = field(repr=False)

    @property
    def n_sentences(self) -> int:
        return len(self.id_index)

    def contexts(self) -> Iterable[Context]:
        for doc in self.documents:
            yield from doc.contexts

    def get_context(self, context_id: str) -> Context:
        loc = self.context_index.get(context_id)
        if loc is None:
            raise KeyError(f"unknown context_id: {context_id!r}")
        di, ci = loc
        return self.documents[di].contexts[ci]

    def get_sentence(self, sentence_id: str) -> Sentence:
        coord = self.id_index.get(sentence_id)
        if coord is None:
            raise KeyError(f"unknown sentence_id: {sentence_id!r}")
        return self.documents[coord.document_index].contexts[coord.context_index].sentences[coord.sentence_index]


def _parse_context(obj: dict, line_no: int) -> Context:
    try:
        context_id = obj["context_id"]
        text = obj["text"]
        raw_sentences = obj["sentences"]
    except (KeyError, TypeError) as exc:
        raise CorpusError(f"line {line_no}: context missing field {exc}") from None
    if not raw_sentences:
        raise CorpusError(f"line {line_no}: context {context_id!r} has no sentences")
    sentences = []
    prev_end = 0
    for raw in raw_sentences:
        try:
            sid, start, end = raw["sentence_id"], raw["start"], raw["end"]
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"line {line_no}: sentence missing field {exc}") from None
        if not (0 <= start < end <= len(text)):
            raise CorpusError(
                f"line {line_no}: sentence {sid!r} offsets [{start}, {end}) out of bounds "
                f"for context of length {len(text)}"
            )
        if start < prev_end:
            raise CorpusError(f"line {line_no}: sentence {sid!r} overlaps the previous sentence")
        prev_end = end
        sentences.append(Sentence(sid, text[start:end], start, end))
    return Context(context_id, text, tuple(sentences))


def parse_corpus(stream: IO[str] | Iterable[str]) -> Corpus:
    """Parse JSONL (one document per line) into a Corpus with a populated ID index.

    Raises CorpusError naming the offending line for malformed JSON, duplicate
    document/context/sentence IDs, or sentence offsets out of bounds.
    """
    documents: list[Document] = []
    id_index: dict[str, SentenceCoord] = {}
    context_index: dict[str, tuple[int, int]] = {}
    seen_docs: set[str] = set()

    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {line_no}: malformed JSON ({exc.msg})") from None
        try:
            document_id = obj["document_id"]
            title = obj.get("title", "")
            raw_contexts = obj["contexts"]
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"line {line_no}: document missing field {exc}") from None
        if document_id in seen_docs:
            raise CorpusError(f"line {line_no}: duplicate document_id {document_id!r}")
        seen_docs.add(document_id)

        di = len(documents)
        contexts = []
        for ci, raw_ctx in enumerate(raw_contexts):
            ctx = _parse_context(raw_ctx, line_no)
            if ctx.context_id in context_index:
                raise CorpusError(f"line {line_no}: duplicate context_id {ctx.context_id!r}")
            context_index[ctx.context_id] = (di, ci)
            for si, sent in enumerate(ctx.sentences):
                if sent.sentence_id in id_index:
                    raise CorpusError(f"line {line_no}: duplicate sentence_id {sent.sentence_id!r}")
                id_index[sent.sentence_id] = SentenceCoord(di, ci, si)
            contexts.append(ctx)
        documents.append(Document(document_id, title, tuple(contexts)))

    return Corpus(tuple(documents), id_index, context_index)


def document_to_json(doc: Document) -> str:
    """Serialize one document back to its JSONL line (round-trip safe)."""
    obj = {
        "document_id": doc.document_id,
        "title": doc.title,
        "contexts": [
            {
                "context_id": ctx.context_id,
                "text": ctx.text,
                "sentences": [
                    {"sentence_id": s.sentence_id, "start": s.char_start, "end": s.char_end}
                    for s in ctx.sentences
                ],
            }
            for ctx in doc.contexts
        ],
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def write_corpus(corpus: Corpus, stream: IO[str]) -> None:
    for doc in corpus.documents:
        stream.write(document_to_json(doc))
        stream.write("\n")


def lookup_sentence(corpus: Corpus, sentence_id: str) -> Sentence | None:
    """Return the sentence for an ID, or None when unknown. O(1) expected."""
    coord = corpus.id_index.get(sentence_id)
    if coord is None:
        return None
    return corpus.documents[coord.document_index].contexts[coord.context_index].sentences[coord.sentence_index]


def resolve_span(corpus: Corpus, span: AnswerSpan) -> str:
    """Concatenate the span's sentence texts, joined by a single space.

    Original inter-sentence whitespace is not preserved: answers are
    evaluated as sentence sets, not byte ranges.
    """
    if span.last_sentence < span.first_sentence:
        raise ValueError(f"span {span.answer_id}: last_sentence < first_sentence")
    ctx = corpus.get_context(span.context_id)
    if span.first_sentence < 0 or span.last_sentence >= len(ctx.sentences):
        raise IndexError(
            f"span {span.answer_id}: sentence index out of range "
            f"(context has {len(ctx.sentences)} sentences)"
        )
    return " ".join(s.text for s in ctx.sentences[span.first_sentence : span.last_sentence + 1])


def span_sentence_ids(corpus: Corpus, span: AnswerSpan) -> tuple[str, ...]:
    """Sentence IDs covered by a span, in order."""
    if span.last_sentence < span.first_sentence:
        raise ValueError(f"span {span.answer_id}: last_sentence < first_sentence")
    ctx = corpus.get_context(span.context_id)
    if span.first_sentence < 0 or span.last_sentence >= len(ctx.sentences):
        raise IndexError(f"span {span.answer_id}: sentence index out of range")
    return tuple(s.sentence_id for s in ctx.sentences[span.first_sentence : span.last_sentence + 1])
