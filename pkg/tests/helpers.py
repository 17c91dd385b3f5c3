"""Shared fixture builders for the test suite."""

from __future__ import annotations

import io
import json

from equnova.corpus import Corpus, parse_corpus
from equnova.eqg import Component, NuggetQuestion
from equnova.rerank import NuggetAssignment, RankedAnswer, assign_nuggets
from equnova.corpus import AnswerSpan
from equnova.scoring import GeneratedQuestion

DocSpec = tuple[str, str, list[tuple[str, list[str]]]]


def corpus_jsonl(docs: list[DocSpec]) -> str:
    """Build corpus JSONL from (document_id, title, [(context_id, [sentence texts])]).

    Context text is the sentences joined by a single space; offsets are
    computed accordingly.
    """
    lines = []
    for document_id, title, contexts in docs:
        ctx_objs = []
        for context_id, sentences in contexts:
            text = " ".join(sentences)
            sent_objs = []
            pos = 0
            for i, s in enumerate(sentences):
                start = text.index(s, pos)
                end = start + len(s)
                pos = end
                sent_objs.append({"sentence_id": f"{context_id}-S{i}", "start": start, "end": end})
            ctx_objs.append({"context_id": context_id, "text": text, "sentences": sent_objs})
        lines.append(json.dumps({"document_id": document_id, "title": title, "contexts": ctx_objs}))
    return "\n".join(lines) + "\n" if lines else ""


def corpus_from(docs: list[DocSpec]) -> Corpus:
    return parse_corpus(io.StringIO(corpus_jsonl(docs)))


COVID_DOCS: list[DocSpec] = [
    (
        "D1",
        "Origins of COVID-19",
        [
            (
                "D1-C0",
                [
                    "The origin of COVID-19 was Wuhan City.",
                    "Early cases appeared at the Huanan Seafood Market in Wuhan.",
                ],
            ),
            (
                "D1-C1",
                [
                    "Bats carried the virus before it reached humans.",
                ],
            ),
        ],
    ),
    (
        "D2",
        "Tracing the outbreak",
        [
            (
                "D2-C0",
                [
                    "The origin of COVID-19 was animals, and the origin was traced to Wuhan Province.",
                    "The spread of COVID-19 was fastest indoors.",
                ],
            ),
        ],
    ),
    (
        "D3",
        "Vaccine trials",
        [
            (
                "D3-C0",
                [
                    "Clinical trials enrolled 30000 participants.",
                    "The trials enrolled 500 participants at first.",
                ],
            ),
        ],
    ),
]

COVID_QUESTIONS = [
    {"qid": "q1", "text": "What was the origin of COVID-19?"},
    {"qid": "q2", "text": "How many participants were enrolled in the trials?"},
]

COVID_JUDGMENTS = """\
# fixture judgments
q1 D1-C0-S0 origin-wuhan
q1 D2-C0-S0 origin-wuhan
q1 D1-C1-S0 origin-bats
q2 D3-C0-S0 trial-30000
q2 D3-C0-S1 trial-500
"""


def questions_jsonl() -> str:
    return "\n".join(json.dumps(q) for q in COVID_QUESTIONS) + "\n"


def worked_example() -> tuple[list[RankedAnswer], NuggetAssignment]:
    """Five relevance-ranked answers: a5 carries three novel nuggets, a3 and
    a4 share the one remaining nugget, a1 and a2 carry none."""
    answers = [
        RankedAnswer(AnswerSpan("CTX", i, i), (f"CTX-S{i}",), i + 1, relevance=1.0 - 0.1 * i)
        for i in range(5)
    ]  # answers[i] is a_{i+1}; single sentence CTX-S{i}
    gq = {
        "g5a": GeneratedQuestion("g5a", "Who found the first nugget?", "CTX-S4", "first"),
        "g5b": GeneratedQuestion("g5b", "Who found the second nugget?", "CTX-S4", "second"),
        "g5c": GeneratedQuestion("g5c", "Who found the third nugget?", "CTX-S4", "third"),
        "g3": GeneratedQuestion("g3", "Where is the shared nugget?", "CTX-S2", "shared"),
        "g4": GeneratedQuestion("g4", "Where is that shared nugget?", "CTX-S3", "shared"),
    }
    components = [
        Component(0, frozenset({"g3", "g4"})),
        Component(1, frozenset({"g5a"})),
        Component(2, frozenset({"g5b"})),
        Component(3, frozenset({"g5c"})),
    ]
    nugget_questions = [
        NuggetQuestion(gq["g3"], 0, 2, 1.0),
        NuggetQuestion(gq["g4"], 0, 2, 1.0),
        NuggetQuestion(gq["g5a"], 1, 0, 1.0),
        NuggetQuestion(gq["g5b"], 2, 0, 1.0),
        NuggetQuestion(gq["g5c"], 3, 0, 1.0),
    ]
    assignment = assign_nuggets(answers, list(gq.values()), nugget_questions, components)
    return answers, assignment
