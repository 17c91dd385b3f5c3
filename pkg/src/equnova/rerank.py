"""Novelty scoring and greedy novelty re-ranking of answer candidates.

An answer's novelty score is

    NS = #(# + 1) / (# + SF)

where # is the number of its nuggets not yet seen in earlier-placed
answers and SF penalizes the answer's sentence composition:

    relaxed  SF = #na + #sn + min(#nn, 1)   (only novel-nugget sentences wanted)
    partial  SF = #na + min(#nn, 1)         (no nugget-free sentences wanted)
    exact    SF = #na + #sn + #nn           (short answers wanted)

with #na = sentences carrying no nuggets, #sn = sentences whose nuggets
are all seen, #nn = sentences with at least one novel nugget. NS is 0
when # is 0.

In the pipeline, nugget identity is the EQG component id of a selected
nugget question: an answer contains a nugget when one of its generated
questions belongs to that component. The greedy re-ranker repeatedly
places the unplaced answer with the highest NS (ties go to the better
original rank), accumulating its nuggets into the seen set, which leaves
nugget-free answers at the tail in their original relative order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .corpus import AnswerSpan
from .eqg import Component, NuggetQuestion
from .scoring import GeneratedQuestion


class Variant(str, Enum):
    RELAXED = "relaxed"
    PARTIAL = "partial"
    EXACT = "exact"


@dataclass(frozen=True)
class NoveltyCounts:
    novel: int  # nuggets of the answer not in the seen set
    no_nugget_sentences: int
    seen_nugget_sentences: int
    novel_nugget_sentences: int

    def __post_init__(self) -> None:
        for name in ("novel", "no_nugget_sentences", "seen_nugget_sentences", "novel_nugget_sentences"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def novelty_score(counts: NoveltyCounts, variant: Variant) -> float:
    na = counts.no_nugget_sentences
    sn = counts.seen_nugget_sentences
    nn = counts.novel_nugget_sentences
    if variant == Variant.RELAXED:
        sf = na + sn + min(nn, 1)
    elif variant == Variant.PARTIAL:
        sf = na + min(nn, 1)
    else:
        sf = na + sn + nn
    n = counts.novel
    if n == 0:
        return 0.0
    return n * (n + 1) / (n + sf)


@dataclass(frozen=True)
class RankedAnswer:
    answer: AnswerSpan
    sentence_ids: tuple[str, ...]
    original_rank: int  # 1-based, unique
    relevance: float
    final_rank: int | None = None
    novelty: float | None = None  # NS at selection time, set by greedy_rerank

    @property
    def answer_id(self) -> str:
        return self.answer.answer_id


@dataclass
class NuggetAssignment:
    """Which nuggets each answer contains, by answer id and by sentence id.

    provenance records, per nugget, the (answer_id, answer_snippet) pairs of
    the generated questions that asked for it. skipped counts generated
    questions whose source sentence was not among the candidates.
    """

    by_answer: dict[str, frozenset[int]] = field(default_factory=dict)
    per_sentence: dict[str, frozenset[int]] = field(default_factory=dict)
    provenance: dict[int, list[tuple[str, str]]] = field(default_factory=dict)
    skipped: int = 0

    def nuggets_of(self, answer_id: str) -> frozenset[int]:
        return self.by_answer.get(answer_id, frozenset())


def assign_nuggets(
    answers: list[RankedAnswer],
    generated: list[GeneratedQuestion],
    nugget_questions: list[NuggetQuestion],
    components: list[Component],
) -> NuggetAssignment:
    """Answer A contains nugget C iff a question generated from one of A's
    sentences belongs to component C and C has a selected nugget question."""
    selected = {nq.component_id for nq in nugget_questions}
    comp_of: dict[str, int] = {}
    for comp in components:
        for gqid in comp.members:
            comp_of[gqid] = comp.component_id

    answer_of_sentence: dict[str, str] = {}
    for a in answers:
        for sid in a.sentence_ids:
            answer_of_sentence[sid] = a.answer_id

    by_answer: dict[str, set[int]] = {a.answer_id: set() for a in answers}
    per_sentence: dict[str, set[int]] = {}
    provenance: dict[int, list[tuple[str, str]]] = {}
    skipped = 0
    for g in generated:
        cid = comp_of.get(g.gqid)
        if cid is None or cid not in selected:
            continue
        answer_id = answer_of_sentence.get(g.source_sentence)
        if answer_id is None:
            skipped += 1
            continue
        by_answer[answer_id].add(cid)
        per_sentence.setdefault(g.source_sentence, set()).add(cid)
        provenance.setdefault(cid, []).append((answer_id, g.answer_snippet))

    return NuggetAssignment(
        by_answer={k: frozenset(v) for k, v in by_answer.items()},
        per_sentence={k: frozenset(v) for k, v in per_sentence.items()},
        provenance=provenance,
        skipped=skipped,
    )


def novelty_counts(
    answer: RankedAnswer, assignment: NuggetAssignment, seen: set[int]
) -> NoveltyCounts:
    nuggets = assignment.nuggets_of(answer.answer_id)
    na = sn = nn = 0
    for sid in answer.sentence_ids:
        s_nuggets = assignment.per_sentence.get(sid, frozenset())
        if not s_nuggets:
            na += 1
        elif s_nuggets <= seen:
            sn += 1
        else:
            nn += 1
    return NoveltyCounts(len(nuggets - seen), na, sn, nn)


def greedy_rerank(
    answers: list[RankedAnswer], assignment: NuggetAssignment, variant: Variant
) -> list[RankedAnswer]:
    """Repeatedly place the unplaced answer with the highest NS under the
    current seen set; ties favor the lower original_rank. Returns a
    permutation of the input with final_rank and selection-time novelty set.
    """
    unplaced = list(answers)
    seen: set[int] = set()
    out: list[RankedAnswer] = []
    while unplaced:
        best_i = 0
        best_ns = -1.0
        for i, a in enumerate(unplaced):
            ns = novelty_score(novelty_counts(a, assignment, seen), variant)
            if ns > best_ns or (ns == best_ns and a.original_rank < unplaced[best_i].original_rank):
                best_i, best_ns = i, ns
        chosen = unplaced.pop(best_i)
        out.append(replace(chosen, final_rank=len(out) + 1, novelty=best_ns))
        seen |= assignment.nuggets_of(chosen.answer_id)
    return out


def dcg_discount(rank: int) -> float:
    """Standard NDCG discount, 1-based rank."""
    return 1.0 / math.log2(rank + 1)


def format_run_line(question_id: str, answer: RankedAnswer, rank: int, run_tag: str) -> str:
    """One run-file record. The score column is the answer's NS at selection
    time, or its relevance for the zero-NS tail."""
    score = answer.novelty if answer.novelty is not None and answer.novelty > 0.0 else answer.relevance
    return f"{question_id} Q0 {answer.answer_id} {rank} {score:.6f} {run_tag}"
