"""NDNS evaluator: scores ranked runs against per-sentence nugget judgments.

Per question, answers are scored in run order with the novelty score from
the rerank module (a nugget is novel if no earlier-ranked answer carried
it), discounted at 1/log2(rank + 1) and summed into a DCG. The normalizer
IDCG is the DCG of the greedy ideal ordering over the union of the run's
answers and every judged sentence taken as a single-sentence answer, so a
run cannot inflate its score by omitting judged material. NDNS = DCG/IDCG,
or 0 when the pool has no nuggets at all.

Judgments file: whitespace-separated ``question_id sentence_id nugget_label``
lines; ``#`` starts a comment. Run file: as emitted by the pipeline,
``question_id Q0 context_id:first-last rank score run_tag``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable

from .corpus import AnswerSpan, Corpus
from .rerank import NoveltyCounts, Variant, dcg_discount, novelty_score


@dataclass
class Judgments:
    # question_id -> sentence_id -> nugget labels
    by_question: dict[str, dict[str, frozenset[str]]] = field(default_factory=dict)

    def for_question(self, question_id: str) -> dict[str, frozenset[str]]:
        return self.by_question.get(question_id, {})

    @property
    def question_ids(self) -> list[str]:
        return sorted(self.by_question)


def load_judgments(stream: IO[str] | Iterable[str]) -> Judgments:
    acc: dict[str, dict[str, set[str]]] = {}
    for line_no, line in enumerate(stream, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        fields = text.split()
        if len(fields) != 3:
            raise ValueError(
                f"judgments line {line_no}: expected 'question_id sentence_id nugget_label', "
                f"got {len(fields)} fields"
            )
        qid, sid, label = fields
        acc.setdefault(qid, {}).setdefault(sid, set()).add(label)
    return Judgments(
        {qid: {sid: frozenset(labels) for sid, labels in sids.items()} for qid, sids in acc.items()}
    )


@dataclass(frozen=True)
class RunLine:
    question_id: str
    span: AnswerSpan
    rank: int
    score: float
    run_tag: str
    line_no: int


def parse_span(token: str) -> AnswerSpan:
    ctx, _, indices = token.rpartition(":")
    first_s, sep, last_s = indices.partition("-")
    if not ctx or not sep:
        raise ValueError(f"bad answer span {token!r}, expected context_id:first-last")
    try:
        first, last = int(first_s), int(last_s)
    except ValueError:
        raise ValueError(f"bad answer span {token!r}: indices must be integers") from None
    return AnswerSpan(ctx, first, last)


def load_run(stream: IO[str] | Iterable[str]) -> dict[str, list[RunLine]]:
    """Run lines grouped by question, ordered by rank (file order on ties)."""
    runs: dict[str, list[RunLine]] = {}
    for line_no, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        fields = text.split()
        if len(fields) != 6:
            raise ValueError(f"run line {line_no}: expected 6 fields, got {len(fields)}")
        qid, _q0, span_token, rank_s, score_s, tag = fields
        try:
            rank, score = int(rank_s), float(score_s)
        except ValueError:
            raise ValueError(f"run line {line_no}: bad rank or score") from None
        runs.setdefault(qid, []).append(
            RunLine(qid, parse_span(span_token), rank, score, tag, line_no)
        )
    for lines in runs.values():
        lines.sort(key=lambda rl: (rl.rank, rl.line_no))
    return runs


@dataclass(frozen=True)
class PooledAnswer:
    answer_id: str
    sentence_ids: tuple[str, ...]


def _counts(sentence_ids: tuple[str, ...], judged: dict[str, frozenset[str]], seen: set[str]) -> NoveltyCounts:
    nuggets: set[str] = set()
    na = sn = nn = 0
    for sid in sentence_ids:
        s_nuggets = judged.get(sid, frozenset())
        nuggets |= s_nuggets
        if not s_nuggets:
            na += 1
        elif s_nuggets <= seen:
            sn += 1
        else:
            nn += 1
    return NoveltyCounts(len(nuggets - seen), na, sn, nn)


def _answer_nuggets(sentence_ids: tuple[str, ...], judged: dict[str, frozenset[str]]) -> set[str]:
    out: set[str] = set()
    for sid in sentence_ids:
        out |= judged.get(sid, frozenset())
    return out


def ideal_ranking(
    pool: list[PooledAnswer], judged: dict[str, frozenset[str]], variant: Variant
) -> list[PooledAnswer]:
    """Greedy max-NS ordering; ties (and the zero-NS tail) by answer id."""
    unplaced = sorted(pool, key=lambda a: a.answer_id)
    seen: set[str] = set()
    out: list[PooledAnswer] = []
    while unplaced:
        best_i = 0
        best_ns = -1.0
        for i, a in enumerate(unplaced):
            ns = novelty_score(_counts(a.sentence_ids, judged, seen), variant)
            if ns > best_ns:
                best_i, best_ns = i, ns
        chosen = unplaced.pop(best_i)
        out.append(chosen)
        seen |= _answer_nuggets(chosen.sentence_ids, judged)
    return out


def dcg_of_ordering(ordering: list[PooledAnswer], judged: dict[str, frozenset[str]], variant: Variant) -> float:
    seen: set[str] = set()
    total = 0.0
    for rank, a in enumerate(ordering, start=1):
        total += novelty_score(_counts(a.sentence_ids, judged, seen), variant) * dcg_discount(rank)
        seen |= _answer_nuggets(a.sentence_ids, judged)
    return total


@dataclass
class QuestionResult:
    question_id: str
    ndns: dict[str, float]  # variant value -> score
    trace: list[dict]  # per run answer, for the selected variant
    unresolvable: int


@dataclass
class EvalReport:
    variant: Variant
    per_question: dict[str, dict[str, float]]
    mean: dict[str, float]
    traces: dict[str, list[dict]]
    unresolvable: int

    def to_json(self) -> str:
        payload = {
            "variant": self.variant.value,
            "per_question": self.per_question,
            "mean": self.mean,
            "unresolvable_answers": self.unresolvable,
            "traces": self.traces,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_table(self) -> str:
        headers = ["question", "ndns-relaxed", "ndns-partial", "ndns-exact"]
        rows = [
            [qid, *(f"{self.per_question[qid][v.value]:.4f}" for v in Variant)]
            for qid in sorted(self.per_question)
        ]
        rows.append(["mean", *(f"{self.mean[v.value]:.4f}" for v in Variant)])
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows)
        return "\n".join(lines)


def _resolve_run_answer(corpus: Corpus, span: AnswerSpan) -> PooledAnswer | None:
    """None when the span does not resolve in the corpus."""
    try:
        ctx = corpus.get_context(span.context_id)
    except KeyError:
        return None
    if span.first_sentence < 0 or span.last_sentence >= len(ctx.sentences) or span.first_sentence > span.last_sentence:
        return None
    sids = tuple(
        s.sentence_id for s in ctx.sentences[span.first_sentence : span.last_sentence + 1]
    )
    return PooledAnswer(span.answer_id, sids)


def evaluate_question(
    run_lines: list[RunLine],
    judged: dict[str, frozenset[str]],
    corpus: Corpus,
    variant: Variant,
) -> QuestionResult:
    run_answers: list[PooledAnswer] = []
    unresolvable = 0
    for rl in run_lines:
        resolved = _resolve_run_answer(corpus, rl.span)
        if resolved is None:
            # scored as a zero-nugget answer (empty sentence list => NS 0)
            unresolvable += 1
            resolved = PooledAnswer(rl.span.answer_id, ())
        run_answers.append(resolved)

    pool: dict[str, PooledAnswer] = {a.answer_id: a for a in run_answers}
    for sid in judged:
        coord = corpus.id_index.get(sid)
        if coord is None:
            continue  # judged sentence not in this corpus; nothing to pool
        ctx = corpus.documents[coord.document_index].contexts[coord.context_index]
        span = AnswerSpan(ctx.context_id, coord.sentence_index, coord.sentence_index)
        pool.setdefault(span.answer_id, PooledAnswer(span.answer_id, (sid,)))

    ndns: dict[str, float] = {}
    for v in Variant:
        dcg = dcg_of_ordering(run_answers, judged, v)
        idcg = dcg_of_ordering(ideal_ranking(list(pool.values()), judged, v), judged, v)
        ndns[v.value] = dcg / idcg if idcg > 0 else 0.0

    trace = []
    seen: set[str] = set()
    for rank, a in enumerate(run_answers, start=1):
        ns = novelty_score(_counts(a.sentence_ids, judged, seen), variant)
        trace.append({"rank": rank, "answer": a.answer_id, "ns": ns, "gain": ns * dcg_discount(rank)})
        seen |= _answer_nuggets(a.sentence_ids, judged)

    qid = run_lines[0].question_id if run_lines else ""
    return QuestionResult(qid, ndns, trace, unresolvable)


def evaluate_run(
    run: dict[str, list[RunLine]],
    judgments: Judgments,
    corpus: Corpus,
    variant: Variant = Variant.EXACT,
) -> EvalReport:
    """Score every judged question; judged questions missing from the run
    score 0, run-only questions without judgments are ignored."""
    per_question: dict[str, dict[str, float]] = {}
    traces: dict[str, list[dict]] = {}
    unresolvable = 0
    for qid in judgments.question_ids:
        result = evaluate_question(run.get(qid, []), judgments.for_question(qid), corpus, variant)
        per_question[qid] = result.ndns
        traces[qid] = result.trace
        unresolvable += result.unresolvable
    n = len(per_question)
    mean = {
        v.value: (sum(scores[v.value] for scores in per_question.values()) / n if n else 0.0)
        for v in Variant
    }
    return EvalReport(variant, per_question, mean, traces, unresolvable)
