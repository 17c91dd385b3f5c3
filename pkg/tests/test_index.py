import io
import math
import random

import pytest

from helpers import corpus_from

from equnova.corpus import parse_corpus
from equnova.index import (
    DEFAULT_STOPWORDS,
    IndexConfig,
    bm25_score,
    build_index,
    candidate_sentences,
    load_index,
    save_index,
    search_contexts,
    tokenize,
)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_hyphenated(self):
        assert tokenize("COVID-19 origin") == ["covid", "19", "origin"]

    def test_stopwords_removed(self):
        assert tokenize("the of") == []

    def test_unicode(self):
        assert tokenize("naïve café, Zürich!") == ["naïve", "café", "zürich"]

    def test_keep_case(self):
        config = IndexConfig(lowercase=False)
        assert tokenize("The Virus", config) == ["The", "Virus"]


class TestIndexConfig:
    def test_defaults(self):
        config = IndexConfig()
        assert config.k1 == 1.2 and config.b == 0.75 and config.lowercase
        assert "the" in DEFAULT_STOPWORDS

    def test_invalid_k1(self):
        with pytest.raises(ValueError):
            IndexConfig(k1=-0.1)

    def test_invalid_b(self):
        with pytest.raises(ValueError):
            IndexConfig(b=1.5)


def two_context_corpus():
    return corpus_from(
        [
            ("D1", "", [("C0", ["covid origin wuhan covid"]), ("C1", ["masks reduce droplets"])]),
        ]
    )


class TestBuildIndex:
    def test_empty_corpus(self):
        index = build_index(parse_corpus(io.StringIO("")))
        assert index.n_contexts == 0
        assert index.avg_doc_length == 0.0

    def test_postings_match_hand_counts(self):
        index = build_index(two_context_corpus())
        assert index.postings["covid"] == [(0, 2)]
        assert index.postings["origin"] == [(0, 1)]
        assert index.postings["masks"] == [(1, 1)]
        assert index.doc_lengths == [4, 3]
        assert index.avg_doc_length == 3.5

    def test_rebuild_is_identical(self):
        corpus = two_context_corpus()
        a, b = build_index(corpus), build_index(corpus)
        assert a.postings == b.postings and a.doc_lengths == b.doc_lengths


class TestBm25Score:
    def test_absent_terms_contribute_zero(self):
        index = build_index(two_context_corpus())
        assert bm25_score(index, ["zebra"], 0) == 0.0
        assert bm25_score(index, ["zebra", "masks"], 0) == 0.0  # masks only in C1

    def test_hand_evaluated_single_term(self):
        # one context "covid origin wuhan": N=1, df=1, tf=1, len=avglen
        # idf = ln(1 + (1 - 1 + 0.5) / (1 + 0.5)) = ln(4/3); saturation factor = 1
        corpus = corpus_from([("D1", "", [("C0", ["covid origin wuhan"])])])
        index = build_index(corpus)
        expected = math.log(1 + (1 - 1 + 0.5) / (1 + 0.5)) * (1 * 2.2) / (1 + 1.2)
        assert bm25_score(index, ["origin"], 0) == pytest.approx(expected, abs=1e-12)

    def test_tf_saturation(self):
        # equal lengths, tf 1 vs 2 for "covid": doubled tf gains less than 2x
        corpus = corpus_from(
            [("D1", "", [("C0", ["covid alpha beta gamma"]), ("C1", ["covid covid beta gamma"])])]
        )
        index = build_index(corpus)
        s1 = bm25_score(index, ["covid"], 0)
        s2 = bm25_score(index, ["covid"], 1)
        assert s2 > s1
        assert s2 < 2 * s1

    def test_ordinal_out_of_range(self):
        index = build_index(two_context_corpus())
        with pytest.raises(IndexError):
            bm25_score(index, ["covid"], 2)

    def test_query_term_multiplicity_counts(self):
        index = build_index(two_context_corpus())
        assert bm25_score(index, ["covid", "covid"], 0) == pytest.approx(
            2 * bm25_score(index, ["covid"], 0)
        )


def naive_bm25(corpus, config, query_terms, target_ordinal):
    """Reference scorer: direct counting, no index structures."""
    docs = [tokenize(ctx.text, config) for ctx in corpus.contexts()]
    n = len(docs)
    avglen = sum(len(d) for d in docs) / n if n else 0.0
    doc = docs[target_ordinal]
    score = 0.0
    for term in query_terms:
        tf = doc.count(term)
        if tf == 0:
            continue
        df = sum(1 for d in docs if term in d)
        idf = math.log(1 + (n - df + 0.5) / (df + 0.5))
        norm = 1 - config.b + config.b * len(doc) / avglen if avglen > 0 else 1.0
        score += idf * tf * (config.k1 + 1) / (tf + config.k1 * norm)
    return score


class TestSearchContexts:
    def three_contexts(self):
        return corpus_from(
            [
                (
                    "D1",
                    "",
                    [
                        ("C0", ["masks reduce droplets indoors"]),
                        ("C1", ["covid origin wuhan market"]),
                        ("C2", ["covid vaccines trials"]),
                    ],
                )
            ]
        )

    def test_no_indexed_terms(self):
        index = build_index(self.three_contexts())
        assert search_contexts(index, "zebra quagga", 10) == []

    def test_both_terms_context_first(self):
        corpus = self.three_contexts()
        config = IndexConfig()
        index = build_index(corpus, config)
        results = search_contexts(index, "covid origin", 10)
        # brute force over all three contexts
        expected = sorted(
            (
                (o, naive_bm25(corpus, config, ["covid", "origin"], o))
                for o in range(3)
            ),
            key=lambda t: (-t[1], t[0]),
        )
        expected = [(o, s) for o, s in expected if s > 0]
        assert [r.context_id for r in results] == [index.context_ids[o] for o, _ in expected]
        assert results[0].context_id == "C1"
        for r, (_, s) in zip(results, expected):
            assert r.score == pytest.approx(s, abs=1e-9)

    def test_top_n_one_is_argmax(self):
        index = build_index(self.three_contexts())
        results = search_contexts(index, "covid origin", 1)
        assert len(results) == 1 and results[0].context_id == "C1"

    def test_top_n_validation(self):
        index = build_index(self.three_contexts())
        with pytest.raises(ValueError):
            search_contexts(index, "covid", 0)

    def test_tie_broken_by_ordinal(self):
        corpus = corpus_from([("D1", "", [("C0", ["alpha beta"]), ("C1", ["alpha beta"])])])
        index = build_index(corpus)
        results = search_contexts(index, "alpha", 10)
        assert [r.context_id for r in results] == ["C0", "C1"]

    def test_matches_naive_on_random_corpus(self):
        rng = random.Random(7)
        vocab = [f"w{i}" for i in range(20)]
        docs = [
            (
                "D0",
                "",
                [
                    (f"C{j}", [" ".join(rng.choices(vocab, k=rng.randint(3, 15)))])
                    for j in range(12)
                ],
            )
        ]
        corpus = corpus_from(docs)
        config = IndexConfig()
        index = build_index(corpus, config)
        for _ in range(25):
            query = rng.choices(vocab + ["oov1", "oov2"], k=rng.randint(1, 4))
            for ordinal in range(12):
                assert bm25_score(index, query, ordinal) == pytest.approx(
                    naive_bm25(corpus, config, query, ordinal), abs=1e-9
                )

    def test_removing_non_query_term_keeps_other_scores_stable(self):
        base = corpus_from([("D1", "", [("C0", ["covid origin extra"]), ("C1", ["covid trials"])])])
        # same corpus with the non-query term replaced by another non-query term
        swapped = corpus_from([("D1", "", [("C0", ["covid origin other"]), ("C1", ["covid trials"])])])
        q = ["covid", "origin"]
        a = bm25_score(build_index(base), q, 0)
        b = bm25_score(build_index(swapped), q, 0)
        assert a == pytest.approx(b, abs=1e-12)


class TestCandidateSentences:
    def test_single_context_order(self, covid_corpus, covid_index):
        ranked = search_contexts(covid_index, "trials participants", 1)
        cands = candidate_sentences(covid_corpus, ranked)
        assert [c.sentence.sentence_id for c in cands] == ["D3-C0-S0", "D3-C0-S1"]
        assert all(c.context_score == ranked[0].score for c in cands)

    def test_rank_order_precedence(self, covid_corpus, covid_index):
        ranked = search_contexts(covid_index, "covid origin wuhan", 2)
        cands = candidate_sentences(covid_corpus, ranked)
        first_ctx = ranked[0].context_id
        n_first = len(covid_corpus.get_context(first_ctx).sentences)
        assert all(c.context_id == first_ctx for c in cands[:n_first])

    def test_empty_ranking(self, covid_corpus):
        assert candidate_sentences(covid_corpus, []) == []

    def test_unknown_context(self, covid_corpus):
        from equnova.index import ScoredContext

        with pytest.raises(KeyError):
            candidate_sentences(covid_corpus, [ScoredContext("nope", 1.0)])


class TestPersistence:
    def test_round_trip(self, covid_corpus):
        index = build_index(covid_corpus)
        buf = io.StringIO()
        save_index(index, buf)
        loaded = load_index(io.StringIO(buf.getvalue()))
        assert loaded.postings == index.postings
        assert loaded.context_ids == index.context_ids
        assert loaded.doc_lengths == index.doc_lengths
        assert loaded.config == index.config

    def test_byte_identical(self, covid_corpus):
        a, b = io.StringIO(), io.StringIO()
        save_index(build_index(covid_corpus), a)
        save_index(build_index(covid_corpus), b)
        assert a.getvalue() == b.getvalue()

    def test_rejects_foreign_file(self):
        with pytest.raises(ValueError, match="not an equnova index"):
            load_index(io.StringIO('{"format": "something-else"}'))
