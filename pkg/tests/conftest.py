import pytest

from helpers import COVID_DOCS, COVID_JUDGMENTS, corpus_from, corpus_jsonl, questions_jsonl

from equnova.index import build_index


@pytest.fixture(scope="session")
def covid_corpus():
    return corpus_from(COVID_DOCS)


@pytest.fixture(scope="session")
def covid_index(covid_corpus):
    return build_index(covid_corpus)


@pytest.fixture
def covid_files(tmp_path):
    """Fixture corpus/questions/judgments written to disk for CLI tests."""
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(corpus_jsonl(COVID_DOCS), encoding="utf-8")
    questions = tmp_path / "questions.jsonl"
    questions.write_text(questions_jsonl(), encoding="utf-8")
    judgments = tmp_path / "judgments.txt"
    judgments.write_text(COVID_JUDGMENTS, encoding="utf-8")
    return {"corpus": corpus, "questions": questions, "judgments": judgments, "dir": tmp_path}
