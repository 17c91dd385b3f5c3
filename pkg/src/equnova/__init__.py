"""equnova: entailed-question-graph answer retrieval and NDNS evaluation.

Per question the pipeline retrieves contexts with BM25, ranks candidate
sentences, generates questions from each candidate, links the generated
questions into an entailment graph, selects nugget-asking questions from
its components, and greedily re-ranks answers by nugget novelty. The
evaluator scores ranked runs against sentence-level nugget judgments with
NDNS-Relaxed/Partial/Exact.
"""

from .corpus import AnswerSpan, Context, Corpus, CorpusError, Document, Sentence, parse_corpus
from .eqg import Component, Eqg, EqgConfig, NuggetQuestion, build_eqg, connected_components
from .index import IndexConfig, InvertedIndex, ScoredContext, build_index, search_contexts, tokenize
from .ndns import EvalReport, Judgments, evaluate_run, load_judgments, load_run
from .pipeline import PipelineConfig, QuestionSet, run_batch, run_pipeline
from .rerank import NoveltyCounts, RankedAnswer, Variant, greedy_rerank, novelty_score
from .scoring import GeneratedQuestion, GenerationConfig, Question

__version__ = "0.1.0"

__all__ = [
    "AnswerSpan", "Context", "Corpus", "CorpusError", "Document", "Sentence", "parse_corpus",
    "Component", "Eqg", "EqgConfig", "NuggetQuestion", "build_eqg", "connected_components",
    "IndexConfig", "InvertedIndex", "ScoredContext", "build_index", "search_contexts", "tokenize",
    "EvalReport", "Judgments", "evaluate_run", "load_judgments", "load_run",
    "PipelineConfig", "QuestionSet", "run_batch", "run_pipeline",
    "NoveltyCounts", "RankedAnswer", "Variant", "greedy_rerank", "novelty_score",
    "GeneratedQuestion", "GenerationConfig", "Question",
    "__version__",
]
