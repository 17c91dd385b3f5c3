"""Command-line interface: equnova index | run | eval."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .corpus import parse_corpus
from .eqg import EqgConfig
from .index import IndexConfig, build_index, load_index, save_index
from .ndns import evaluate_run, load_judgments, load_run
from .pipeline import PipelineConfig, config_from_json, load_questions, run_batch
from .rerank import Variant
from .scoring import GenerationConfig


def _read_corpus(path: str):
    with open(path, encoding="utf-8") as f:
        return parse_corpus(f)


def cmd_index(args: argparse.Namespace) -> int:
    corpus = _read_corpus(args.corpus)
    config = IndexConfig(k1=args.k1, b=args.b, lowercase=not args.keep_case)
    index = build_index(corpus, config)
    with open(args.out, "w", encoding="utf-8") as f:
        save_index(index, f)
    print(f"indexed {index.n_contexts} contexts ({corpus.n_sentences} sentences) -> {args.out}")
    return 0


def _run_config(args: argparse.Namespace) -> PipelineConfig:
    if args.config:
        config = config_from_json(Path(args.config).read_text(encoding="utf-8"))
    else:
        config = PipelineConfig()
    overrides: dict = {}
    for name in ("relevance", "qgen", "entail", "bridge_url", "run_tag",
                 "top_contexts", "top_sentences", "workers"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.variant is not None:
        overrides["variant"] = Variant(args.variant)
    if args.k is not None:
        overrides["generation"] = GenerationConfig(k=args.k)
    if args.edge_threshold is not None or args.q0_threshold is not None:
        overrides["eqg"] = EqgConfig(
            edge_threshold=args.edge_threshold if args.edge_threshold is not None else config.eqg.edge_threshold,
            q0_threshold=args.q0_threshold if args.q0_threshold is not None else config.eqg.q0_threshold,
        )
    if args.max_eqg_questions is not None:
        overrides["max_questions_for_eqg"] = args.max_eqg_questions
    if args.no_rerank:
        overrides["rerank"] = False
    return dataclasses.replace(config, **overrides)


def cmd_run(args: argparse.Namespace) -> int:
    config = _run_config(args)
    corpus = _read_corpus(args.corpus)
    with open(args.index, encoding="utf-8") as f:
        index = load_index(f)
    with open(args.questions, encoding="utf-8") as f:
        questions = load_questions(f)

    batch = run_batch(questions, corpus, index, config,
                      strict=args.strict, dump_eqg=args.dump_eqg is not None)

    with open(args.out, "w", encoding="utf-8") as f:
        for line in batch.lines:
            f.write(line)
            f.write("\n")
    if args.dump_eqg is not None:
        dump_dir = Path(args.dump_eqg)
        dump_dir.mkdir(parents=True, exist_ok=True)
        for result in batch.results:
            if result.eqg_dump is not None:
                path = dump_dir / f"{result.question.qid}.json"
                path.write_text(json.dumps(result.eqg_dump, indent=2, sort_keys=True), encoding="utf-8")
    for qid, error in batch.failures:
        print(f"warning: question {qid} failed: {error}", file=sys.stderr)
    print(f"wrote {len(batch.lines)} run lines for {len(batch.results)} questions -> {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    corpus = _read_corpus(args.corpus)
    with open(args.run, encoding="utf-8") as f:
        run = load_run(f)
    with open(args.judgments, encoding="utf-8") as f:
        judgments = load_judgments(f)
    report = evaluate_run(run, judgments, corpus, Variant(args.variant))

    if args.json:
        out = report.to_json()
        if args.json == "-":
            print(out)
        else:
            Path(args.json).write_text(out + "\n", encoding="utf-8")
    if args.table or not args.json:
        print(report.to_table())
    if report.unresolvable:
        print(f"warning: {report.unresolvable} unresolvable answers", file=sys.stderr)
        if args.strict:
            return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equnova", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an inverted index over a corpus")
    p_index.add_argument("--corpus", required=True, help="corpus JSONL path")
    p_index.add_argument("--out", required=True, help="index output path")
    p_index.add_argument("--k1", type=float, default=1.2)
    p_index.add_argument("--b", type=float, default=0.75)
    p_index.add_argument("--keep-case", action="store_true", help="disable lowercasing")
    p_index.set_defaults(func=cmd_index)

    p_run = sub.add_parser("run", help="produce a ranked answer run for a question set")
    p_run.add_argument("--index", required=True)
    p_run.add_argument("--corpus", required=True)
    p_run.add_argument("--questions", required=True, help='JSONL of {"qid", "text"}')
    p_run.add_argument("--out", required=True, help="run file output path")
    p_run.add_argument("--config", help="pipeline config JSON")
    p_run.add_argument("--run-tag", dest="run_tag")
    p_run.add_argument("--variant", choices=[v.value for v in Variant])
    p_run.add_argument("--no-rerank", action="store_true",
                       help="stop after relevance ranking (context-ranking module only)")
    p_run.add_argument("--relevance", choices=["lexical", "bridge"])
    p_run.add_argument("--qgen", choices=["template", "bridge"])
    p_run.add_argument("--entail", choices=["lexical", "bridge"])
    p_run.add_argument("--bridge-url", dest="bridge_url")
    p_run.add_argument("--workers", type=int)
    p_run.add_argument("--top-contexts", dest="top_contexts", type=int)
    p_run.add_argument("--top-sentences", dest="top_sentences", type=int)
    p_run.add_argument("--k", type=int, help="questions generated per sentence")
    p_run.add_argument("--edge-threshold", type=float)
    p_run.add_argument("--q0-threshold", type=float)
    p_run.add_argument("--max-eqg-questions", type=int)
    p_run.add_argument("--dump-eqg", metavar="DIR", help="write per-question EQG JSON dumps")
    p_run.add_argument("--strict", action="store_true", help="abort on any per-question failure")
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="score a run file against nugget judgments")
    p_eval.add_argument("--run", required=True)
    p_eval.add_argument("--judgments", required=True)
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--variant", choices=[v.value for v in Variant], default="exact")
    p_eval.add_argument("--json", metavar="PATH", help="write JSON report (- for stdout)")
    p_eval.add_argument("--table", action="store_true", help="print the aligned text table")
    p_eval.add_argument("--strict", action="store_true",
                        help="exit nonzero if any answer was unresolvable")
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary: message, not traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
