"""Command-line entry point: ``sidvec {train,align,eval,benchmark,neighbors}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import pipeline
from .benchmark import BenchmarkError, load_config, run_benchmark
from .corpus import LangWord, build_vocabulary, corpus_checksum, load_corpus_dir
from .evaluation import RESULT_HEADER, align_corpus, format_result, nearest_neighbors, read_sentences

log = logging.getLogger("sidvec")


def _direction(text: str) -> tuple[str, str]:
    parts = text.replace("->", "-").split("-")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"direction must look like 'en-fr', got {text!r}")
    return parts[0], parts[1]


def _add_hyper(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("hyperparameters")
    g.add_argument("--dim", type=int, default=500)
    g.add_argument("--epochs", type=int, default=100)
    g.add_argument("--negatives", type=int, default=5)
    g.add_argument("--alpha", type=float, default=0.75)
    g.add_argument("--learning-rate", type=float, default=0.025)
    g.add_argument("--iterations", type=int, default=5, help="Model-1 EM iterations")
    g.add_argument("--no-null", action="store_true", help="Model-1 without the NULL word")
    g.add_argument("--classic-dice", action="store_true",
                   help="sum denominator instead of the product form")
    g.add_argument("--min-count", type=int, default=2)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--granularity", choices=("sentence", "document"), default="sentence")
    g.add_argument("--doc-keys", help="file with one document key per corpus line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sidvec", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one method on a corpus directory")
    p.add_argument("--corpus", required=True, help="directory of <lang>.txt files")
    p.add_argument("--method", required=True, choices=pipeline.METHODS)
    p.add_argument("--langs", default="all",
                   help="comma-separated languages, or 'all'; for model1 the order is src,tgt")
    p.add_argument("--mode", choices=("bilingual", "multilingual"), default="bilingual")
    p.add_argument("--out", required=True)
    _add_hyper(p)

    p = sub.add_parser("align", help="greedy-align a pair of sentence files")
    p.add_argument("--model", required=True)
    p.add_argument("--direction", required=True, type=_direction)
    p.add_argument("--src-text", required=True)
    p.add_argument("--tgt-text", required=True)

    p = sub.add_parser("eval", help="score a trained model on one benchmark")
    p.add_argument("--model", required=True)
    p.add_argument("--benchmark", required=True, choices=("align", "dict"))
    p.add_argument("--direction", required=True, type=_direction)
    p.add_argument("--gold", help="gold links (align)")
    p.add_argument("--src-text", help="source sentences (align)")
    p.add_argument("--tgt-text", help="target sentences (align)")
    p.add_argument("--dictionary", help="source<TAB>target file (dict)")
    p.add_argument("--name", help="benchmark label in the output rows")
    p.add_argument("--any-of", action="store_true", help="P@1 credited once per source word")
    p.add_argument("--results", help="append result rows to this TSV")
    p.add_argument("--corpus", help="corpus directory to check against the manifest checksum")

    p = sub.add_parser("benchmark", help="run a methods x benchmarks grid from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--results", help="write result rows to this TSV")
    p.add_argument("--table", help="also write the table to this file")

    p = sub.add_parser("neighbors", help="top-k target words for a query word")
    p.add_argument("--model", required=True)
    p.add_argument("--word", required=True, type=LangWord.parse, help="e.g. en:house")
    p.add_argument("--target", required=True, help="target language")
    p.add_argument("-k", type=int, default=10)
    return parser


def _languages(spec: str, available) -> list[str]:
    if spec == "all":
        return list(available)
    langs = [x for x in spec.split(",") if x]
    missing = [x for x in langs if x not in available]
    if missing:
        raise ValueError(f"languages not in corpus: {', '.join(missing)}")
    return langs


def cmd_train(args) -> int:
    corpus = load_corpus_dir(args.corpus, doc_keys=args.doc_keys)
    languages = _languages(args.langs, corpus.languages)
    pipeline.check_method(args.method, args.mode, languages)
    vocab = build_vocabulary(corpus, args.min_count)
    params = pipeline.Params(
        dim=args.dim, epochs=args.epochs, negatives=args.negatives, alpha=args.alpha,
        learning_rate=args.learning_rate, iterations=args.iterations,
        use_null=not args.no_null, classic_dice=args.classic_dice, seed=args.seed,
        threads=args.threads, granularity=args.granularity)
    model = pipeline.train(corpus, vocab, args.method, languages, args.mode, params)
    flags = {k: getattr(params, k) for k in params.__dataclass_fields__}
    flags["min_count"] = args.min_count
    manifest = {
        "method": args.method,
        "mode": args.mode,
        "languages": list(model.languages),
        "flags": flags,
        "seed": args.seed,
        "corpus_checksum": corpus_checksum(args.corpus),
        "vocabulary_size": len(vocab),
    }
    for path in pipeline.save(model, args.out, manifest):
        log.info("wrote %s", path)
    return 0


def _load_model(path):
    model, manifest = pipeline.load(path)
    return model, manifest


def cmd_align(args) -> int:
    src, tgt = args.direction
    model, _ = _load_model(args.model)
    sim = model.similarity(src, tgt)
    links = align_corpus(read_sentences(args.src_text, src), read_sentences(args.tgt_text, tgt), sim)
    out = sys.stdout
    for sid in sorted(links):
        for i, j in sorted(links[sid]):
            out.write(f"{sid} {i} {j}\n")
    return 0


def cmd_eval(args) -> int:
    src, tgt = args.direction
    model, manifest = _load_model(args.model)
    if args.corpus:
        if corpus_checksum(args.corpus) != manifest.get("corpus_checksum"):
            log.warning("corpus %s differs from the one %s was trained on", args.corpus, args.model)
    method = manifest.get("method", model.method)
    rows = []
    if args.benchmark == "align":
        missing = [f for f in ("gold", "src_text", "tgt_text") if not getattr(args, f)]
        if missing:
            raise ValueError(f"align benchmark needs --{', --'.join(m.replace('_', '-') for m in missing)}")
        value = pipeline.evaluate_alignment(model, src, tgt, args.gold, args.src_text, args.tgt_text)
        rows.append(format_result(args.name or "align", src, tgt, method, "1-AER", value))
    else:
        if not args.dictionary:
            raise ValueError("dict benchmark needs --dictionary")
        p1, coverage = pipeline.evaluate_dictionary(model, src, tgt, args.dictionary, args.any_of)
        name = args.name or "dict"
        rows.append(format_result(name, src, tgt, method, "P@1", p1))
        rows.append(format_result(name, src, tgt, method, "coverage", coverage))
    for row in rows:
        print(row)
    if args.results:
        _append_results(args.results, rows)
    return 0


def _append_results(path, rows) -> None:
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        if new:
            fh.write("\t".join(RESULT_HEADER) + "\n")
        for row in rows:
            fh.write(row + "\n")


def cmd_benchmark(args) -> int:
    table, rows = run_benchmark(load_config(args.config))
    sys.stdout.write(table)
    if args.table:
        Path(args.table).write_text(table, encoding="utf-8")
    if args.results:
        with open(args.results, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\t".join(RESULT_HEADER) + "\n")
            for row in rows:
                fh.write(row + "\n")
    return 0


def cmd_neighbors(args) -> int:
    model, _ = _load_model(args.model)
    sim = model.similarity(args.word.language, args.target)
    for word, score in nearest_neighbors(sim, args.word, model.target_vocabulary(args.target),
                                         args.k):
        print(f"{word}\t{score:.6f}")
    return 0


COMMANDS = {
    "train": cmd_train,
    "align": cmd_align,
    "eval": cmd_eval,
    "benchmark": cmd_benchmark,
    "neighbors": cmd_neighbors,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, FileNotFoundError, KeyError, BenchmarkError) as exc:
        print(f"sidvec {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
