"""Command-line pipeline: ingest, tokenize, train, extract, evaluate.

Exit codes: 0 success, 2 input error, 3 unknown area, 4 no candidates.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import category, embedding, evaluation, extraction, lexicon
from .category import UnknownAreaError
from .embedding import EmptyCorpusError, TrainingConfig
from .extraction import EmptyCandidateSetError
from .lexicon import FormatError

EXIT_INPUT = 2
EXIT_UNKNOWN_AREA = 3
EXIT_NO_CANDIDATES = 4

log = logging.getLogger("fastkate")


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT) -> None:
        super().__init__(message)
        self.code = code


def _echo(args: argparse.Namespace, names: list[str]) -> None:
    params = " ".join(f"{n}={getattr(args, n)}" for n in names)
    print(f"{args.command}: {params}", file=sys.stderr)


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_ingest_titles(args) -> None:
    stats = lexicon.LexiconStats()
    lex = lexicon.build_lexicon(lexicon.read_lines(args.titles), stats)
    lexicon.write_lexicon(lex, args.out)
    print(
        f"read {stats.read}, accepted {stats.accepted}, rejected {stats.rejected}, "
        f"duplicates dropped {stats.duplicates}, topics {len(lex)}"
    )


def cmd_ingest_categories(args) -> None:
    lex = lexicon.read_lexicon(args.lexicon)
    graph = category.CategoryGraph(len(lex))
    unknown = self_loops = 0
    with open(args.edges, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(args.edges, lineno, "expected parent<TAB>child")
            ids = [lex.lookup(p) for p in parts]
            if None in ids:
                unknown += 1
                continue
            if ids[0] == ids[1]:
                self_loops += 1
                continue
            graph.add_edge(*ids)
    category.write_category_edges(graph, lex, args.out)
    if unknown:
        log.warning("%d edges name phrases missing from the lexicon and were skipped", unknown)
    print(f"edges kept {graph.n_edges}, unknown skipped {unknown}, self-loops dropped {self_loops}")


def cmd_tokenize_corpus(args) -> None:
    lex = lexicon.read_lexicon(args.lexicon)
    corpus = lexicon.build_corpus(
        lexicon.read_lines(args.documents), lex,
        min_sentence_length=args.min_sentence_length, max_phrase_words=args.max_phrase_words,
    )
    lexicon.write_corpus(corpus, lex, args.out)
    lexicon.write_lexicon(lex, args.lexicon_out or args.lexicon)
    print(f"documents kept {len(corpus)}, tokens {corpus.n_tokens}")


def cmd_train(args) -> None:
    config = TrainingConfig(
        dim=args.dim, window=args.window, negatives=args.negatives, min_count=args.min_count,
        subsample=args.subsample, epochs=args.epochs, alpha=args.alpha, seed=args.seed,
        workers=1 if args.deterministic else args.workers,
    )
    print(f"train: {config.describe()}", file=sys.stderr)
    lex = lexicon.read_lexicon(args.lexicon)
    corpus = lexicon.read_corpus(args.corpus, lex)
    if not len(corpus):
        raise CommandError(f"{args.corpus}: empty corpus")
    t0 = time.perf_counter()
    m = embedding.train(corpus, config)
    vocab = lex.subset(m.source_ids.tolist())
    embedding.save_embeddings(m, args.out)
    lexicon.write_lexicon(vocab, args.vocab_out or _vocab_path(args.out))
    print(f"trained {len(m)} topics x {m.dim} in {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def _vocab_path(embeddings_path: str) -> str:
    return str(embeddings_path) + ".vocab.tsv"


def load_pipeline_embeddings(lex: lexicon.TopicLexicon, path: str, vocab_path: str | None):
    """Embeddings with rows labelled by ids of the full lexicon `lex`."""
    vocab = lexicon.read_lexicon(vocab_path or _vocab_path(path))
    m = embedding.load_embeddings(path)
    if len(vocab) != len(m):
        raise CommandError(f"{path}: {len(m)} rows but vocabulary has {len(vocab)} topics")
    ids = [lex.phrase_to_id.get(p, -1) for p in vocab.id_to_phrase]
    return m.reindexed(ids)


def _area_sets(args, lex):
    area = lex.lookup(args.area)
    if area is None:
        raise CommandError(f"unknown area {args.area!r}", EXIT_UNKNOWN_AREA)
    graph, unknown = category.read_category_edges(args.categories, lex)
    if unknown:
        log.warning("%d category edges name unknown phrases and were skipped", unknown)
    return area, graph


def cmd_extract(args) -> None:
    _echo(args, ["area", "k", "d1", "d2", "g_offset", "objective"])
    lex = lexicon.read_lexicon(args.lexicon)
    area, graph = _area_sets(args, lex)
    m = load_pipeline_embeddings(lex, args.embeddings, args.vocab)

    t0 = time.perf_counter()
    depths = category.bfs_depths(graph, area, max_depth=max(args.d1, args.d2))
    candidates = category.candidate_set(depths, args.d1)
    if not candidates:
        raise CommandError(f"area {args.area!r} has no subcategories within depth {args.d1}",
                           EXIT_NO_CANDIDATES)
    contributive = category.contributive_set(depths, args.d2)
    weights = category.general_weights(depths, args.g_offset)
    objective = extraction.OBJECTIVES[args.objective]()
    result = extraction.extract_topk(area, args.k, candidates, contributive, weights, m, objective)
    result.elapsed = time.perf_counter() - t0

    if result.truncated:
        print(f"warning: only {len(result)} candidates available, fewer than k={args.k}",
              file=sys.stderr)
    if result.dropped:
        print(f"warning: {result.dropped} candidates without embeddings skipped", file=sys.stderr)
    _write_text(extraction.format_ranked(result, lex.id_to_phrase, timing=not args.no_timing), args.out)


def cmd_baseline(args) -> None:
    _echo(args, ["method", "area", "k", "d1", "window"])
    lex = lexicon.read_lexicon(args.lexicon)
    area, graph = _area_sets(args, lex)
    t0 = time.perf_counter()
    depths = category.bfs_depths(graph, area, max_depth=args.d1)
    candidates = category.candidate_set(depths, args.d1)
    if not candidates:
        raise CommandError(f"area {args.area!r} has no subcategories within depth {args.d1}",
                           EXIT_NO_CANDIDATES)
    docs = lexicon.read_lines(args.documents)
    if args.method == "tfidf":
        ranking = evaluation.baseline_tfidf(candidates, docs, lex)
    else:
        ranking = evaluation.baseline_textrank(candidates, docs, lex, window=args.window)
    result = extraction.RankedTopicList(area, ranking[: args.k], time.perf_counter() - t0)
    result.truncated = len(result) < args.k
    _write_text(extraction.format_ranked(result, lex.id_to_phrase, timing=not args.no_timing), args.out)


def cmd_eval(args) -> None:
    gold = evaluation.read_gold(args.gold)
    aliases = evaluation.read_aliases(args.aliases) if args.aliases else None
    rows = []
    for area, method, path in args.pred:
        area_key = area if area in gold else lexicon.normalize_title(area)
        if area_key not in gold:
            raise CommandError(f"{args.gold}: no gold list for area {area!r}")
        predicted = [p for p, _ in extraction.read_ranked(path)]
        if len(predicted) < args.k:
            raise CommandError(f"{path}: {len(predicted)} predictions, fewer than k={args.k}")
        rows.append(evaluation.evaluate(args.dataset, area_key, method, predicted,
                                        gold[area_key], args.k, aliases))
    _write_text(evaluation.format_report(rows, args.k), args.out)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fastkate", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest-titles", help="build the topic lexicon from raw titles")
    s.add_argument("--titles", required=True, help="one raw title per line")
    s.add_argument("--out", required=True, help="lexicon TSV")
    s.set_defaults(func=cmd_ingest_titles)

    s = sub.add_parser("ingest-categories", help="map parent/child title pairs onto the lexicon")
    s.add_argument("--lexicon", required=True)
    s.add_argument("--edges", required=True, help="TSV parent<TAB>child, raw or normalized")
    s.add_argument("--out", required=True, help="normalized category edges TSV")
    s.set_defaults(func=cmd_ingest_categories)

    s = sub.add_parser("tokenize-corpus", help="turn raw documents into topic sequences")
    s.add_argument("--lexicon", required=True)
    s.add_argument("--documents", required=True, help="one raw document per line")
    s.add_argument("--out", required=True, help="corpus file, one document of phrases per line")
    s.add_argument("--lexicon-out", help="where to write counted frequencies (default: in place)")
    s.add_argument("--min-sentence-length", type=int, default=lexicon.MIN_SENTENCE_LENGTH)
    s.add_argument("--max-phrase-words", type=int, default=lexicon.MAX_PHRASE_WORDS)
    s.set_defaults(func=cmd_tokenize_corpus)

    d = TrainingConfig()
    s = sub.add_parser("train", help="train topic embeddings")
    s.add_argument("--lexicon", required=True)
    s.add_argument("--corpus", required=True)
    s.add_argument("--out", required=True, help="FKTE embeddings file")
    s.add_argument("--vocab-out", help="row vocabulary TSV (default: <out>.vocab.tsv)")
    s.add_argument("--dim", type=int, default=d.dim)
    s.add_argument("--window", type=int, default=d.window)
    s.add_argument("--negatives", type=int, default=d.negatives)
    s.add_argument("--min-count", type=int, default=d.min_count)
    s.add_argument("--subsample", type=float, default=d.subsample)
    s.add_argument("--epochs", type=int, default=d.epochs)
    s.add_argument("--alpha", type=float, default=d.alpha)
    s.add_argument("--seed", type=int, default=d.seed)
    s.add_argument("--workers", type=int, default=d.workers)
    s.add_argument("--deterministic", action="store_true", help="single worker, reproducible")
    s.set_defaults(func=cmd_train)

    def area_args(s):
        s.add_argument("--lexicon", required=True)
        s.add_argument("--categories", required=True)
        s.add_argument("--area", required=True, help='e.g. "artificial_intelligence"')
        s.add_argument("--k", type=int, default=15)
        s.add_argument("--d1", type=int, default=category.DEFAULT_D1)
        s.add_argument("--out", help="result TSV (default: stdout)")
        s.add_argument("--no-timing", action="store_true", help="omit the elapsed_seconds footer")

    s = sub.add_parser("extract", help="extract the top-k topics of an area")
    area_args(s)
    s.add_argument("--embeddings", required=True)
    s.add_argument("--vocab", help="row vocabulary TSV (default: <embeddings>.vocab.tsv)")
    s.add_argument("--d2", type=int, default=category.DEFAULT_D2)
    s.add_argument("--g-offset", type=float, default=category.DEFAULT_G_OFFSET,
                   help="general weight g(n) = exp(offset - n)")
    s.add_argument("--objective", choices=sorted(extraction.OBJECTIVES), default="additive")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("baseline", help="rank an area's candidates with TF-IDF or TextRank")
    area_args(s)
    s.add_argument("--method", choices=["tfidf", "textrank"], required=True)
    s.add_argument("--documents", required=True, help="one raw document per line")
    s.add_argument("--window", type=int, default=2)
    s.set_defaults(func=cmd_baseline)

    s = sub.add_parser("eval", help="score ranked lists against gold lists")
    s.add_argument("--gold", required=True, help="TSV area<TAB>rank<TAB>topic")
    s.add_argument("--pred", nargs=3, action="append", required=True,
                   metavar=("AREA", "METHOD", "PATH"), help="ranked list to score (repeatable)")
    s.add_argument("--dataset", default="default")
    s.add_argument("--k", type=int, default=15)
    s.add_argument("--aliases", help="TSV phrase<TAB>canonical")
    s.add_argument("--out", help="report TSV (default: stdout)")
    s.set_defaults(func=cmd_eval)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "k", 1) < 1:
        print("error: k must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnknownAreaError as exc:
        print(f"error: unknown area {exc.args[0]!r}", file=sys.stderr)
        return EXIT_UNKNOWN_AREA
    except EmptyCandidateSetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CANDIDATES
    except (FormatError, EmptyCorpusError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
