"""Ranking metrics against gold lists, and the TF-IDF / TextRank baselines."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .lexicon import FormatError, TopicLexicon, split_words, tokenize_document

DAMPING = 0.85
TEXTRANK_TOL = 1e-6
TEXTRANK_MAX_ITER = 100


def _canon(items: Iterable[Hashable], aliases: Mapping | None) -> list:
    if not aliases:
        return list(items)
    return [aliases.get(x, x) for x in items]


def _as_list(predicted) -> list:
    topics = getattr(predicted, "topics", None)
    return list(topics) if topics is not None else list(predicted)


def precision_at_k(predicted, gold: Sequence, k: int, aliases: Mapping | None = None) -> float:
    """Fraction of the first `k` predictions that appear in `gold`."""
    pred = _as_list(predicted)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(pred):
        raise ValueError(f"k={k} exceeds prediction length {len(pred)}")
    hits = set(_canon(pred[:k], aliases)) & set(_canon(gold, aliases))
    return len(hits) / k


def average_precision(predicted, gold: Sequence, aliases: Mapping | None = None) -> float:
    """``AP = sum_k P(k) / min(m, n)``.

    P(k) is the precision of the first k predictions when the k-th one is
    correct and 0 otherwise; n and m are the prediction and gold lengths.  A
    gold topic is credited at most once.
    """
    pred = _canon(_as_list(predicted), aliases)
    gold_set = set(_canon(gold, aliases))
    if not pred or not gold_set:
        raise ValueError("average precision needs non-empty predictions and gold")
    seen = set()
    hits = 0
    total = 0.0
    for i, t in enumerate(pred, 1):
        if t in gold_set and t not in seen:
            seen.add(t)
            hits += 1
            total += hits / i
    return total / min(len(gold_set), len(pred))


def mean_average_precision(aps: Iterable[float]) -> float:
    aps = list(aps)
    if not aps:
        raise ValueError("no average precisions to average")
    return sum(aps) / len(aps)


# -- baselines --------------------------------------------------------------


def _tokenized(documents, lexicon: TopicLexicon) -> Iterable[list[int]]:
    for doc in documents:
        if isinstance(doc, str):
            words = split_words(doc)
        else:
            words = list(doc)
            if words and not isinstance(words[0], str):
                yield words  # already topic ids
                continue
        yield tokenize_document(words, lexicon, counts=Counter())


def _ranking(scores: Mapping[int, float]) -> list[tuple[int, float]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))


def baseline_tfidf(candidates: Collection[int], documents, lexicon: TopicLexicon) -> list[tuple[int, float]]:
    """Rank candidates by ``sum_d tf(t, d) * log(|D| / df(t))`` over all documents.

    Documents are raw strings, word lists, or already tokenized id lists.
    """
    cand = set(candidates)
    tf: Counter = Counter()
    df: Counter = Counter()
    n_docs = 0
    for ids in _tokenized(documents, lexicon):
        n_docs += 1
        c = Counter(t for t in ids if t in cand)
        tf.update(c)
        df.update(c.keys())
    tfidf = {t: tf[t] * math.log(n_docs / df[t]) if df[t] else 0.0 for t in cand}
    return _ranking(tfidf)


def _edge_pairs(edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    return sorted({(min(a, b), max(a, b)) for a, b in edges if a != b})


def _textrank_blocks(sizes: np.ndarray, pairs: np.ndarray, damping: float, tol: float,
                     max_iter: int) -> np.ndarray:
    """Iterate TextRank on a block-diagonal union of graphs.

    Each block stops on its own tolerance, so results equal separate runs.
    """
    n = int(sizes.sum())
    s = np.ones(n)
    if n == 0:
        return s
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    deg = np.bincount(src, minlength=n).astype(np.float64)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    block = np.repeat(np.arange(len(sizes)), sizes)
    active = np.ones(len(sizes), dtype=bool)
    for _ in range(max_iter):
        share = np.divide(s, deg, out=np.zeros_like(s), where=deg > 0)
        new = (1.0 - damping) + damping * np.bincount(dst, weights=share[src], minlength=n)
        delta = np.maximum.reduceat(np.abs(new - s), starts)
        s = np.where(active[block], new, s)
        active &= delta >= tol
        if not active.any():
            break
    return s


def textrank(n_nodes: int, edges: Sequence[tuple[int, int]], damping: float = DAMPING,
             tol: float = TEXTRANK_TOL, max_iter: int = TEXTRANK_MAX_ITER) -> np.ndarray:
    """Damped random-walk scores on an undirected unweighted graph.

    ``S(i) = (1 - d) + d * sum_{j ~ i} S(j) / deg(j)``, iterated from all
    ones until the largest change is below `tol`.
    """
    pairs = np.array(_edge_pairs(edges), dtype=np.int64).reshape(-1, 2)
    return _textrank_blocks(np.array([n_nodes]), pairs, damping, tol, max_iter)


def _article_graph(ids: Sequence[int], window: int) -> tuple[list[int], list[tuple[int, int]]]:
    nodes = list(dict.fromkeys(ids))
    index = {t: i for i, t in enumerate(nodes)}
    seq = [index[t] for t in ids]
    edges = [(seq[i], seq[j]) for i in range(len(seq)) for j in range(i + 1, min(i + window, len(seq)))]
    return nodes, _edge_pairs(edges)


def article_textrank(ids: Sequence[int], window: int = 2) -> dict[int, float]:
    """TextRank scores of the distinct topics in one tokenized article.

    Topics co-occurring within `window` consecutive tokens share an edge.
    """
    nodes, pairs = _article_graph(ids, window)
    scores = textrank(len(nodes), pairs)
    return {t: float(scores[i]) for i, t in enumerate(nodes)}


def baseline_textrank(candidates: Collection[int], documents, lexicon: TopicLexicon,
                      window: int = 2) -> list[tuple[int, float]]:
    """Rank candidates by their TextRank weight summed over articles."""
    cand = set(candidates)
    nodes: list[int] = []
    sizes: list[int] = []
    pairs: list[tuple[int, int]] = []
    for ids in _tokenized(documents, lexicon):
        ids = [t for t in ids if t in cand]
        if not ids:
            continue
        art_nodes, art_pairs = _article_graph(ids, window)
        off = len(nodes)
        pairs.extend((a + off, b + off) for a, b in art_pairs)
        nodes.extend(art_nodes)
        sizes.append(len(art_nodes))
    scores = _textrank_blocks(np.array(sizes, dtype=np.int64),
                              np.array(pairs, dtype=np.int64).reshape(-1, 2),
                              DAMPING, TEXTRANK_TOL, TEXTRANK_MAX_ITER)
    total = dict.fromkeys(cand, 0.0)
    for t, v in zip(nodes, scores.tolist()):
        total[t] += v
    return _ranking(total)


# -- files and reports ------------------------------------------------------


def read_gold(path: str | Path) -> dict[str, list[str]]:
    """``area<TAB>rank<TAB>topic`` rows -> topics per area ordered by rank."""
    rows: dict[str, list[tuple[int, str]]] = defaultdict(list)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(path, lineno, "expected area, rank, topic")
            try:
                rank = int(parts[1])
            except ValueError:
                raise FormatError(path, lineno, "rank must be an integer") from None
            rows[parts[0]].append((rank, parts[2]))
    gold = {}
    for area, items in rows.items():
        topics = [t for _, t in sorted(items)]
        if len(set(topics)) != len(topics):
            raise FormatError(path, 0, f"duplicate gold topic for area {area}")
        gold[area] = topics
    return gold


def read_aliases(path: str | Path) -> dict[str, str]:
    """``phrase<TAB>canonical`` rows."""
    aliases = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(path, lineno, "expected phrase, canonical")
            aliases[parts[0]] = parts[1]
    return aliases


@dataclass
class EvalRow:
    dataset: str
    area: str
    method: str
    precision_at_k: float
    ap: float


def evaluate(dataset: str, area: str, method: str, predicted: Sequence, gold: Sequence, k: int,
             aliases: Mapping | None = None) -> EvalRow:
    return EvalRow(dataset, area, method, precision_at_k(predicted, gold, k, aliases),
                   average_precision(predicted, gold, aliases))


def format_report(rows: Sequence[EvalRow], k: int) -> str:
    """Per-area rows, then a MAP block with one row per (dataset, method)."""
    out = [f"dataset\tarea\tmethod\tprecision_at_{k}\tAP"]
    for r in rows:
        out.append(f"{r.dataset}\t{r.area}\t{r.method}\t{r.precision_at_k:.4f}\t{r.ap:.4f}")
    out.append(f"dataset\tmethod\tmean_precision_at_{k}\tMAP")
    groups: dict[tuple[str, str], list[EvalRow]] = defaultdict(list)
    for r in rows:
        groups[(r.dataset, r.method)].append(r)
    for (dataset, method), rs in groups.items():
        mean_p = sum(r.precision_at_k for r in rs) / len(rs)
        out.append(f"{dataset}\t{method}\t{mean_p:.4f}\t{mean_average_precision(r.ap for r in rs):.4f}")
    return "\n".join(out) + "\n"
