"""Greedy top-k area topic extraction.

The representativeness of a selected set T for an area is

    D(T) = sum_j w_j * D(T, {t_j})

over the contributive topics t_j, where w_j is the depth-derived general
weight.  The per-topic term D(T, {t_j}) is supplied by an :class:`Objective`.
Greedy selection adds the candidate with the largest marginal gain until k
topics are chosen.
"""

from __future__ import annotations

import itertools
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Collection, Iterable, Sequence

import numpy as np

from .category import UnknownAreaError, WeightMap
from .embedding import EmbeddingMatrix
from .lexicon import FormatError

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_K = 4
MAX_EXHAUSTIVE_CANDIDATES = 12


class EmptyCandidateSetError(ValueError):
    pass


class InstanceTooLargeError(ValueError):
    pass


class Objective(ABC):
    """Set function built from a per-contributive-topic term.

    Subclasses define `element_value`, the value of ``D(T, {t_j})`` given the
    cosines between every member of T and t_j, and a vectorized `gains`.
    """

    name = "objective"

    @abstractmethod
    def element_value(self, sims: np.ndarray) -> float:
        ...

    @abstractmethod
    def gains(self, sim: np.ndarray, w: np.ndarray, selected: Sequence[int]) -> np.ndarray:
        """Marginal gain of every row of `sim` given the already selected rows.

        `sim` is the candidate x contributive cosine matrix, `w` the
        contributive weights.
        """

    def set_value(self, sim: np.ndarray, w: np.ndarray, selected: Sequence[int]) -> float:
        sel = np.asarray(list(selected), dtype=np.int64)
        return float(sum(w[j] * self.element_value(sim[sel, j]) for j in range(sim.shape[1])))

    def value(self, T: Collection[int], contributive: Iterable[int], weights: WeightMap,
              m: EmbeddingMatrix) -> float:
        """D(T) on topic ids."""
        T = sorted(T)
        contrib = sorted(contributive)
        sim, w = _similarity(m, T, contrib, weights)
        return self.set_value(sim, w, range(len(T)))

    def marginal_gain(self, T: Collection[int], t: int, contributive: Iterable[int],
                      weights: WeightMap, m: EmbeddingMatrix) -> float:
        contrib = sorted(contributive)
        return self.value(set(T) | {t}, contrib, weights, m) - self.value(T, contrib, weights, m)


class AdditiveObjective(Objective):
    """``D(T, {t_j}) = sum_{h in T} cos(h, t_j)``; gains do not depend on T."""

    name = "additive"

    def element_value(self, sims):
        return float(np.sum(sims))

    def gains(self, sim, w, selected):
        return sim @ w


class CoverageObjective(Objective):
    """``D(T, {t_j}) = max_{h in T} max(0, cos(h, t_j))``, 0 for empty T."""

    name = "coverage"

    def element_value(self, sims):
        return float(max(0.0, np.max(sims))) if len(sims) else 0.0

    def gains(self, sim, w, selected):
        if len(selected):
            best = np.maximum(sim[list(selected)].max(axis=0), 0.0)
        else:
            best = np.zeros(sim.shape[1])
        return np.maximum(sim - best, 0.0) @ w


OBJECTIVES = {"additive": AdditiveObjective, "coverage": CoverageObjective}


@dataclass
class RankedTopicList:
    area: int
    entries: list[tuple[int, float]] = field(default_factory=list)
    elapsed: float = 0.0
    truncated: bool = False
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def topics(self) -> list[int]:
        return [t for t, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.entries]


def _similarity(m: EmbeddingMatrix, cand: Sequence[int], contrib: Sequence[int],
                weights: WeightMap) -> tuple[np.ndarray, np.ndarray]:
    rc = np.asarray([m.row(t) for t in cand], dtype=np.int64)
    rj = np.asarray([m.row(t) for t in contrib], dtype=np.int64)
    sim = m.unit_vectors[rc] @ m.unit_vectors[rj].T
    w = np.asarray([weights[t] for t in contrib], dtype=np.float64)
    return sim, w


def _prepare(area, candidates, contributive, weights, embeddings):
    if weights.area != area:
        raise UnknownAreaError(area)
    if not candidates:
        raise EmptyCandidateSetError(f"no candidate topics for area {area}")
    _, cand, missing = embeddings.rows(sorted(candidates))
    _, contrib, missing_c = embeddings.rows(sorted(contributive))
    if missing:
        log.warning("%d candidate topics have no embedding and were skipped", len(missing))
    if missing_c:
        log.warning("%d contributive topics have no embedding and were skipped", len(missing_c))
    if not cand:
        raise EmptyCandidateSetError(f"no embedded candidate topics for area {area}")
    sim, w = _similarity(embeddings, cand, contrib, weights)
    return cand, sim, w, len(missing)


def _greedy(objective: Objective, sim: np.ndarray, w: np.ndarray, k: int):
    n = sim.shape[0]
    available = np.ones(n, dtype=bool)
    selected: list[int] = []
    picks = []
    while len(selected) < min(k, n):
        g = objective.gains(sim, w, selected)
        g = np.where(available, g, -np.inf)
        # argmax returns the first maximum, i.e. the smallest topic id
        i = int(np.argmax(g))
        selected.append(i)
        available[i] = False
        picks.append((i, float(g[i])))
    return picks


def extract_topk(area: int, k: int, candidates: Collection[int], contributive: Collection[int],
                 weights: WeightMap, embeddings: EmbeddingMatrix,
                 objective: Objective | None = None) -> RankedTopicList:
    """Pick `k` candidates greedily by marginal gain over the contributive set.

    Each entry's score is its marginal gain when it was picked.  Ties go to
    the smaller topic id.  If fewer than `k` embedded candidates exist the
    list is shorter and flagged ``truncated``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    objective = objective or AdditiveObjective()
    t0 = time.perf_counter()
    cand, sim, w, dropped = _prepare(area, candidates, contributive, weights, embeddings)
    picks = _greedy(objective, sim, w, k)
    entries = [(cand[i], s) for i, s in picks]
    elapsed = time.perf_counter() - t0
    truncated = len(entries) < k
    if truncated:
        log.warning("only %d candidates available for k=%d", len(entries), k)
    return RankedTopicList(area, entries, elapsed, truncated, dropped)


@dataclass
class NaiveRun:
    result: RankedTopicList
    evaluations: int


def extract_topk_naive(area: int, k: int, candidates: Collection[int],
                       contributive: Collection[int], weights: WeightMap,
                       embeddings: EmbeddingMatrix, objective: Objective | None = None) -> NaiveRun:
    """Literal triple loop: each round scores every candidate against the
    whole contributive set, then takes the best one not yet selected.

    Slow; used to check the vectorized path and count inner evaluations,
    which come to exactly ``k * |candidates| * |contributive|``.
    """
    objective = objective or AdditiveObjective()
    t0 = time.perf_counter()
    cand, sim, w, dropped = _prepare(area, candidates, contributive, weights, embeddings)
    selected: list[int] = []
    entries = []
    evaluations = 0
    current = 0.0
    while len(selected) < min(k, len(cand)):
        best_i, best_s = -1, -np.inf
        for i in range(len(cand)):
            rows = selected + [i]
            s = 0.0
            for j in range(sim.shape[1]):
                s += w[j] * objective.element_value(sim[rows, j])
                evaluations += 1
            if i not in selected and s > best_s:
                best_i, best_s = i, s
        selected.append(best_i)
        entries.append((cand[best_i], best_s - current))
        current = best_s
    result = RankedTopicList(area, entries, time.perf_counter() - t0, len(entries) < k, dropped)
    return NaiveRun(result, evaluations)


def static_scores(candidates: Collection[int], contributive: Collection[int], weights: WeightMap,
                  embeddings: EmbeddingMatrix) -> dict[int, float]:
    """``score(t) = sum_j w_j cos(t, t_j)`` for every embedded candidate."""
    _, cand, _ = embeddings.rows(sorted(candidates))
    _, contrib, _ = embeddings.rows(sorted(contributive))
    if not cand:
        raise EmptyCandidateSetError("no embedded candidate topics")
    sim, w = _similarity(embeddings, cand, contrib, weights)
    return dict(zip(cand, (sim @ w).tolist()))


def top_k_static(scores: dict[int, float], k: int) -> list[tuple[int, float]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


@dataclass
class ExhaustiveResult:
    value: float
    topics: tuple[int, ...]


def extract_topk_exhaustive(area: int, k: int, candidates: Collection[int],
                            contributive: Collection[int], weights: WeightMap,
                            embeddings: EmbeddingMatrix,
                            objective: Objective | None = None) -> ExhaustiveResult:
    """Best objective value over every k-subset of the candidates."""
    objective = objective or AdditiveObjective()
    if k > MAX_EXHAUSTIVE_K or len(candidates) > MAX_EXHAUSTIVE_CANDIDATES:
        raise InstanceTooLargeError(
            f"exhaustive search limited to k<={MAX_EXHAUSTIVE_K}, "
            f"<={MAX_EXHAUSTIVE_CANDIDATES} candidates"
        )
    cand, sim, w, _ = _prepare(area, candidates, contributive, weights, embeddings)
    best = ExhaustiveResult(-np.inf, ())
    for combo in itertools.combinations(range(len(cand)), min(k, len(cand))):
        v = objective.set_value(sim, w, combo)
        if v > best.value:
            best = ExhaustiveResult(v, tuple(cand[i] for i in combo))
    return best


# -- result file ------------------------------------------------------------


def format_ranked(result: RankedTopicList, phrases: Sequence[str], timing: bool = True) -> str:
    lines = [f"{rank}\t{phrases[t]}\t{score:.6f}" for rank, (t, score) in enumerate(result.entries, 1)]
    if timing:
        lines.append(f"elapsed_seconds\t{result.elapsed:.6f}")
    return "\n".join(lines) + "\n"


def read_ranked(path: str | Path) -> list[tuple[str, float]]:
    """Parse ``rank<TAB>phrase<TAB>score`` rows, ignoring the elapsed footer."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("elapsed_seconds\t"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(path, lineno, "expected rank, phrase, score")
            try:
                rank, score = int(parts[0]), float(parts[2])
            except ValueError:
                raise FormatError(path, lineno, "rank must be int and score float") from None
            if rank != len(rows) + 1:
                raise FormatError(path, lineno, f"expected rank {len(rows) + 1}")
            rows.append((parts[1], score))
    return rows
