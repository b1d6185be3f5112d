"""Skip-gram topic embeddings trained with negative sampling.

Every topic is a single token.  The center topic's input vector is trained to
score its window neighbours' output vectors high and noise draws low.
Frequent topics are randomly dropped per occurrence before windows are
formed.  The inner loops are numba kernels; a single worker with a fixed
seed is bit-reproducible.
"""

from __future__ import annotations

import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numba import njit, prange

from .lexicon import TokenizedCorpus

log = logging.getLogger(__name__)

NOISE_POWER = 0.75
MAGIC = b"FKTE"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQI")


class EmptyCorpusError(ValueError):
    pass


class UnknownTopicError(KeyError):
    pass


@dataclass(frozen=True)
class TrainingConfig:
    dim: int = 200
    window: int = 10
    negatives: int = 5
    min_count: int = 2
    subsample: float = 1e-4
    epochs: int = 5
    alpha: float = 0.025
    seed: int = 1
    workers: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1 or self.window < 1 or self.negatives < 1 or self.epochs < 1:
            raise ValueError("dim, window, negatives and epochs must be >= 1")
        if not self.subsample > 0:
            raise ValueError("subsample threshold must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def alpha_end(self) -> float:
        return self.alpha / 100.0

    def describe(self) -> str:
        sub = np.format_float_scientific(self.subsample, trim="-", exp_digits=1)
        return (
            f"dim={self.dim} window={self.window} min_count={self.min_count} "
            f"subsample={sub} negatives={self.negatives} epochs={self.epochs} "
            f"alpha={self.alpha:g} seed={self.seed} workers={self.workers}"
        )


def subsample_keep_probability(frequency_fraction, delta: float):
    """Probability of keeping an occurrence of a topic with corpus share F.

    Occurrences are discarded with probability ``1 - sqrt(delta / F)``, so
    the keep probability is ``min(1, sqrt(delta / F))``.  Accepts scalars or
    arrays.
    """
    f = np.asarray(frequency_fraction, dtype=np.float64)
    if np.any(~(f > 0)):
        raise ValueError("frequency fraction must be > 0")
    keep = np.minimum(1.0, np.sqrt(delta / f))
    return float(keep) if keep.ndim == 0 else keep


class NoiseSampler:
    """Draws topic ids with probability proportional to ``frequency ** 0.75``."""

    def __init__(self, frequencies: Sequence[float], seed: int | None = None) -> None:
        freq = np.asarray(frequencies, dtype=np.float64)
        if freq.size == 0 or not np.any(freq > 0):
            raise EmptyCorpusError("noise distribution needs at least one positive frequency")
        if np.any(freq < 0):
            raise ValueError("frequencies must be non-negative")
        w = freq**NOISE_POWER
        self.probabilities = w / w.sum()
        self.cumulative = np.cumsum(self.probabilities)
        self.cumulative[-1] = 1.0
        self.rng = np.random.default_rng(seed)

    def sample(self, size: int | None = None):
        u = self.rng.random(size)
        idx = np.searchsorted(self.cumulative, u, side="right")
        return int(idx) if size is None else idx.astype(np.int64)


def build_noise_sampler(frequencies: Sequence[float], seed: int | None = None) -> NoiseSampler:
    return NoiseSampler(frequencies, seed)


# -- negative-sampling objective --------------------------------------------


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def neg_objective(input_vectors, output_vectors, center, context, negatives) -> float:
    """``log s(u_ctx . v_c) + sum_i log s(-u_neg_i . v_c)`` for one training sample."""
    v = input_vectors[center]
    val = _log_sigmoid(output_vectors[context] @ v)
    for n in negatives:
        val += _log_sigmoid(-(output_vectors[n] @ v))
    return float(val)


def neg_gradients(input_vectors, output_vectors, center, context, negatives):
    """Analytic gradient of :func:`neg_objective`.

    Returns ``(grad_center, {output_id: grad})`` where the center gradient is
    w.r.t. ``input_vectors[center]`` and repeated negatives accumulate.
    """
    v = input_vectors[center]
    u = output_vectors[context]
    g_pos = 1.0 - _sigmoid(u @ v)
    grad_v = g_pos * u
    grad_out = {int(context): g_pos * v}
    for n in negatives:
        un = output_vectors[n]
        s = _sigmoid(un @ v)
        grad_v = grad_v - s * un
        n = int(n)
        grad_out[n] = grad_out.get(n, 0.0) - s * v
    return grad_v, grad_out


@njit(cache=True, inline="always")
def _sig(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
def _sgd_pair(w_in, w_out, center, targets, n_targets, alpha, neu1e):
    # targets[0] is the positive context, the rest are negatives
    dim = w_in.shape[1]
    for d in range(dim):
        neu1e[d] = 0.0
    for j in range(n_targets):
        t = targets[j]
        f = 0.0
        for d in range(dim):
            f += w_in[center, d] * w_out[t, d]
        label = 1.0 if j == 0 else 0.0
        g = (label - _sig(f)) * alpha
        for d in range(dim):
            neu1e[d] += g * w_out[t, d]
        for d in range(dim):
            w_out[t, d] += g * w_in[center, d]
    for d in range(dim):
        w_in[center, d] += neu1e[d]


def sgd_step(input_vectors, output_vectors, center, context, negatives, step) -> None:
    """One in-place gradient-ascent step on the negative-sampling objective.

    Output rows are updated one target at a time, so when every target id is
    distinct the step equals ``step * neg_gradients(...)`` exactly.
    """
    targets = np.empty(len(negatives) + 1, dtype=np.int64)
    targets[0] = context
    targets[1:] = negatives
    neu1e = np.zeros(input_vectors.shape[1], dtype=input_vectors.dtype)
    _sgd_pair(input_vectors, output_vectors, center, targets, len(targets), step, neu1e)


# -- training ---------------------------------------------------------------


@njit(cache=True, inline="always")
def _next(state):
    # xorshift64*
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(2685821657736338717)


@njit(cache=True, inline="always")
def _uniform(state):
    return (_next(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _train_docs(
    flat, offsets, d_lo, d_hi, keep, cumulative, w_in, w_out,
    window, negatives, alpha0, alpha_end, total, done0, scale, state,
):
    sentence = np.empty(offsets[d_hi] - offsets[d_lo] + 1, dtype=np.int64)
    targets = np.empty(negatives + 1, dtype=np.int64)
    neu1e = np.zeros(w_in.shape[1], dtype=w_in.dtype)
    n_cum = cumulative.shape[0]
    done = 0
    for doc in range(d_lo, d_hi):
        n = 0
        for p in range(offsets[doc], offsets[doc + 1]):
            t = flat[p]
            done += 1
            if keep[t] >= 1.0 or _uniform(state) < keep[t]:
                sentence[n] = t
                n += 1
        progress = (done0 + done * scale) / total
        if progress > 1.0:
            progress = 1.0
        alpha = alpha0 - (alpha0 - alpha_end) * progress
        for pos in range(n):
            center = sentence[pos]
            b = 1 + int(_uniform(state) * window)
            if b > window:
                b = window
            lo = max(0, pos - b)
            hi = min(n, pos + b + 1)
            for c in range(lo, hi):
                if c == pos:
                    continue
                context = sentence[c]
                targets[0] = context
                m = 1
                for _ in range(negatives):
                    k = np.searchsorted(cumulative, _uniform(state), side="right")
                    if k >= n_cum:
                        k = n_cum - 1
                    if k == context:
                        continue
                    targets[m] = k
                    m += 1
                _sgd_pair(w_in, w_out, center, targets, m, alpha, neu1e)
    return done


@njit(cache=True, parallel=True)
def _train_docs_parallel(
    flat, offsets, bounds, keep, cumulative, w_in, w_out,
    window, negatives, alpha0, alpha_end, total, done0, states,
):
    # racy Hogwild-style updates to w_in / w_out across shards
    n_workers = bounds.shape[0] - 1
    done = np.zeros(n_workers, dtype=np.int64)
    for w in prange(n_workers):
        done[w] = _train_docs(
            flat, offsets, bounds[w], bounds[w + 1], keep, cumulative, w_in, w_out,
            window, negatives, alpha0, alpha_end, total, done0, n_workers, states[w],
        )
    return done.sum()


def _seed_state(seed: int) -> np.ndarray:
    # splitmix64 scramble, never zero
    z = (seed + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 31
    return np.array([z or 1], dtype=np.uint64)


def vocabulary_counts(corpus: TokenizedCorpus | Iterable[Sequence[int]]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for doc in corpus:
        for t in doc:
            counts[t] = counts.get(t, 0) + 1
    return counts


def train(corpus: TokenizedCorpus | Iterable[Sequence[int]], config: TrainingConfig = TrainingConfig()):
    """Train topic embeddings on tokenized documents.

    Topics occurring fewer than ``config.min_count`` times are left out.  Rows
    of the returned matrix follow ascending source topic id.
    """
    docs = [list(d) for d in corpus]
    counts = vocabulary_counts(docs)
    vocab = sorted(t for t, c in counts.items() if c >= config.min_count)
    if not vocab:
        raise EmptyCorpusError("no topic reaches min_count")
    row_of = {t: i for i, t in enumerate(vocab)}

    lengths, flat = [], []
    for doc in docs:
        ids = [row_of[t] for t in doc if t in row_of]
        if ids:
            flat.extend(ids)
            lengths.append(len(ids))
    flat = np.asarray(flat, dtype=np.int64)
    offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])

    freq = np.array([counts[t] for t in vocab], dtype=np.float64)
    keep = subsample_keep_probability(freq / freq.sum(), config.subsample)
    keep = np.atleast_1d(keep)
    cumulative = NoiseSampler(freq).cumulative

    rng = np.random.default_rng(config.seed)
    w_in = ((rng.random((len(vocab), config.dim)) - 0.5) / config.dim).astype(np.float32)
    w_out = np.zeros((len(vocab), config.dim), dtype=np.float32)

    n_docs = len(lengths)
    total = float(flat.size * config.epochs)
    done = 0
    workers = min(config.workers, max(n_docs, 1))
    log.info("training %d topics on %d tokens: %s", len(vocab), flat.size, config.describe())
    for epoch in range(config.epochs):
        if workers == 1:
            state = _seed_state(config.seed * 1_000_003 + epoch)
            done += _train_docs(
                flat, offsets, 0, n_docs, keep, cumulative, w_in, w_out,
                config.window, config.negatives, config.alpha, config.alpha_end,
                total, float(done), 1, state,
            )
        else:
            bounds = np.linspace(0, n_docs, workers + 1).astype(np.int64)
            states = np.stack(
                [_seed_state(config.seed * 1_000_003 + epoch * 7919 + w) for w in range(workers)]
            )
            done += _train_docs_parallel(
                flat, offsets, bounds, keep, cumulative, w_in, w_out,
                config.window, config.negatives, config.alpha, config.alpha_end,
                total, float(done), states,
            )
    return EmbeddingMatrix(w_in, w_out, source_ids=np.asarray(vocab, dtype=np.int64))


# -- query-time matrix ------------------------------------------------------


def unit_rows(vectors: np.ndarray) -> np.ndarray:
    """Row-normalized float64 copy; all-zero rows stay zero."""
    v = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    return np.divide(v, norms, out=np.zeros_like(v), where=norms > 0)


class EmbeddingMatrix:
    """Per-topic vectors plus a unit-normalized view for cosine queries.

    `source_ids[i]` is the topic id stored in row ``i``; by default rows are
    the topic ids themselves.
    """

    def __init__(self, input_vectors, output_vectors=None, source_ids=None) -> None:
        self.input_vectors = np.asarray(input_vectors)
        if self.input_vectors.ndim != 2:
            raise ValueError("input_vectors must be 2-d")
        if not np.all(np.isfinite(self.input_vectors)):
            raise ValueError("embedding contains non-finite values")
        self.output_vectors = output_vectors
        n = self.input_vectors.shape[0]
        if source_ids is None:
            source_ids = np.arange(n, dtype=np.int64)
        self.source_ids = np.asarray(source_ids, dtype=np.int64)
        if self.source_ids.shape != (n,):
            raise ValueError("source_ids length must match row count")
        self.row_of = {int(t): i for i, t in enumerate(self.source_ids)}
        if len(self.row_of) != n:
            raise ValueError("duplicate source ids")
        self.unit_vectors = unit_rows(self.input_vectors)

    def __len__(self) -> int:
        return self.input_vectors.shape[0]

    def __contains__(self, topic: int) -> bool:
        return topic in self.row_of

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def row(self, topic: int) -> int:
        try:
            return self.row_of[topic]
        except KeyError:
            raise UnknownTopicError(topic) from None

    def rows(self, topics: Iterable[int]) -> tuple[np.ndarray, list[int], list[int]]:
        """Rows for the embedded `topics`; returns ``(rows, kept, missing)``."""
        rows, kept, missing = [], [], []
        for t in topics:
            r = self.row_of.get(t)
            if r is None:
                missing.append(t)
            else:
                rows.append(r)
                kept.append(t)
        return np.asarray(rows, dtype=np.int64), kept, missing

    def reindexed(self, source_ids: Sequence[int]) -> "EmbeddingMatrix":
        """Same vectors labelled with new topic ids (e.g. ids of a larger lexicon)."""
        m = EmbeddingMatrix.__new__(EmbeddingMatrix)
        m.input_vectors = self.input_vectors
        m.output_vectors = self.output_vectors
        m.unit_vectors = self.unit_vectors
        m.source_ids = np.asarray(source_ids, dtype=np.int64)
        m.row_of = {int(t): i for i, t in enumerate(m.source_ids) if t >= 0}
        return m

    def cosine(self, a: int, b: int) -> float:
        return float(self.unit_vectors[self.row(a)] @ self.unit_vectors[self.row(b)])

    def nearest(self, topic: int, n: int = 10) -> list[tuple[int, float]]:
        sims = self.unit_vectors @ self.unit_vectors[self.row(topic)]
        sims[self.row(topic)] = -np.inf
        order = np.argsort(-sims, kind="stable")[:n]
        return [(int(self.source_ids[i]), float(sims[i])) for i in order]


def cosine(a: int, b: int, m: EmbeddingMatrix) -> float:
    return m.cosine(a, b)


# -- binary format ----------------------------------------------------------


def save_embeddings(m: EmbeddingMatrix, path: str | Path) -> None:
    """Write input vectors as ``FKTE`` header + little-endian float32 rows."""
    vectors = np.ascontiguousarray(m.input_vectors, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, vectors.shape[0], vectors.shape[1]))
        fh.write(vectors.tobytes())


def load_embeddings(path: str | Path, source_ids=None) -> EmbeddingMatrix:
    path = Path(path)
    size = path.stat().st_size
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    if len(head) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, count, dim = _HEADER.unpack(head)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    if size != _HEADER.size + count * dim * 4:
        raise ValueError(f"{path}: expected {count}x{dim} float32 rows, file size {size}")
    vectors = np.memmap(path, dtype="<f4", mode="r", offset=_HEADER.size, shape=(count, dim))
    return EmbeddingMatrix(vectors, source_ids=source_ids)
