import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastkate.category import UnknownAreaError, WeightMap
from fastkate.embedding import EmbeddingMatrix
from fastkate.extraction import (
    AdditiveObjective,
    CoverageObjective,
    EmptyCandidateSetError,
    InstanceTooLargeError,
    RankedTopicList,
    extract_topk,
    extract_topk_exhaustive,
    extract_topk_naive,
    format_ranked,
    read_ranked,
    static_scores,
    top_k_static,
)

AREA = 0


def instance(vectors, weights):
    """Topic ids are row indices; `weights` maps contributive ids to weights."""
    m = EmbeddingMatrix(np.asarray(vectors, dtype=np.float64))
    return m, WeightMap(AREA, dict(weights))


def _cos(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))


def test_forced_pick():
    m, w = instance([[1, 0], [0, 1]], {0: 1.0})
    for k in (1, 3):
        r = extract_topk(AREA, k, {1}, {0}, w, m)
        assert r.topics == [1]
        assert r.truncated == (k > 1)


def test_hand_instance_matches_best_pair():
    # area 0 and topic 4 are contributive; 1..3 are candidates
    vecs = [[1, 0], [1, 1], [0, 1], [1, -1], [1, 0.5]]
    w = {0: 2.0, 4: 1.0}
    m, wm = instance(vecs, w)

    def value(T):
        return sum(w[j] * _cos(vecs[h], vecs[j]) for h in T for j in w)

    best = max(itertools.combinations([1, 2, 3], 2), key=value)
    r = extract_topk(AREA, 2, {1, 2, 3}, set(w), wm, m)
    assert set(r.topics) == set(best)
    assert sum(r.scores) == pytest.approx(value(best), abs=1e-12)


def test_static_scores_single_term():
    m, w = instance([[1, 0], [0.3, 0.7], [-1, 2]], {0: 1.0})
    s = static_scores({1, 2}, {0}, w, m)
    assert s[1] == pytest.approx(m.cosine(1, 0), abs=1e-15)
    assert s[2] == pytest.approx(m.cosine(2, 0), abs=1e-15)


def test_static_scores_zero_weights():
    m, w = instance(np.random.default_rng(0).normal(size=(5, 3)), {0: 0.0, 1: 0.0})
    assert set(static_scores({2, 3, 4}, {0, 1}, w, m).values()) == {0.0}


def test_static_scores_hand_arithmetic():
    # a = (1, 1) with weight 2, b = (0, 1) with weight 1
    m, w = instance([[1, 1], [0, 1], [1, 0], [3, 4]], {0: 2.0, 1: 1.0})
    s = static_scores({2, 3}, {0, 1}, w, m)
    assert s[2] == pytest.approx(2 / math.sqrt(2), abs=1e-9)
    assert s[3] == pytest.approx(2 * 7 / (5 * math.sqrt(2)) + 4 / 5, abs=1e-9)


def random_instance(rng, n_cand, n_contrib, dim=5, nonneg=False, ties=False):
    vecs = rng.normal(size=(1 + n_cand + n_contrib, dim))
    if nonneg:
        vecs = np.abs(vecs)
    if ties and n_cand >= 2:
        vecs[2] = vecs[1]
    cand = set(range(1, 1 + n_cand))
    contrib = {0} | set(range(1 + n_cand, 1 + n_cand + n_contrib - 1))
    weights = {j: float(rng.uniform(0, 1)) for j in contrib}
    m, w = instance(vecs, weights)
    return m, w, cand, contrib


@pytest.mark.parametrize("seed", range(30))
def test_additive_greedy_equals_static_topk(seed):
    rng = np.random.default_rng(seed)
    m, w, cand, contrib = random_instance(rng, 12, 6, ties=seed % 3 == 0)
    k = int(rng.integers(1, 12))
    r = extract_topk(AREA, k, cand, contrib, w, m)
    assert r.entries == top_k_static(static_scores(cand, contrib, w, m), k)


def test_ties_break_to_smaller_id():
    m, w = instance([[1, 0], [0, 1], [0, 1], [0, 1]], {0: 1.0})
    assert extract_topk(AREA, 3, {3, 1, 2}, {0}, w, m).topics == [1, 2, 3]


@pytest.mark.parametrize("objective", [AdditiveObjective(), CoverageObjective()])
@pytest.mark.parametrize("seed", range(5))
def test_naive_loop_agrees_and_counts(objective, seed):
    rng = np.random.default_rng(seed)
    m, w, cand, contrib = random_instance(rng, 9, 4, nonneg=True)
    k = 4
    fast = extract_topk(AREA, k, cand, contrib, w, m, objective)
    naive = extract_topk_naive(AREA, k, cand, contrib, w, m, objective)
    assert naive.result.topics == fast.topics
    np.testing.assert_allclose(naive.result.scores, fast.scores, atol=1e-12)
    c1, c2 = len(cand), len(contrib)
    assert naive.evaluations == k * c1 * c2


def test_coverage_prefers_diverse_pair():
    # two contributive directions; candidates 1 and 2 duplicate one direction
    vecs = [[1, 0], [1, 0.01], [1, 0.02], [0, 1], [0, 1]]
    m, w = instance(vecs, {0: 1.0, 4: 1.0})
    add = extract_topk(AREA, 2, {1, 2, 3}, {0, 4}, w, m, AdditiveObjective())
    assert add.topics == [2, 1]
    cov = extract_topk(AREA, 2, {1, 2, 3}, {0, 4}, w, m, CoverageObjective())
    assert cov.topics == [2, 3]
    assert cov.scores[0] >= cov.scores[1]


def test_errors():
    m, w = instance([[1, 0], [0, 1]], {0: 1.0})
    with pytest.raises(EmptyCandidateSetError):
        extract_topk(AREA, 1, set(), {0}, w, m)
    with pytest.raises(EmptyCandidateSetError):
        extract_topk(AREA, 1, {7}, {0}, w, m)
    with pytest.raises(UnknownAreaError):
        extract_topk(5, 1, {1}, {0}, w, m)


def test_unembedded_candidates_skipped():
    m, w = instance([[1, 0], [0, 1]], {0: 1.0})
    r = extract_topk(AREA, 1, {1, 99}, {0}, w, m)
    assert r.topics == [1] and r.dropped == 1


# -- exhaustive oracle ------------------------------------------------------


def test_exhaustive_full_set_and_singleton():
    rng = np.random.default_rng(4)
    m, w, cand, contrib = random_instance(rng, 4, 3)
    obj = CoverageObjective()
    full = extract_topk_exhaustive(AREA, 4, cand, contrib, w, m, obj)
    assert full.value == pytest.approx(obj.value(cand, contrib, w, m), abs=1e-12)
    single = extract_topk_exhaustive(AREA, 1, cand, contrib, w, m, obj)
    assert single.value == pytest.approx(max(obj.value({t}, contrib, w, m) for t in cand), abs=1e-12)


def test_exhaustive_limits():
    rng = np.random.default_rng(0)
    m, w, cand, contrib = random_instance(rng, 13, 2)
    with pytest.raises(InstanceTooLargeError):
        extract_topk_exhaustive(AREA, 2, cand, contrib, w, m)
    with pytest.raises(InstanceTooLargeError):
        extract_topk_exhaustive(AREA, 5, set(range(1, 6)), contrib, w, m)


@pytest.mark.parametrize("seed", range(20))
def test_greedy_bound_coverage(seed):
    rng = np.random.default_rng(100 + seed)
    m, w, cand, contrib = random_instance(rng, 10, 5)
    obj = CoverageObjective()
    r = extract_topk(AREA, 3, cand, contrib, w, m, obj)
    opt = extract_topk_exhaustive(AREA, 3, cand, contrib, w, m, obj).value
    assert obj.value(r.topics, contrib, w, m) >= (1 - 1 / math.e) * opt - 1e-12


# -- set-function properties ------------------------------------------------

ids = st.sets(st.integers(1, 8), max_size=5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), ids, st.integers(1, 8), st.integers(1, 8),
       st.sampled_from(["additive", "coverage"]))
def test_monotone_and_submodular(seed, T, s, t, kind):
    rng = np.random.default_rng(seed)
    # additive gains are only non-negative when cosines are, so draw from the positive orthant
    m, w, _, contrib = random_instance(rng, 8, 4, nonneg=kind == "additive")
    obj = AdditiveObjective() if kind == "additive" else CoverageObjective()
    T = T - {t}
    assert obj.value(T | {t}, contrib, w, m) >= obj.value(T, contrib, w, m) - 1e-12
    if s != t and s not in T:
        g_small = obj.marginal_gain(T, t, contrib, w, m)
        g_big = obj.marginal_gain(T | {s}, t, contrib, w, m)
        assert g_small >= g_big - 1e-12
    assert obj.value(set(), contrib, w, m) == 0.0


def test_result_file_roundtrip(tmp_path):
    r = RankedTopicList(0, [(2, 3.5), (1, 1.25)], elapsed=0.01)
    text = format_ranked(r, ["area", "b", "c"])
    assert text.splitlines()[-1].startswith("elapsed_seconds\t")
    p = tmp_path / "r.tsv"
    p.write_text(text)
    assert read_ranked(p) == [("c", 3.5), ("b", 1.25)]
