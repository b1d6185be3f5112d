"""
Training topic embeddings with negative sampling
================================================

Three planted clusters of topics co-occur only within their own cluster;
after training, nearest neighbours should stay inside the cluster.
"""

import time

import numpy as np

from fastkate import TrainingConfig, train
from fastkate.synthetic import planted_clusters

lex, corpus, labels = planted_clusters(n_clusters=3, per_cluster=10, n_docs=10_000, seed=0)
config = TrainingConfig(seed=0)
print(config.describe())

t0 = time.perf_counter()
m = train(corpus, config)
print(f"trained {len(m)} topics x {m.dim} in {time.perf_counter() - t0:.2f}s")

sims = m.unit_vectors @ m.unit_vectors.T
np.fill_diagonal(sims, -np.inf)
nn = m.source_ids[sims.argmax(axis=1)]
print("intra-cluster nearest neighbours:", np.mean(labels[nn] == labels[m.source_ids]))

topic = lex.phrase_to_id["cluster_1_topic_0"]
for t, c in m.nearest(topic, 5):
    print(f"  {lex.id_to_phrase[t]:20s} {c:.3f}")
