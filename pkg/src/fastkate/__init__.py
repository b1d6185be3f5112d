"""Top-k area topic extraction over a knowledge base."""

from .category import (
    CategoryGraph,
    DepthMap,
    UnknownAreaError,
    WeightMap,
    bfs_depths,
    candidate_set,
    contributive_set,
    general_weight,
    general_weights,
)
from .embedding import (
    EmbeddingMatrix,
    NoiseSampler,
    TrainingConfig,
    build_noise_sampler,
    cosine,
    load_embeddings,
    save_embeddings,
    sgd_step,
    subsample_keep_probability,
    train,
)
from .evaluation import (
    average_precision,
    baseline_textrank,
    baseline_tfidf,
    mean_average_precision,
    precision_at_k,
)
from .extraction import (
    AdditiveObjective,
    CoverageObjective,
    EmptyCandidateSetError,
    Objective,
    RankedTopicList,
    extract_topk,
    extract_topk_exhaustive,
    static_scores,
)
from .lexicon import (
    TokenizedCorpus,
    TopicLexicon,
    build_corpus,
    build_lexicon,
    normalize_title,
    tokenize_document,
)

__version__ = "0.1.0"
