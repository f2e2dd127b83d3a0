"""Topical-component extraction and rubric-based essay scoring.

The pipeline turns a neural scorer's attention dump into topical
components (topic words plus example phrases), computes rubric features
against them, and trains a score classifier evaluated with quadratic
weighted kappa. A PositionRank keyword baseline and a synthetic corpus
generator round out the toolkit.
"""

from .attention import (
    AttentionDump,
    PhraseRecord,
    filter_by_threshold,
    load_dump,
    restrict_to_essays,
    save_dump,
)
from .clustering import Clustering, k_medoids, pairwise_distances
from .corpus import (
    Corpus,
    CorpusSplit,
    Essay,
    SourceText,
    load_corpus,
    load_source,
    save_corpus,
    stratified_split,
    tokenize,
)
from .embeddings import (
    EmbeddingTable,
    cosine_similarity,
    load_embeddings,
    save_embeddings,
    train_embeddings,
)
from .features import (
    MatchParams,
    RubricFeatures,
    extract_features,
    phrase_mentioned,
    read_features_csv,
    write_features_csv,
)
from .metrics import EvalReport, paired_bootstrap_pvalue, pearson_r, qwk
from .positionrank import (
    PrParams,
    RankedWords,
    WordGraph,
    build_tc_pr,
    build_word_graph,
    extract_keyphrases,
    rank_graph,
    rank_words,
)
from .scoring import (
    EnsembleModel,
    ForestConfig,
    load_model,
    predict,
    predict_many,
    save_model,
    train_model,
)
from .synth import SynthResult, SynthSpec, generate
from .tc import (
    TCParams,
    TopicalComponents,
    cluster_phrases,
    extract_tc,
    generate_example_phrases,
    generate_topic_words,
    load_tc,
    save_tc,
)

__version__ = "0.1.0"

__all__ = [
    "AttentionDump",
    "Clustering",
    "Corpus",
    "CorpusSplit",
    "EmbeddingTable",
    "EnsembleModel",
    "Essay",
    "EvalReport",
    "ForestConfig",
    "MatchParams",
    "PhraseRecord",
    "PrParams",
    "RankedWords",
    "RubricFeatures",
    "SourceText",
    "SynthResult",
    "SynthSpec",
    "TCParams",
    "TopicalComponents",
    "WordGraph",
    "build_tc_pr",
    "build_word_graph",
    "cluster_phrases",
    "cosine_similarity",
    "extract_features",
    "extract_keyphrases",
    "extract_tc",
    "filter_by_threshold",
    "generate",
    "generate_example_phrases",
    "generate_topic_words",
    "k_medoids",
    "load_corpus",
    "load_dump",
    "load_embeddings",
    "load_model",
    "load_source",
    "load_tc",
    "paired_bootstrap_pvalue",
    "pairwise_distances",
    "pearson_r",
    "phrase_mentioned",
    "predict",
    "predict_many",
    "qwk",
    "rank_graph",
    "rank_words",
    "read_features_csv",
    "restrict_to_essays",
    "save_corpus",
    "save_dump",
    "save_embeddings",
    "save_model",
    "save_tc",
    "stratified_split",
    "tokenize",
    "train_embeddings",
    "train_model",
    "write_features_csv",
]
