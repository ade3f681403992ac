"""Classify speech transcripts with word co-occurrence networks.

Transcripts are cleaned, turned into word adjacency networks, optionally
enriched with edges between words whose embeddings are similar, and
described by topological, bag-of-words and lexical features.  Classifiers
and voting combiners are evaluated with stratified cross-validation.
"""

from .classify import (
    majority_vote,
    train_gnb,
    train_knn,
    train_model,
    train_svm_linear,
    train_svm_rbf,
)
from .corpus import Corpus, prepare_corpus, prepare_transcript
from .embedding import EmbeddingTable, cosine_similarity, load_embeddings
from .errors import (
    CnemciError,
    ConfigError,
    EmptyAfterFiltering,
    EmptyInput,
    FormatError,
    SplitError,
    TrainingError,
    UndefinedSimilarity,
    VoteError,
)
from .evalharness import EvalConfig, cross_validate, stratified_kfold, threshold_sweep
from .features import FeatureMatrix, bow_fit, bow_transform, lexical_features, standardize
from .netbuild import Network, build_cooccurrence, enrich
from .preprocess import (
    RawTranscript,
    TokenSequence,
    default_fillers,
    default_stopwords,
    load_dataset,
    parse_chat,
    remove_stopwords_punct,
    strip_disfluencies,
    tokenize,
)
from .topometrics import FEATURE_NAMES, topo_features

__version__ = "0.1.0"

__all__ = [
    "bow_fit",
    "bow_transform",
    "build_cooccurrence",
    "CnemciError",
    "ConfigError",
    "Corpus",
    "cosine_similarity",
    "cross_validate",
    "default_fillers",
    "default_stopwords",
    "EmbeddingTable",
    "EmptyAfterFiltering",
    "EmptyInput",
    "enrich",
    "EvalConfig",
    "FEATURE_NAMES",
    "FeatureMatrix",
    "FormatError",
    "lexical_features",
    "load_dataset",
    "load_embeddings",
    "majority_vote",
    "Network",
    "parse_chat",
    "prepare_corpus",
    "prepare_transcript",
    "RawTranscript",
    "remove_stopwords_punct",
    "SplitError",
    "standardize",
    "stratified_kfold",
    "strip_disfluencies",
    "threshold_sweep",
    "tokenize",
    "TokenSequence",
    "topo_features",
    "train_gnb",
    "train_knn",
    "train_model",
    "train_svm_linear",
    "train_svm_rbf",
    "TrainingError",
    "UndefinedSimilarity",
    "VoteError",
]
