"""Bag-of-words and lexical feature spaces, feature matrices, standardisation."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .preprocess import TokenSequence, is_punct

__all__ = [
    "SPACES",
    "LEXICAL_NAMES",
    "HONORE_SENTINEL",
    "Vocabulary",
    "FeatureMatrix",
    "Standardizer",
    "bow_fit",
    "bow_transform",
    "bow_matrix",
    "lexical_features",
    "fit_standardizer",
    "standardize",
]

SPACES = ("CN", "CNE", "LM", "BOW")

BRUNET_EXPONENT = 0.165
HONORE_SENTINEL = 10000.0
LEXICAL_NAMES = (
    "type_token_ratio",
    "brunet_index",
    "honore_statistic",
    "honore_undefined",
    "words_per_sentence",
    "sentence_count",
)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index


def _tokens(doc) -> Sequence[str]:
    return doc.tokens if isinstance(doc, TokenSequence) else doc


def bow_fit(train_docs: Iterable[TokenSequence | Sequence[str]]) -> Vocabulary:
    """Sorted set of every token in the training documents."""
    terms: set[str] = set()
    for doc in train_docs:
        terms.update(_tokens(doc))
    return Vocabulary(tuple(sorted(terms)))


def bow_transform(doc: TokenSequence | Sequence[str], vocab: Vocabulary) -> np.ndarray:
    """Raw term counts; tokens outside ``vocab`` are ignored."""
    vec = np.zeros(len(vocab))
    for tok in _tokens(doc):
        i = vocab.index.get(tok)
        if i is not None:
            vec[i] += 1
    return vec


def bow_matrix(docs, vocab: Vocabulary) -> np.ndarray:
    if not docs:
        return np.zeros((0, len(vocab)))
    return np.vstack([bow_transform(d, vocab) for d in docs])


def lexical_features(seq: TokenSequence) -> dict[str, float]:
    """Lexical richness of a transcript before stopword removal.

    Punctuation tokens are not counted as words.  With N words, V types and
    V1 hapax legomena:

    * type-token ratio  V / N
    * Brunet's W        N ** (V ** -0.165)
    * Honore's R        100 * ln(N) / (1 - V1 / V), capped at 10000; when
      every type is a hapax R is undefined, reported as the cap with
      ``honore_undefined`` = 1
    * words per sentence and sentence count
    """
    sentences = [[t for t in s if not is_punct(t)] for s in seq.sentences()]
    sentences = [s for s in sentences if s]
    words = [t for s in sentences for t in s]
    n = len(words)
    if n == 0:
        raise ValueError(f"transcript {seq.id!r} has no words")
    counts = Counter(words)
    v = len(counts)
    v1 = sum(1 for c in counts.values() if c == 1)
    if v1 == v:
        honore, undefined = HONORE_SENTINEL, 1.0
    else:
        honore, undefined = min(HONORE_SENTINEL, 100.0 * math.log(n) / (1.0 - v1 / v)), 0.0
    return {
        "type_token_ratio": v / n,
        "brunet_index": n ** (v ** -BRUNET_EXPONENT),
        "honore_statistic": honore,
        "honore_undefined": undefined,
        "words_per_sentence": n / len(sentences),
        "sentence_count": float(len(sentences)),
    }


@dataclass(frozen=True)
class FeatureMatrix:
    ids: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray
    space: str
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 2:
            vals = vals.reshape(len(self.ids), len(self.columns))
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "columns", tuple(self.columns))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.ids):
                raise ValueError("labels and ids differ in length")
        if vals.shape != (len(self.ids), len(self.columns)):
            raise ValueError(f"values shape {vals.shape} != ({len(self.ids)}, {len(self.columns)})")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.ids)

    def rows(self, idx) -> "FeatureMatrix":
        idx = list(idx)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return FeatureMatrix([self.ids[i] for i in idx], self.columns,
                             self.values[idx], self.space, labels)

    def with_values(self, values) -> "FeatureMatrix":
        return FeatureMatrix(self.ids, self.columns, values, self.space, self.labels)

    def to_csv(self, path) -> None:
        """``id,label,<columns>`` with floats written at full precision."""
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "label", *self.columns])
            labels = self.labels or [""] * len(self.ids)
            for rid, lab, row in zip(self.ids, labels, self.values):
                w.writerow([rid, lab, *(repr(float(x)) for x in row)])

    @classmethod
    def from_csv(cls, path, space: str) -> "FeatureMatrix":
        with Path(path).open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        return cls([r[0] for r in rows], header[2:],
                   np.array([[float(x) for x in r[2:]] for r in rows]).reshape(len(rows), len(header) - 2),
                   space, [r[1] for r in rows])


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray  # population std; 0 marks a constant column

    def transform(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        safe = np.where(self.scale > 0, self.scale, 1.0)
        z = (values - self.mean) / safe
        return np.where(self.scale > 0, z, 0.0)


def fit_standardizer(train: FeatureMatrix | np.ndarray) -> Standardizer:
    X = train.values if isinstance(train, FeatureMatrix) else np.asarray(train, dtype=float)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    # a column constant up to rounding is constant
    std = np.where(std > 1e-12 * np.maximum(1.0, np.abs(mean)), std, 0.0)
    return Standardizer(mean, std)


def standardize(train: FeatureMatrix, apply_to: FeatureMatrix) -> FeatureMatrix:
    """Z-score ``apply_to`` with the column means and std of ``train``."""
    if train.columns != apply_to.columns:
        raise ValueError("train and apply_to have different columns")
    return apply_to.with_values(fit_standardizer(train).transform(apply_to.values))
