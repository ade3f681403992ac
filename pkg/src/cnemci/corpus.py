"""From raw transcripts to per-transcript feature matrices.

A :class:`Corpus` holds every transcript after cleaning, its co-occurrence
network and (when embeddings are given) the word-pair similarity matrix of
that network, so enriched features can be recomputed for many thresholds
without touching the embedding table again.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .embedding import EmbeddingTable, similarity_matrix
from .errors import EmptyAfterFiltering, EmptyInput
from .features import LEXICAL_NAMES, FeatureMatrix, Vocabulary, bow_fit, bow_matrix, lexical_features
from .netbuild import EnrichmentReport, Network, build_cooccurrence, enrich_with_similarities
from .preprocess import (
    RawTranscript,
    TokenSequence,
    remove_stopwords_punct,
    strip_disfluencies,
    tokenize,
)
from .topometrics import FEATURE_NAMES, topo_features

__all__ = ["PreparedTranscript", "Corpus", "prepare_transcript", "prepare_corpus"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PreparedTranscript:
    id: str
    label: str
    words: TokenSequence       # after disfluency removal, stopwords kept
    content: TokenSequence     # stopwords and punctuation removed
    network: Network
    similarities: np.ndarray | None = None
    oov: np.ndarray | None = None

    def enriched(self, threshold: float) -> tuple[Network, EnrichmentReport]:
        if self.similarities is None:
            raise ValueError("transcript was prepared without embeddings")
        return enrich_with_similarities(self.network, self.similarities, threshold, self.oov)


def prepare_transcript(raw: RawTranscript, stopwords, fillers,
                       embeddings: EmbeddingTable | None = None,
                       cross_sentence: bool = True) -> PreparedTranscript:
    words = strip_disfluencies(tokenize(raw), fillers)
    content = remove_stopwords_punct(words, stopwords)
    net = build_cooccurrence(content, cross_sentence=cross_sentence)
    sims = oov = None
    if embeddings is not None:
        sims = similarity_matrix(net.nodes, embeddings)
        oov = np.array([w not in embeddings for w in net.nodes], dtype=bool)
    return PreparedTranscript(raw.id, raw.label, words, content, net, sims, oov)


def _prepare_one(args):
    raw, stopwords, fillers, embeddings, cross_sentence = args
    try:
        return prepare_transcript(raw, stopwords, fillers, embeddings, cross_sentence), None
    except (EmptyInput, EmptyAfterFiltering) as exc:
        return None, (raw.id, f"{type(exc).__name__}: {exc}")


def _topo_row(net: Network) -> np.ndarray:
    return topo_features(net).values


def _map(fn, items, jobs: int):
    if jobs is None or jobs <= 0:
        jobs = os.cpu_count() or 1
    if jobs == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


@dataclass(eq=False)
class Corpus:
    items: list[PreparedTranscript]
    excluded: list[tuple[str, str]] = field(default_factory=list)
    jobs: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.items)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.items)

    @property
    def has_embeddings(self) -> bool:
        return bool(self.items) and self.items[0].similarities is not None

    def __len__(self):
        return len(self.items)

    def _topo(self, nets: Sequence[Network], space: str) -> FeatureMatrix:
        rows = _map(_topo_row, list(nets), self.jobs)
        values = np.vstack(rows) if rows else np.zeros((0, len(FEATURE_NAMES)))
        return FeatureMatrix(self.ids, FEATURE_NAMES, values, space, self.labels)

    def cn(self) -> FeatureMatrix:
        if "CN" not in self._cache:
            self._cache["CN"] = self._topo([t.network for t in self.items], "CN")
        return self._cache["CN"]

    def cne(self, threshold: float) -> FeatureMatrix:
        key = ("CNE", float(threshold))
        if key not in self._cache:
            nets, report = self.enriched_networks(threshold)
            self._cache[key] = self._topo(nets, "CNE")
            self._cache[("CNE-report", float(threshold))] = report
        return self._cache[key]

    def enriched_networks(self, threshold: float) -> tuple[list[Network], EnrichmentReport]:
        if not self.has_embeddings:
            raise ValueError("corpus was prepared without embeddings")
        nets, total = [], EnrichmentReport()
        for t in self.items:
            net, rep = t.enriched(threshold)
            nets.append(net)
            total = total + rep
        return nets, total

    def enrichment_report(self, threshold: float) -> EnrichmentReport:
        self.cne(threshold)
        return self._cache[("CNE-report", float(threshold))]

    def lm(self) -> FeatureMatrix:
        if "LM" not in self._cache:
            rows = [[lexical_features(t.words)[n] for n in LEXICAL_NAMES] for t in self.items]
            values = np.array(rows, dtype=float).reshape(len(rows), len(LEXICAL_NAMES))
            self._cache["LM"] = FeatureMatrix(self.ids, LEXICAL_NAMES, values, "LM", self.labels)
        return self._cache["LM"]

    def bow_documents(self) -> list[TokenSequence]:
        return [t.content for t in self.items]

    def bow(self, vocab: Vocabulary | None = None, rows: Iterable[int] | None = None) -> FeatureMatrix:
        """Count matrix over ``rows`` (all by default); ``vocab`` defaults to
        the vocabulary of those same rows."""
        idx = list(range(len(self.items))) if rows is None else list(rows)
        docs = [self.items[i].content for i in idx]
        if vocab is None:
            vocab = bow_fit(docs)
        return FeatureMatrix([self.items[i].id for i in idx],
                             tuple(f"bow:{t}" for t in vocab.terms),
                             bow_matrix(docs, vocab).reshape(len(idx), len(vocab)), "BOW",
                             [self.items[i].label for i in idx])

    def fixed_space(self, space: str, threshold: float | None = None) -> FeatureMatrix:
        """CN, CNE or LM (spaces that need no fitting)."""
        if space == "CN":
            return self.cn()
        if space == "CNE":
            if threshold is None:
                raise ValueError("CNE needs a threshold")
            return self.cne(threshold)
        if space == "LM":
            return self.lm()
        raise ValueError(f"{space!r} is not a fixed feature space")


def prepare_corpus(raws: Iterable[RawTranscript], stopwords, fillers,
                   embeddings: EmbeddingTable | None = None,
                   cross_sentence: bool = True, jobs: int = 1) -> Corpus:
    """Clean every transcript; those left empty are excluded and listed in
    ``Corpus.excluded`` rather than aborting the run.

    ``jobs`` is the worker count for topology features (0 means one per CPU).
    """
    stopwords, fillers = frozenset(stopwords), frozenset(fillers)
    items, excluded = [], []
    # cleaning is cheap; only topology (see Corpus._topo) goes to the worker pool,
    # which also keeps the embedding table out of inter-process traffic
    for r in raws:
        item, skipped = _prepare_one((r, stopwords, fillers, embeddings, cross_sentence))
        if item is not None:
            items.append(item)
        else:
            logger.warning("excluding transcript %s (%s)", *skipped)
            excluded.append(skipped)
    return Corpus(items, excluded, jobs=jobs)
