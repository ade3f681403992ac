"""Word co-occurrence networks and their enrichment with similarity edges."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .embedding import EmbeddingTable, similarity_matrix
from .preprocess import TokenSequence

__all__ = [
    "COOCCURRENCE",
    "SIMILARITY",
    "Network",
    "EnrichmentReport",
    "build_cooccurrence",
    "enrich",
    "enrich_with_similarities",
]

COOCCURRENCE = "cooccurrence"
SIMILARITY = "similarity"


@dataclass(frozen=True)
class Network:
    """Undirected simple graph over distinct words.

    ``edge_kind`` maps each edge ``(i, j)`` with ``i < j`` (node indices) to
    its provenance.  ``adjacency`` is derived from it and read-only.
    """

    nodes: tuple[str, ...]
    edge_kind: Mapping[tuple[int, int], str]

    def __post_init__(self):
        nodes = tuple(self.nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate nodes")
        n = len(nodes)
        adj = np.zeros((n, n), dtype=bool)
        kinds = {}
        for (i, j), kind in self.edge_kind.items():
            if not (0 <= i < j < n):
                raise ValueError(f"bad edge {(i, j)}; need 0 <= i < j < {n}")
            if kind not in (COOCCURRENCE, SIMILARITY):
                raise ValueError(f"unknown edge kind {kind!r}")
            adj[i, j] = adj[j, i] = True
            kinds[(i, j)] = kind
        adj.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edge_kind", dict(sorted(kinds.items())))
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "index", {w: i for i, w in enumerate(nodes)})

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edge_kind)

    def edges(self, kind: str | None = None) -> list[tuple[str, str]]:
        return [
            (self.nodes[i], self.nodes[j])
            for (i, j), k in self.edge_kind.items()
            if kind is None or k == kind
        ]

    def has_edge(self, u: str, v: str) -> bool:
        i, j = self.index.get(u), self.index.get(v)
        return i is not None and j is not None and bool(self.adjacency[i, j])

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    def to_edgelist(self) -> str:
        """Tab-separated ``word1 word2 kind`` lines."""
        return "".join(f"{self.nodes[i]}\t{self.nodes[j]}\t{k}\n" for (i, j), k in self.edge_kind.items())

    def write_edgelist(self, path) -> None:
        Path(path).write_text(self.to_edgelist(), encoding="utf-8")

    @classmethod
    def from_edges(cls, nodes, edges, kind: str = COOCCURRENCE) -> "Network":
        """Convenience constructor from word pairs (used heavily in tests)."""
        nodes = tuple(nodes)
        index = {w: i for i, w in enumerate(nodes)}
        kinds = {}
        for u, v in edges:
            i, j = sorted((index[u], index[v]))
            if i != j:
                kinds[(i, j)] = kind
        return cls(nodes, kinds)


@dataclass(frozen=True)
class EnrichmentReport:
    pairs_considered: int = 0
    pairs_skipped_oov: int = 0
    pairs_skipped_zero_norm: int = 0
    edges_added: int = 0

    def __add__(self, other: "EnrichmentReport") -> "EnrichmentReport":
        return EnrichmentReport(
            self.pairs_considered + other.pairs_considered,
            self.pairs_skipped_oov + other.pairs_skipped_oov,
            self.pairs_skipped_zero_norm + other.pairs_skipped_zero_norm,
            self.edges_added + other.edges_added,
        )


def build_cooccurrence(seq: TokenSequence, cross_sentence: bool = True) -> Network:
    """Connect every pair of adjacent distinct words.

    Nodes are ordered by first occurrence.  With ``cross_sentence=False`` the
    last word of a sentence is not linked to the first word of the next.
    """
    index: dict[str, int] = {}
    for tok in seq.tokens:
        index.setdefault(tok, len(index))
    breaks = set() if cross_sentence else set(seq.sentence_breaks)
    kinds = {}
    toks = seq.tokens
    for pos in range(len(toks) - 1):
        if pos + 1 in breaks:
            continue
        i, j = index[toks[pos]], index[toks[pos + 1]]
        if i != j:
            kinds[(min(i, j), max(i, j))] = COOCCURRENCE
    return Network(tuple(index), kinds)


def enrich_with_similarities(net: Network, sims: np.ndarray, threshold: float,
                             oov_mask: np.ndarray | None = None) -> tuple[Network, EnrichmentReport]:
    """Enrich using a precomputed similarity matrix (NaN = no information).

    Splitting this out of :func:`enrich` lets a threshold sweep reuse one
    similarity matrix per transcript.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    n = net.n_nodes
    iu, ju = np.triu_indices(n, 1)
    free = ~net.adjacency[iu, ju]
    iu, ju = iu[free], ju[free]
    s = sims[iu, ju]
    nan = np.isnan(s)
    if oov_mask is None:
        n_oov = int(nan.sum())
        n_zero = 0
    else:
        oov_pair = oov_mask[iu] | oov_mask[ju]
        n_oov = int(oov_pair.sum())
        n_zero = int((nan & ~oov_pair).sum())
    with np.errstate(invalid="ignore"):
        add = ~nan & (s > threshold)
    kinds = dict(net.edge_kind)
    for i, j in zip(iu[add].tolist(), ju[add].tolist()):
        kinds[(i, j)] = SIMILARITY
    report = EnrichmentReport(len(iu), n_oov, n_zero, int(add.sum()))
    return Network(net.nodes, kinds), report


def enrich(net: Network, emb: EmbeddingTable, threshold: float,
           return_report: bool = False):
    """Add a similarity edge between every unconnected pair of in-vocabulary
    words whose cosine similarity is strictly greater than ``threshold``.

    Existing edges keep their kind.  Pass ``return_report=True`` to also get
    an :class:`EnrichmentReport`.
    """
    sims = similarity_matrix(net.nodes, emb)
    oov = np.array([w not in emb for w in net.nodes], dtype=bool)
    enriched, report = enrich_with_similarities(net, sims, threshold, oov)
    return (enriched, report) if return_report else enriched
