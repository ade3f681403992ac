"""Word-embedding tables in word2vec text format, and cosine similarity."""

from __future__ import annotations

import gzip
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import FormatError, UndefinedSimilarity

__all__ = ["EmbeddingTable", "load_embeddings", "write_embeddings", "cosine_similarity",
           "similarity_matrix"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable word -> vector map.

    ``vectors`` rows are aligned with ``words``; ``duplicate_count`` is how
    many lines of the source file were shadowed by a later line for the same
    word.
    """

    dim: int
    words: tuple[str, ...]
    vectors: np.ndarray
    duplicate_count: int = 0

    def __post_init__(self):
        vec = np.array(self.vectors, dtype=float, copy=True).reshape(len(self.words), self.dim)
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if not np.all(np.isfinite(vec)):
            raise ValueError("embedding vectors contain NaN or Inf")
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate words in table")
        vec.flags.writeable = False
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[float]]) -> "EmbeddingTable":
        words = list(mapping)
        if not words:
            raise ValueError("empty mapping")
        rows = [np.asarray(list(mapping[w]), dtype=float) for w in words]
        return cls(len(rows[0]), tuple(words), np.vstack(rows))

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def __getitem__(self, word) -> np.ndarray:
        return self.vectors[self._index[word]]

    def get(self, word, default=None):
        i = self._index.get(word)
        return default if i is None else self.vectors[i]


def _open_text(path: Path):
    with path.open("rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rt", encoding="utf-8")
    return path.open("r", encoding="utf-8")


def load_embeddings(path) -> EmbeddingTable:
    """Read a word2vec text file (optionally gzipped).

    The header is ``N D``; each of the following N lines is a word and D
    numbers.  A repeated word overwrites the earlier entry.
    """
    path = Path(path)
    try:
        return _load(path)
    except UnicodeDecodeError as exc:
        raise FormatError(f"not UTF-8 ({exc.reason})", path=path) from None


def _load(path: Path) -> EmbeddingTable:
    entries: dict[str, np.ndarray] = {}
    duplicates = 0
    n_lines = 0
    with _open_text(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise FormatError("header must be 'N D'", path=path, line=1)
        try:
            n_expected, dim = int(header[0]), int(header[1])
        except ValueError:
            raise FormatError("header must be two integers", path=path, line=1) from None
        if n_expected < 0 or dim <= 0:
            raise FormatError("header counts out of range", path=path, line=1)
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\r\n").rstrip().split(" ")
            if parts == [""]:
                continue
            if len(parts) != dim + 1:
                raise FormatError(f"expected {dim} components, got {len(parts) - 1}",
                                  path=path, line=lineno)
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError:
                raise FormatError("non-numeric component", path=path, line=lineno) from None
            if not np.all(np.isfinite(vec)):
                raise FormatError("NaN or Inf component", path=path, line=lineno)
            n_lines += 1
            word = parts[0]
            if word in entries:
                duplicates += 1
                del entries[word]  # last wins, and takes the later position
            entries[word] = vec
    if n_lines != n_expected:
        raise FormatError(f"header declares {n_expected} vectors, file has {n_lines}",
                          path=path, line=1)
    if duplicates:
        logger.warning("%s: %d duplicate word(s), later lines kept", path, duplicates)
    words = tuple(entries)
    matrix = np.vstack(list(entries.values())) if words else np.zeros((0, dim))
    return EmbeddingTable(dim, words, matrix, duplicate_count=duplicates)


def write_embeddings(table: EmbeddingTable, path) -> None:
    """Write ``table`` in word2vec text format (gzipped if ``path`` ends in .gz)."""
    path = Path(path)
    lines = [f"{len(table)} {table.dim}\n"]
    for w, vec in zip(table.words, table.vectors):
        lines.append(w + " " + " ".join(repr(float(x)) for x in vec) + "\n")
    text = "".join(lines)
    if path.suffix == ".gz":
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            fh.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def cosine_similarity(u, v) -> float:
    """dot(u, v) / (|u| |v|), clamped to [-1, 1]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = math.sqrt(float(np.dot(u, u)))
    nv = math.sqrt(float(np.dot(v, v)))
    if nu == 0.0 or nv == 0.0:
        raise UndefinedSimilarity("zero-norm vector")
    return min(1.0, max(-1.0, float(np.dot(u, v)) / (nu * nv)))


def similarity_matrix(words: Iterable[str], emb: EmbeddingTable) -> np.ndarray:
    """Pairwise cosine similarity of ``words`` as a symmetric matrix.

    Entries involving an out-of-vocabulary or zero-norm word are NaN.  The
    diagonal is NaN as well, since self-similarity is never an edge.
    """
    words = list(words)
    n = len(words)
    out = np.full((n, n), np.nan)
    idx = [i for i, w in enumerate(words) if w in emb]
    if not idx:
        return out
    vec = np.vstack([emb[words[i]] for i in idx])
    norms = np.sqrt(np.einsum("ij,ij->i", vec, vec))
    ok = norms > 0
    idx = np.asarray(idx)[ok]
    vec, norms = vec[ok], norms[ok]
    sims = np.clip((vec @ vec.T) / np.outer(norms, norms), -1.0, 1.0)
    sims = np.triu(sims, 1)
    sims = sims + sims.T  # exact symmetry
    out[np.ix_(idx, idx)] = sims
    np.fill_diagonal(out, np.nan)
    return out
