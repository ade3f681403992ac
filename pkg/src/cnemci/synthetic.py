"""Generated transcripts and embedding tables for testing and demos.

Two classes with disjoint vocabularies:

* ``chain``: each transcript walks through many different topic words,
  rarely repeating one, so its co-occurrence network is long and thin.
* ``loop``: each transcript keeps cycling through a handful of words, so
  its network is small, dense and full of cycles.

Embedding vectors are a per-topic centre plus Gaussian noise, which gives
within-topic similarities spread around the middle of [0, 1] and
cross-topic similarities near 0.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .embedding import EmbeddingTable
from .preprocess import RawTranscript

__all__ = [
    "FIGURE_TRANSCRIPT",
    "make_vocabulary",
    "synthetic_corpus",
    "synthetic_embeddings",
    "write_dataset",
]

FIGURE_TRANSCRIPT = (
    "The water's running on the floor.",
    "Boy's taking cookies out of cookie out of the cookie jar.",
    "The stool is falling over.",
    "The girl was asking for a cookie.",
)

_ONSETS = "b d f g k l m n p r s t v z".split()
_VOWELS = "a e i o u".split()
_FUNCTION_WORDS = ("the", "and", "a", "of", "is", "to", "in", "on")


def make_vocabulary(n: int, rng: np.random.Generator, taken: set | None = None) -> list[str]:
    """``n`` distinct pronounceable nonsense words (three syllables)."""
    taken = set() if taken is None else taken
    words = []
    while len(words) < n:
        w = "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(3))
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def _sentences(words: list[str], rng, min_len=5, max_len=9) -> list[str]:
    out, pos = [], 0
    while pos < len(words):
        n = int(rng.integers(min_len, max_len + 1))
        chunk = list(words[pos:pos + n])
        pos += n
        # sprinkle function words so stopword removal has something to do
        for _ in range(int(rng.integers(1, 3))):
            chunk.insert(int(rng.integers(0, len(chunk) + 1)), str(rng.choice(_FUNCTION_WORDS)))
        out.append(" ".join(chunk).capitalize() + ".")
    return out


def synthetic_corpus(n_per_class: int = 40, seed: int = 0, vocab_size: int = 60,
                     length: tuple[int, int] = (40, 70),
                     labels: tuple[str, str] = ("chain", "loop")):
    """Return ``(transcripts, vocabularies)`` for a two-class problem.

    ``vocabularies`` maps each label to its topic words, which is handy for
    building a matching embedding table.
    """
    rng = np.random.default_rng(seed)
    taken: set = set()
    vocab = {lab: make_vocabulary(vocab_size, rng, taken) for lab in labels}
    chain_lab, loop_lab = labels
    out = []
    for i in range(n_per_class):
        for lab in labels:
            n_tokens = int(rng.integers(length[0], length[1] + 1))
            words = vocab[lab]
            if lab == chain_lab:
                seq = [words[j] for j in rng.permutation(len(words))]
                while len(seq) < n_tokens:
                    seq += [words[j] for j in rng.permutation(len(words))]
                seq = seq[:n_tokens]
            else:
                loop = [words[j] for j in rng.choice(len(words), size=int(rng.integers(4, 8)), replace=False)]
                seq = []
                while len(seq) < n_tokens:
                    if rng.random() < 0.15:
                        seq.append(words[int(rng.integers(len(words)))])
                    else:
                        seq.append(loop[len(seq) % len(loop)])
            out.append(RawTranscript(f"{lab}{i:03d}", lab, tuple(_sentences(seq, rng))))
    return out, vocab


def synthetic_embeddings(topics: dict[str, list[str]], dim: int = 20, noise: float = 1.0,
                         seed: int = 0, extra_words=()) -> EmbeddingTable:
    """Embedding table with one cluster per topic.

    ``extra_words`` get pure-noise vectors (no topic).
    """
    rng = np.random.default_rng(seed)
    mapping = {}
    for words in topics.values():
        centre = rng.normal(size=dim)
        centre *= 1.0 / np.linalg.norm(centre)
        for w in words:
            mapping[w] = centre + noise * rng.normal(size=dim) / np.sqrt(dim)
    for w in extra_words:
        if w not in mapping:
            mapping[w] = rng.normal(size=dim) / np.sqrt(dim)
    return EmbeddingTable.from_mapping(mapping)


def write_dataset(transcripts, directory) -> Path:
    """Write plain-text transcripts plus a ``labels.csv`` manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with (directory / "labels.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "label", "path"])
        for t in transcripts:
            name = f"{t.id}.txt"
            (directory / name).write_text("\n".join(t.sentences) + "\n", encoding="utf-8")
            w.writerow([t.id, t.label, name])
    return directory
