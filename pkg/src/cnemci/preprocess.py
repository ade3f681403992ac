"""Transcript ingestion and token cleaning.

Raw transcripts (plain text, one sentence per line, or a minimal subset of
CHAT) become lowercase token sequences.  Cleaning runs in three stages:

    tokenize -> strip_disfluencies -> remove_stopwords_punct

The output of the second stage is what lexical features are computed on;
the third stage feeds the co-occurrence network and bag of words.
"""

from __future__ import annotations

import csv
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyAfterFiltering, EmptyInput, FormatError

__all__ = [
    "RawTranscript",
    "TokenSequence",
    "tokenize",
    "strip_disfluencies",
    "remove_stopwords_punct",
    "parse_chat",
    "read_plain",
    "load_dataset",
    "load_wordlist",
    "default_stopwords",
    "default_fillers",
    "is_punct",
]

# Words keep internal apostrophes ("water's"); a leading-apostrophe clitic
# ("'ll" from "we 'll") is its own token; any other non-space char is punctuation.
_TOKEN_RE = re.compile(r"\w+(?:'\w+)*|'\w+|[^\w\s]")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'"})


@dataclass(frozen=True)
class RawTranscript:
    id: str
    label: str
    sentences: tuple[str, ...]
    source_format: str = "plain"

    def __post_init__(self):
        if not self.id:
            raise ValueError("transcript id must be non-empty")
        object.__setattr__(self, "sentences", tuple(self.sentences))


@dataclass(frozen=True)
class TokenSequence:
    """Tokens of one transcript.

    ``sentence_breaks`` holds the index of the first token of every sentence
    after the first one, so a pair ``(i, i + 1)`` crosses a sentence boundary
    exactly when ``i + 1`` is in it.
    """

    id: str
    label: str
    tokens: tuple[str, ...]
    sentence_breaks: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "sentence_breaks", tuple(self.sentence_breaks))
        prev = 0
        for b in self.sentence_breaks:
            if b <= prev or b >= len(self.tokens):
                raise ValueError(f"invalid sentence_breaks {self.sentence_breaks!r}")
            prev = b

    def __len__(self):
        return len(self.tokens)

    def sentences(self) -> list[tuple[str, ...]]:
        bounds = (0, *self.sentence_breaks, len(self.tokens))
        return [self.tokens[a:b] for a, b in zip(bounds, bounds[1:]) if b > a]

    @classmethod
    def from_sentences(cls, id: str, label: str, sentences: Iterable[Sequence[str]]):
        tokens: list[str] = []
        breaks: list[int] = []
        for sent in sentences:
            if not sent:
                continue
            if tokens:
                breaks.append(len(tokens))
            tokens.extend(sent)
        return cls(id, label, tuple(tokens), tuple(breaks))


def is_punct(token: str) -> bool:
    """True for tokens with no letter or digit in them."""
    return not any(ch.isalnum() for ch in token)


def _normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text).translate(_APOSTROPHES)


def tokenize(raw: RawTranscript) -> TokenSequence:
    """Split sentences into lowercase word and punctuation tokens.

    >>> tokenize(RawTranscript("t", "c", ["The water's running on the floor."])).tokens
    ('the', "water's", 'running', 'on', 'the', 'floor', '.')
    """
    sentences = []
    for sentence in raw.sentences:
        toks = [t.lower() for t in _TOKEN_RE.findall(_normalize(sentence))]
        if toks:
            sentences.append(toks)
    if not sentences:
        raise EmptyInput(f"transcript {raw.id!r} has no tokens")
    return TokenSequence.from_sentences(raw.id, raw.label, sentences)


def _strip_once(sentence: list[str], fillers: frozenset[str]) -> list[str]:
    words = [t for t in sentence if t not in fillers]
    out: list[str] = []
    for i, tok in enumerate(words):
        nxt = words[i + 1] if i + 1 < len(words) else None
        if (
            nxt is not None
            and len(tok) <= 2
            and nxt != tok
            and nxt.startswith(tok)
            and not is_punct(tok)
        ):
            continue  # false start
        if out and out[-1] == tok and not is_punct(tok):
            continue  # immediate repetition
        out.append(tok)
    return out


def strip_disfluencies(seq: TokenSequence, filler_lexicon: Iterable[str]) -> TokenSequence:
    """Remove filled pauses, short false starts and single-word repetitions.

    Rules apply within a sentence and are iterated to a fixed point, which
    makes the operation idempotent ("t t the" and "the the the" both reduce
    to "the").
    """
    fillers = frozenset(filler_lexicon)
    cleaned = []
    for sent in seq.sentences():
        cur = list(sent)
        while True:
            nxt = _strip_once(cur, fillers)
            if nxt == cur:
                break
            cur = nxt
        cleaned.append(cur)
    return TokenSequence.from_sentences(seq.id, seq.label, cleaned)


def remove_stopwords_punct(seq: TokenSequence, stopwords: Iterable[str]) -> TokenSequence:
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    kept = [[t for t in sent if t not in stop and not is_punct(t)] for sent in seq.sentences()]
    result = TokenSequence.from_sentences(seq.id, seq.label, kept)
    if not result.tokens:
        raise EmptyAfterFiltering(f"transcript {seq.id!r} is empty after stopword removal")
    return result


# --- CHAT subset -----------------------------------------------------------

_CHAT_BULLET = re.compile("\x15[^\x15]*\x15")
_CHAT_CODES = [
    re.compile(r"\[[^\]]*\]"),          # [//], [/], [*], [+ gram], [: target]
    re.compile(r"\(\.+\)"),             # (.) (..) (...) pauses
    re.compile(r"(?<!\S)&\S*"),         # &uh, &=laughs, &+fragment
    re.compile(r"(?<!\S)\+\S*"),        # +... +/. +//. terminators and linkers
    re.compile(r"(?<!\S)0\S*"),         # omitted words
    re.compile(r"(?<!\S)(?:xxx|yyy|www)(?!\S)"),
    re.compile(r"[<>‹›“”\"]"),
]
_CHAT_WORD_SUFFIX = re.compile(r"@\w+")
_CHAT_OMITTED_CHARS = re.compile(r"\((\w+)\)")


def _clean_chat_utterance(text: str) -> str:
    text = _CHAT_BULLET.sub(" ", text)
    for pat in _CHAT_CODES:
        text = pat.sub(" ", text)
    text = _CHAT_WORD_SUFFIX.sub("", text)
    text = _CHAT_OMITTED_CHARS.sub(r"\1", text)
    text = text.replace("_", " ")
    return " ".join(text.split())


def parse_chat(file_bytes: bytes | str, id: str = "transcript", label: str = "",
               speaker: str = "PAR") -> RawTranscript:
    """Extract the utterances of one speaker from a CHAT file.

    Only main-tier lines ``*SPEAKER:`` are kept (with their tab-indented
    continuation lines).  Header lines (``@``), dependent tiers (``%``),
    bracketed codes, ``&`` fragments, pauses and time bullets are dropped;
    the words themselves are left untouched so repetitions survive for
    :func:`strip_disfluencies`.
    """
    text = file_bytes.decode("utf-8") if isinstance(file_bytes, bytes) else file_bytes
    marker = f"*{speaker}:"
    utterances: list[str] = []
    current: list[str] | None = None
    for line in text.splitlines():
        if line.startswith(("\t", " ")) and current is not None:
            current.append(line.strip())
            continue
        if current is not None:
            utterances.append(" ".join(current))
            current = None
        if line.startswith(marker):
            current = [line[len(marker):].strip()]
    if current is not None:
        utterances.append(" ".join(current))
    if not utterances:
        raise FormatError(f"no {marker} tier found")
    sentences = [s for s in (_clean_chat_utterance(u) for u in utterances) if s]
    if not sentences:
        raise FormatError(f"{marker} tier has no words")
    return RawTranscript(id, label, tuple(sentences), "chat")


def read_plain(text: str, id: str, label: str = "") -> RawTranscript:
    """One sentence per line; blank lines are ignored."""
    sentences = [ln.strip() for ln in text.splitlines() if ln.strip()]
    return RawTranscript(id, label, tuple(sentences), "plain")


# --- datasets and word lists -----------------------------------------------

def load_wordlist(path) -> frozenset[str]:
    """Read a one-token-per-line UTF-8 file; ``#`` starts a comment line."""
    text = Path(path).read_text(encoding="utf-8")
    return frozenset(
        _normalize(ln.strip()).lower()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    )


def _packaged_list(name: str) -> frozenset[str]:
    with resources.as_file(resources.files("cnemci") / "data" / name) as p:
        return load_wordlist(p)


def default_stopwords(language: str = "en") -> frozenset[str]:
    return _packaged_list(f"stopwords_{language}.txt")


def default_fillers(language: str = "en") -> frozenset[str]:
    return _packaged_list(f"fillers_{language}.txt")


def load_dataset(directory, speaker: str = "PAR",
                 label_set: Iterable[str] | None = None) -> list[RawTranscript]:
    """Load ``labels.csv`` (``id,label,path``) and the files it lists.

    ``path`` is relative to ``directory``.  Files ending in ``.cha`` are parsed
    as CHAT; anything else is read as plain text.
    """
    directory = Path(directory)
    manifest = directory / "labels.csv"
    try:
        handle = manifest.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read manifest: {exc}", path=manifest) from exc
    allowed = set(label_set) if label_set is not None else None
    out = []
    seen = set()
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["id", "label", "path"]:
            raise FormatError("header must be 'id,label,path'", path=manifest, line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise FormatError(f"expected 3 fields, got {len(row)}", path=manifest, line=lineno)
            tid, label, rel = (c.strip() for c in row)
            if not tid or not label:
                raise FormatError("empty id or label", path=manifest, line=lineno)
            if tid in seen:
                raise FormatError(f"duplicate id {tid!r}", path=manifest, line=lineno)
            if allowed is not None and label not in allowed:
                raise FormatError(f"label {label!r} not in {sorted(allowed)}", path=manifest, line=lineno)
            seen.add(tid)
            fpath = directory / rel
            try:
                data = fpath.read_bytes()
            except OSError as exc:
                raise FormatError(f"cannot read transcript: {exc}", path=fpath) from exc
            try:
                if fpath.suffix.lower() == ".cha":
                    raw = parse_chat(data, id=tid, label=label, speaker=speaker)
                else:
                    raw = read_plain(data.decode("utf-8"), id=tid, label=label)
            except UnicodeDecodeError as exc:
                raise FormatError(f"not UTF-8 ({exc.reason})", path=fpath) from exc
            except FormatError as exc:
                raise FormatError(str(exc), path=fpath) from exc
            if not raw.sentences:
                raise FormatError("no sentences", path=fpath)
            out.append(raw)
    return out
