"""Candidate-topic lexicon and phrase tokenization.

Titles are normalized to lowercase underscore-joined phrases.  Raw text is
mapped onto those phrases by greedy longest match; words that belong to no
phrase are dropped, so a tokenized document is a pure sequence of topics.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_PHRASE_WORDS = 6
MIN_SENTENCE_LENGTH = 2

_SPLIT_RE = re.compile(r"[\s_]+")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def normalize_title(raw: str) -> str | None:
    """Normalize a knowledge-base title into a topical phrase.

    >>> normalize_title("Artificial Intelligence")
    'artificial_intelligence'
    >>> normalize_title("---") is None
    True
    """
    words = [w for w in _SPLIT_RE.split(raw.lower()) if w]
    if not words:
        return None
    phrase = "_".join(words)
    if all(_is_punct(ch) for ch in phrase):
        return None
    return phrase


def split_words(text: str) -> list[str]:
    """Lowercase `text` and split it into words with edge punctuation removed."""
    words = []
    for tok in text.lower().split():
        if tok[0].isalnum() and tok[-1].isalnum():
            words.append(tok)
            continue
        start, end = 0, len(tok)
        while start < end and _is_punct(tok[start]):
            start += 1
        while end > start and _is_punct(tok[end - 1]):
            end -= 1
        if start < end:
            words.append(tok[start:end])
    return words


@dataclass
class TopicLexicon:
    """Bijection between normalized phrases and dense topic ids."""

    id_to_phrase: list[str] = field(default_factory=list)
    frequency: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    phrase_to_id: dict[str, int] = field(init=False)

    def __post_init__(self) -> None:
        self.phrase_to_id = {p: i for i, p in enumerate(self.id_to_phrase)}
        if len(self.phrase_to_id) != len(self.id_to_phrase):
            raise ValueError("duplicate phrases in lexicon")
        self.frequency = np.asarray(self.frequency, dtype=np.int64)
        if self.frequency.shape != (len(self.id_to_phrase),):
            if self.frequency.size:
                raise ValueError("frequency length does not match phrase count")
            self.frequency = np.zeros(len(self.id_to_phrase), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.id_to_phrase)

    def __contains__(self, phrase: object) -> bool:
        return phrase in self.phrase_to_id

    def get(self, phrase: str) -> int | None:
        return self.phrase_to_id.get(phrase)

    def lookup(self, name: str) -> int | None:
        """Id for `name` given either as a phrase or as a human-typed title."""
        tid = self.phrase_to_id.get(name)
        if tid is None:
            norm = normalize_title(name)
            tid = self.phrase_to_id.get(norm) if norm else None
        return tid

    def subset(self, ids: Sequence[int]) -> "TopicLexicon":
        """New lexicon over `ids`, renumbered densely in the given order."""
        ids = list(ids)
        return TopicLexicon(
            [self.id_to_phrase[i] for i in ids], self.frequency[np.asarray(ids, dtype=np.int64)]
        )


@dataclass
class LexiconStats:
    read: int = 0
    accepted: int = 0
    rejected: int = 0
    duplicates: int = 0


def build_lexicon(titles: Iterable[str], stats: LexiconStats | None = None) -> TopicLexicon:
    """Distinct normalized titles, ids in first-seen order, frequencies zeroed."""
    stats = stats if stats is not None else LexiconStats()
    seen: dict[str, None] = {}
    for raw in titles:
        stats.read += 1
        phrase = normalize_title(raw)
        if phrase is None:
            stats.rejected += 1
            continue
        stats.accepted += 1
        if phrase in seen:
            stats.duplicates += 1
        else:
            seen[phrase] = None
    return TopicLexicon(list(seen))


def tokenize_document(
    words: Sequence[str],
    lexicon: TopicLexicon,
    max_phrase_words: int = MAX_PHRASE_WORDS,
    counts=None,
) -> list[int]:
    """Greedy left-to-right longest-match of `words` against the lexicon.

    Each emission increments ``counts[id]``; `counts` defaults to
    ``lexicon.frequency``.  Pass a private array or Counter to keep
    shard-local counts.
    """
    if max_phrase_words < 1:
        raise ValueError("max_phrase_words must be >= 1")
    if counts is None:
        counts = lexicon.frequency
    table = lexicon.phrase_to_id
    out: list[int] = []
    i, n = 0, len(words)
    while i < n:
        for width in range(min(max_phrase_words, n - i), 0, -1):
            tid = table.get("_".join(words[i : i + width]))
            if tid is not None:
                out.append(tid)
                counts[tid] += 1
                i += width
                break
        else:
            i += 1
    return out


@dataclass
class TokenizedCorpus:
    documents: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[list[int]]:
        return iter(self.documents)

    @property
    def n_tokens(self) -> int:
        return sum(len(d) for d in self.documents)


def build_corpus(
    documents: Iterable[str | Sequence[str]],
    lexicon: TopicLexicon,
    min_sentence_length: int = MIN_SENTENCE_LENGTH,
    max_phrase_words: int = MAX_PHRASE_WORDS,
) -> TokenizedCorpus:
    """Tokenize raw documents, keeping those with at least `min_sentence_length` topics.

    Documents may be raw strings or pre-split word lists.  Frequencies are
    counted only for retained documents and merged into the lexicon once.
    """
    counts = np.zeros(len(lexicon), dtype=np.int64)
    kept = []
    for doc in documents:
        words = split_words(doc) if isinstance(doc, str) else list(doc)
        local = Counter()
        ids = tokenize_document(words, lexicon, max_phrase_words, counts=local)
        if len(ids) < min_sentence_length:
            continue
        for tid, c in local.items():
            counts[tid] += c
        kept.append(ids)
    lexicon.frequency += counts
    return TokenizedCorpus(kept)


# -- file formats -----------------------------------------------------------


def write_lexicon(lexicon: TopicLexicon, path: str | Path) -> None:
    """TSV ``phrase<TAB>id<TAB>frequency`` sorted by id."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tid, phrase in enumerate(lexicon.id_to_phrase):
            fh.write(f"{phrase}\t{tid}\t{int(lexicon.frequency[tid])}\n")


def read_lexicon(path: str | Path) -> TopicLexicon:
    phrases: list[str] = []
    freqs: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(path, lineno, "expected 3 tab-separated fields")
            phrase, tid, freq = parts
            try:
                tid_i, freq_i = int(tid), int(freq)
            except ValueError:
                raise FormatError(path, lineno, "id and frequency must be integers") from None
            if tid_i != len(phrases):
                raise FormatError(path, lineno, f"expected id {len(phrases)}, got {tid_i}")
            if freq_i < 0:
                raise FormatError(path, lineno, "negative frequency")
            phrases.append(phrase)
            freqs.append(freq_i)
    try:
        return TopicLexicon(phrases, np.asarray(freqs, dtype=np.int64))
    except ValueError as exc:
        raise FormatError(path, 0, str(exc)) from None


def write_corpus(corpus: TokenizedCorpus, lexicon: TopicLexicon, path: str | Path) -> None:
    """One document per line, topic phrases separated by single spaces."""
    names = lexicon.id_to_phrase
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus.documents:
            fh.write(" ".join(names[t] for t in doc))
            fh.write("\n")


def read_corpus(path: str | Path, lexicon: TopicLexicon) -> TokenizedCorpus:
    docs = []
    table = lexicon.phrase_to_id
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            phrases = line.split()
            if not phrases:
                continue
            try:
                docs.append([table[p] for p in phrases])
            except KeyError as exc:
                raise FormatError(path, lineno, f"unknown topic {exc.args[0]!r}") from None
    return TokenizedCorpus(docs)


def read_lines(path: str | Path) -> Iterator[str]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.strip():
                yield line


class FormatError(ValueError):
    """Malformed input file; carries the file name and line number."""

    def __init__(self, path: str | Path, lineno: int, message: str) -> None:
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")
