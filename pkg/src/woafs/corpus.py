"""Review ingestion, tokenization and candidate word pools.

Reviews are whitespace-tokenized and lowercased; punctuation stays attached
to its token (``"reception!"``). Word frequencies are total occurrence
counts over the whole corpus, and the frequency filter drops tokens seen at
most twice as well as tokens occurring more often than half the number of
records.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import IngestionError, PoolError

logger = logging.getLogger(__name__)

POSITIVE = "positive"
NEGATIVE = "negative"
CLASSES = (NEGATIVE, POSITIVE)  # index = class id; ties resolve to NEGATIVE


def class_id(label: str) -> int:
    try:
        return CLASSES.index(label)
    except ValueError:
        raise ValueError(f"unknown class {label!r}, expected one of {CLASSES}") from None


@dataclass(frozen=True)
class Document:
    tokens: tuple[str, ...]
    label: str
    id: int

    def __post_init__(self):
        if self.label not in CLASSES:
            raise ValueError(f"unknown class {self.label!r}")


@dataclass(frozen=True)
class Vocabulary:
    """Token occurrence counts plus the number of records they came from."""

    entries: dict[str, int]
    record_count: int

    def __len__(self):
        return len(self.entries)

    def __contains__(self, token):
        return token in self.entries


@dataclass(frozen=True)
class WordList:
    label: str
    words: frozenset[str]


@dataclass(frozen=True)
class CandidatePools:
    positive_pool: tuple[str, ...]
    negative_pool: tuple[str, ...]
    overlap: frozenset[str] = field(default_factory=frozenset)

    def pool(self, label: str) -> tuple[str, ...]:
        return self.positive_pool if label == POSITIVE else self.negative_pool


def tokenize(text: str) -> list[str]:
    """Split on whitespace runs and lowercase each piece.

    >>> tokenize("Awesome RECEPTION!")
    ['awesome', 'reception!']
    """
    return [piece.lower() for piece in text.split()]


def load_documents(path, label: str, start_id: int = 0) -> list[Document]:
    """Read one review per line from a UTF-8 file.

    Blank lines are skipped. Ids are assigned sequentially from
    ``start_id`` in file order.
    """
    path = Path(path)
    if label not in CLASSES:
        raise ValueError(f"unknown class {label!r}")
    try:
        raw = path.read_bytes()
    except FileNotFoundError:
        raise IngestionError(f"review file not found: {path}") from None
    except OSError as exc:
        raise IngestionError(f"cannot read review file {path}: {exc}") from None

    docs = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IngestionError(
                f"{path}:{lineno}: invalid UTF-8 ({exc.reason} at byte {exc.start})"
            ) from None
        tokens = tokenize(text)
        if not tokens:
            continue
        docs.append(Document(tuple(tokens), label, start_id + len(docs)))
    return docs


def load_corpus(positive_path, negative_path) -> list[Document]:
    """Positive reviews first, then negative ones, with globally unique ids."""
    pos = load_documents(positive_path, POSITIVE)
    neg = load_documents(negative_path, NEGATIVE, start_id=len(pos))
    return pos + neg


def load_word_list(path, label: str) -> WordList:
    """One word per line; ``#`` lines are comments, words are lowercased."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise IngestionError(f"word list not found: {path}") from None
    except UnicodeDecodeError as exc:
        raise IngestionError(f"{path}: invalid UTF-8 ({exc.reason})") from None
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return WordList(label, frozenset(words))


def build_vocabulary(documents: Sequence[Document]) -> Vocabulary:
    counts = Counter()
    for doc in documents:
        counts.update(doc.tokens)
    return Vocabulary(dict(counts), len(documents))


def apply_frequency_filter(vocab: Vocabulary) -> Vocabulary:
    """Drop tokens with count <= 2 or count > record_count / 2."""
    if vocab.record_count == 0:
        return Vocabulary({}, 0)
    half = Fraction(vocab.record_count, 2)
    kept = {t: c for t, c in vocab.entries.items() if c > 2 and c <= half}
    return Vocabulary(kept, vocab.record_count)


def check_disjoint(pos: WordList, neg: WordList) -> frozenset[str]:
    overlap = pos.words & neg.words
    if overlap:
        sample = ", ".join(sorted(overlap)[:10])
        logger.warning("%d word(s) appear in both seed lists: %s", len(overlap), sample)
    return frozenset(overlap)


def build_candidate_pools(vocab: Vocabulary, pos: WordList, neg: WordList) -> CandidatePools:
    overlap = check_disjoint(pos, neg)
    keys = set(vocab.entries)
    positive_pool = tuple(sorted(keys & pos.words))
    negative_pool = tuple(sorted(keys & neg.words))
    empty = [name for name, p in ((POSITIVE, positive_pool), (NEGATIVE, negative_pool)) if not p]
    if empty:
        raise PoolError(f"candidate pool empty: {' and '.join(empty)}")
    return CandidatePools(positive_pool, negative_pool, overlap & keys)


def prepare(documents: Iterable[Document], pos: WordList, neg: WordList) -> CandidatePools:
    """Vocabulary, frequency filter and pools in one call."""
    return build_candidate_pools(apply_frequency_filter(build_vocabulary(list(documents))), pos, neg)
