"""Binary bag-of-words matrices over a selected word subset."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import CLASSES, Document, class_id
from .errors import ShapeError


@dataclass(frozen=True)
class FeatureSubset:
    words: tuple[str, ...]
    origin: tuple[str, ...]  # "positive-pool" / "negative-pool", aligned with words

    def __post_init__(self):
        if len(self.words) != len(self.origin):
            raise ShapeError("words and origin tags differ in length")
        if len(set(self.words)) != len(self.words):
            raise ValueError("feature subset contains duplicate words")

    def __len__(self):
        return len(self.words)

    @classmethod
    def from_words(cls, words, origin="positive-pool"):
        words = tuple(words)
        return cls(words, (origin,) * len(words))


@dataclass(frozen=True)
class FeatureMatrix:
    """Document x feature presence matrix.

    ``X`` is a ``uint8`` array of shape ``(n_docs, n_features)`` and ``y``
    holds class ids (index into ``corpus.CLASSES``).
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape[1] != len(self.feature_names):
            raise ShapeError(f"matrix shape {self.X.shape} does not match {len(self.feature_names)} features")
        if self.X.shape[0] != len(self.y):
            raise ShapeError(f"{self.X.shape[0]} rows but {len(self.y)} labels")

    @property
    def labels(self) -> list[str]:
        return [CLASSES[c] for c in self.y]

    @property
    def shape(self):
        return self.X.shape

    def take(self, rows) -> "FeatureMatrix":
        return FeatureMatrix(self.X[rows], self.y[rows], self.feature_names)

    def iter_columns(self):
        """Yield ``(name, row_indices_where_present)`` for each feature."""
        for j, name in enumerate(self.feature_names):
            yield name, np.flatnonzero(self.X[:, j])

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(list(self.feature_names) + ["label"])
            for row, label in zip(self.X, self.labels):
                w.writerow([int(v) for v in row] + [label])


def vectorize(doc: Document, subset: FeatureSubset) -> np.ndarray:
    if len(subset) == 0:
        raise ShapeError("feature subset is empty")
    present = set(doc.tokens)
    return np.fromiter((w in present for w in subset.words), dtype=np.uint8, count=len(subset))


def build_matrix(corpus: Sequence[Document], subset: FeatureSubset) -> FeatureMatrix:
    if len(corpus) == 0:
        raise ShapeError("cannot build a feature matrix from an empty corpus")
    if len(subset) == 0:
        raise ShapeError("feature subset is empty")
    column = {w: j for j, w in enumerate(subset.words)}
    X = np.zeros((len(corpus), len(subset)), dtype=np.uint8)
    for i, doc in enumerate(sorted(corpus, key=lambda d: d.id)):
        for tok in set(doc.tokens):
            j = column.get(tok)
            if j is not None:
                X[i, j] = 1
    y = np.array([class_id(d.label) for d in sorted(corpus, key=lambda d: d.id)], dtype=np.int64)
    return FeatureMatrix(X, y, subset.words)


class PresenceTable:
    """Presence matrix over a fixed word universe, sliced per subset.

    The wrapper fitness builds thousands of matrices over the same corpus;
    computing presence once for every pool word and then selecting columns
    is much cheaper than re-scanning the documents.
    """

    def __init__(self, corpus: Sequence[Document], words: Sequence[str]):
        universe = tuple(dict.fromkeys(words))
        self._full = build_matrix(corpus, FeatureSubset.from_words(universe))
        self._column = {w: j for j, w in enumerate(universe)}

    @property
    def y(self):
        return self._full.y

    def matrix(self, subset: FeatureSubset, rows=None) -> FeatureMatrix:
        if len(subset) == 0:
            raise ShapeError("feature subset is empty")
        try:
            cols = [self._column[w] for w in subset.words]
        except KeyError as exc:
            raise KeyError(f"word {exc.args[0]!r} is not in the presence table") from None
        X = self._full.X[:, cols]
        y = self._full.y
        if rows is not None:
            X, y = X[rows], y[rows]
        return FeatureMatrix(np.ascontiguousarray(X), y, subset.words)
