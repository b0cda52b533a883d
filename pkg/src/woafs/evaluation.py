"""Confusion-matrix metrics, k-fold cross-validation and the wrapper fitness.

Two metric modes are available. ``"standard"`` uses the usual definitions
(accuracy = (TP+TN)/N, F = 2PR/(P+R)). ``"paper-literal"`` keeps two
frequently reprinted typos for side-by-side audits: accuracy = TP/N and
F = (2R + P)/(R + P), the latter exceeding 1 whenever R > 0.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .classifiers import ClassifierSpec, make_classifier
from .corpus import POSITIVE, Document, class_id
from .errors import ConfigError, ShapeError
from .features import FeatureMatrix, FeatureSubset, PresenceTable

logger = logging.getLogger(__name__)

MODES = ("standard", "paper-literal")
POSITIVE_ID = class_id(POSITIVE)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other):
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp,
                               self.tn + other.tn, self.fn + other.fn)


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    accuracy: float
    f_measure: float
    build_time: float = 0.0
    mode: str = "standard"
    zero_division: bool = False
    confusion: Optional[ConfusionMatrix] = None
    wall_time: float = 0.0


def confusion(predicted: Sequence, actual: Sequence, positive_class=POSITIVE_ID) -> ConfusionMatrix:
    predicted, actual = list(predicted), list(actual)
    if len(predicted) != len(actual):
        raise ShapeError(f"{len(predicted)} predictions for {len(actual)} instances")
    if not predicted:
        raise ShapeError("confusion matrix needs at least one instance")
    tp = fp = tn = fn = 0
    for p, a in zip(predicted, actual):
        if a == positive_class:
            if p == positive_class:
                tp += 1
            else:
                fn += 1
        elif p == positive_class:
            fp += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, tn, fn)


def _ratio(num, den):
    return (num / den, False) if den else (0.0, True)


def metrics(cm: ConfusionMatrix, mode: str = "standard", build_time: float = 0.0) -> MetricsReport:
    if mode not in MODES:
        raise ConfigError(f"unknown metrics mode {mode!r}; choose from {MODES}")
    if cm.total < 1:
        raise ShapeError("metrics need at least one evaluated instance")
    precision, z1 = _ratio(cm.tp, cm.tp + cm.fp)
    recall, z2 = _ratio(cm.tp, cm.tp + cm.fn)
    if mode == "standard":
        accuracy = (cm.tp + cm.tn) / cm.total
        f, z3 = _ratio(2.0 * precision * recall, precision + recall)
    else:
        accuracy = cm.tp / cm.total
        f, z3 = _ratio(2.0 * recall + precision, recall + precision)
    return MetricsReport(precision, recall, accuracy, f, build_time, mode,
                         z1 or z2 or z3, cm)


# -- fold plans -------------------------------------------------------------

@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: np.ndarray  # instance index -> fold index
    stratified: bool

    def test_indices(self, fold):
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.assignment != fold)

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.k)


def kfold_plan(labels: Sequence, k: int = 10, stratified: bool = True, seed: int = 0) -> FoldPlan:
    """Seeded shuffle, then round-robin fold assignment.

    When stratified, each class is dealt in turn and the round-robin counter
    carries over between classes, so both overall fold sizes and per-class
    fold counts differ by at most one.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if not 2 <= k <= n:
        raise ConfigError(f"k must satisfy 2 <= k <= {n}, got {k}")
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.int64)
    groups = [np.flatnonzero(labels == c) for c in np.unique(labels)] if stratified else [np.arange(n)]
    cursor = 0
    for members in groups:
        members = rng.permutation(members)
        assignment[members] = (cursor + np.arange(len(members))) % k
        cursor = (cursor + len(members)) % k
    return FoldPlan(k, assignment, stratified)


def _fold_rng(seed, fold):
    return np.random.default_rng(np.random.SeedSequence([seed, fold]))


def cross_validate(spec: ClassifierSpec, matrix: FeatureMatrix, plan: FoldPlan, seed: int = 0,
                   mode: str = "standard", threads: int = 1) -> MetricsReport:
    """Pooled (micro) k-fold evaluation.

    Confusion matrices of all folds are summed before computing metrics.
    ``build_time`` is the sum of per-fold training times.
    """
    if len(plan.assignment) != len(matrix.y):
        raise ShapeError(f"fold plan covers {len(plan.assignment)} rows, matrix has {len(matrix.y)}")
    pooled = ConfusionMatrix()
    build = 0.0
    start = time.perf_counter()
    for fold in range(plan.k):
        test = plan.test_indices(fold)
        if len(test) == 0:
            continue
        train = matrix.take(plan.train_indices(fold))
        t0 = time.perf_counter()
        model = spec.train(train, _fold_rng(seed, fold), threads)
        build += time.perf_counter() - t0
        pred = model.predict(matrix.X[test])
        pooled = pooled + confusion(pred, matrix.y[test])
    report = metrics(pooled, mode, build)
    return MetricsReport(**{**report.__dict__, "wall_time": time.perf_counter() - start})


# -- wrapper fitness --------------------------------------------------------

def stratified_holdout(y, fraction=0.2, seed=0):
    """Per-class seeded split; returns ``(train_idx, test_idx)`` sorted."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    test = []
    for c in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == c))
        test.append(members[:int(round(fraction * len(members)))])
    test = np.sort(np.concatenate(test)) if test else np.array([], dtype=np.int64)
    train = np.setdiff1d(np.arange(len(y)), test)
    return train, test


@dataclass(frozen=True)
class FitnessConfig:
    classifier: str = "random_tree"
    holdout: float = 0.2
    seed: int = 0
    trees: int = 100
    rbf_centers: int = 10


class WrapperFitness:
    """F-measure of a classifier trained on a word subset.

    The train/test split and the classifier seed are fixed at construction,
    so the value is a pure function of the (unordered) subset. Results are
    cached by subset.
    """

    def __init__(self, corpus: Sequence[Document], words: Sequence[str], config: FitnessConfig = FitnessConfig()):
        self.config = config
        self.table = PresenceTable(corpus, words)
        self.train_idx, self.test_idx = stratified_holdout(self.table.y, config.holdout, config.seed)
        self.spec = make_classifier(config.classifier, trees=config.trees, rbf_centers=config.rbf_centers)
        self._cache = {}
        self._lock = threading.Lock()
        self.calls = 0

        y = self.table.y
        self.degenerate = any(len(np.unique(y[idx])) < 2 for idx in (self.train_idx, self.test_idx))
        if self.degenerate:
            logger.warning("holdout split is missing a class; every subset scores 0")

    def __call__(self, subset: FeatureSubset) -> float:
        if len(subset) == 0:
            raise ShapeError("feature subset is empty")
        key = tuple(sorted(subset.words))
        with self._lock:
            self.calls += 1
            if key in self._cache:
                return self._cache[key]
        value = self._evaluate(key)
        with self._lock:
            self._cache[key] = value
        return value

    @property
    def cache_size(self):
        return len(self._cache)

    def _evaluate(self, words):
        if self.degenerate:
            return 0.0
        subset = FeatureSubset.from_words(words)
        train = self.table.matrix(subset, self.train_idx)
        test = self.table.matrix(subset, self.test_idx)
        model = self.spec.train(train, np.random.default_rng(self.config.seed))
        return metrics(confusion(model.predict(test.X), test.y)).f_measure


def wrapper_fitness(subset: FeatureSubset, corpus: Sequence[Document], config: FitnessConfig = FitnessConfig()) -> float:
    """One-off fitness evaluation; use :class:`WrapperFitness` inside an optimizer."""
    return WrapperFitness(corpus, subset.words, config)(subset)
