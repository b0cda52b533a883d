"""Random tree, random forest and RBF network classifiers for binary features.

All three predict class ids (see ``corpus.CLASSES``) and break every tie
towards the lower class id.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, ShapeError, TrainingError
from .features import FeatureMatrix

N_CLASSES = 2
FORMAT_VERSION = 1


def gini(counts) -> float:
    """Gini impurity of a vector of class counts."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    q = counts / total
    return float(1.0 - np.dot(q, q))


def split_score(present_counts, absent_counts) -> float:
    """Size-weighted Gini impurity of a two-way split."""
    n1, n0 = float(np.sum(present_counts)), float(np.sum(absent_counts))
    return (n1 * gini(present_counts) + n0 * gini(absent_counts)) / (n1 + n0)


def _check_shape(X, n_features):
    X = np.asarray(X)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != n_features:
        raise ShapeError(f"expected vectors of length {n_features}, got {X.shape[1]}")
    return X, single


def derive_seeds(rng: np.random.Generator, n: int) -> list[int]:
    """Independent child seeds, drawn sequentially from ``rng``."""
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=n)]


# -- random tree ------------------------------------------------------------

@dataclass(frozen=True)
class TreeParams:
    feature_sample: Optional[int] = None  # None -> ceil(sqrt(d))
    max_depth: Optional[int] = None
    min_leaf: int = 1

    def resolved_sample(self, d):
        k = math.ceil(math.sqrt(d)) if self.feature_sample is None else self.feature_sample
        if k < 1:
            raise ConfigError(f"feature_sample must be >= 1, got {k}")
        return min(k, d)


@dataclass
class TreeModel:
    """Flat node arrays. ``feature[i] == -1`` marks a leaf.

    ``left`` is the child for "feature absent", ``right`` for "present".
    """

    feature: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, N_CLASSES)
    n_features: int

    @property
    def n_nodes(self):
        return len(self.feature)

    @property
    def n_leaves(self):
        return int(np.sum(self.feature < 0))

    def apply(self, X):
        X, _ = _check_shape(X, self.n_features)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            go_right = X[rows[active], f[active]] > 0
            node[active] = np.where(go_right, self.right[node[active]], self.left[node[active]])

    def predict(self, X):
        X, single = _check_shape(X, self.n_features)
        out = np.argmax(self.counts[self.apply(X)], axis=1)
        return int(out[0]) if single else out

    def to_dict(self):
        def node(i):
            if self.feature[i] < 0:
                return {"counts": [int(c) for c in self.counts[i]]}
            return {"feature": int(self.feature[i]),
                    "absent": node(self.left[i]), "present": node(self.right[i])}
        return {"model": "random_tree", "version": FORMAT_VERSION,
                "n_features": self.n_features, "root": node(0)}

    @classmethod
    def from_dict(cls, data):
        feature, left, right, counts = [], [], [], []

        def add(d):
            i = len(feature)
            feature.append(d.get("feature", -1))
            left.append(-1)
            right.append(-1)
            counts.append(d.get("counts", [0] * N_CLASSES))
            if "feature" in d:
                left[i] = add(d["absent"])
                right[i] = add(d["present"])
                counts[i] = [a + b for a, b in zip(counts[left[i]], counts[right[i]])]
            return i

        add(data["root"])
        return cls(np.array(feature), np.array(left), np.array(right),
                   np.array(counts, dtype=np.int64), data["n_features"])


def train_random_tree(matrix: FeatureMatrix, params: TreeParams, rng: np.random.Generator) -> TreeModel:
    """Greedy Gini tree over ``ceil(sqrt(d))`` randomly sampled features per node.

    Nodes are expanded breadth-first, one whole depth level at a time. A node
    becomes a leaf when it is pure, hits ``max_depth``, cannot give both
    children ``min_leaf`` samples, or when no sampled feature lowers the
    impurity.
    """
    X, y = matrix.X, matrix.y
    n, d = X.shape
    if n == 0 or d == 0:
        raise TrainingError(f"cannot train a tree on an empty matrix {X.shape}")
    if params.min_leaf < 1:
        raise ConfigError(f"min_leaf must be >= 1, got {params.min_leaf}")
    k = params.resolved_sample(d)
    min_leaf = params.min_leaf
    is_pos = (y == 1).astype(np.int64)
    pos_u8 = is_pos.astype(X.dtype)

    cap = 2 * n + 1  # a binary tree over n samples never has more nodes
    feature = np.full(cap, -1, dtype=np.int64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    counts = np.zeros((cap, 2), dtype=np.int64)
    counts[0] = (n - is_pos.sum(), is_pos.sum())
    n_nodes = 1

    # samples of the current level, grouped contiguously by node
    order = np.arange(n)
    nodes = np.array([0])
    sizes = np.array([n])
    depth = 0
    while len(nodes):
        pos = counts[nodes, 1]
        splittable = (pos > 0) & (pos < sizes) & (sizes >= 2 * min_leaf)
        if params.max_depth is not None and depth >= params.max_depth:
            break
        order = order[splittable[np.repeat(np.arange(len(nodes)), sizes)]]
        nodes, sizes, pos = nodes[splittable], sizes[splittable], pos[splittable]
        if not len(nodes):
            break
        seg_id = np.repeat(np.arange(len(nodes)), sizes)
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])

        feats = np.argpartition(rng.random((len(nodes), d)), k - 1, axis=1)[:, :k] if k < d else np.tile(np.arange(d), (len(nodes), 1))
        G = X[order[:, None], feats[seg_id]]
        n1 = np.add.reduceat(G, starts, axis=0, dtype=np.int64)
        p1 = np.add.reduceat(G * pos_u8[order][:, None], starts, axis=0, dtype=np.int64)
        m = sizes[:, None]
        n0 = m - n1
        p0 = pos[:, None] - p1
        valid = (n1 >= min_leaf) & (n0 >= min_leaf)
        # sum over both sides of n_side * gini_side is 2 p (n - p) / n
        impurity = (2.0 * p1 * (n1 - p1) / np.maximum(n1, 1)
                    + 2.0 * p0 * (n0 - p0) / np.maximum(n0, 1)) / m
        impurity[~valid] = np.inf
        rows = np.arange(len(nodes))
        j = np.argmin(impurity, axis=1)
        parent = 2.0 * pos * (sizes - pos) / (sizes * sizes)
        split = impurity[rows, j] < parent - 1e-12

        chosen = feats[rows, j]
        present = X[order, chosen[seg_id]] > 0
        # regroup by node, absent samples before present ones
        perm = np.lexsort((present, seg_id))
        order = order[perm][split[seg_id[perm]]]

        r = rows[split]
        a = n_nodes + 2 * np.arange(len(r))
        parents = nodes[r]
        feature[parents], left[parents], right[parents] = chosen[r], a, a + 1
        jr = j[r]
        na, pa = n0[r, jr], p0[r, jr]
        nb, pb = n1[r, jr], p1[r, jr]
        counts[a, 0], counts[a, 1] = na - pa, pa
        counts[a + 1, 0], counts[a + 1, 1] = nb - pb, pb
        n_nodes += 2 * len(r)
        nodes = np.empty(2 * len(r), dtype=np.int64)
        nodes[0::2], nodes[1::2] = a, a + 1
        sizes = np.empty(2 * len(r), dtype=np.int64)
        sizes[0::2], sizes[1::2] = na, nb
        depth += 1

    return TreeModel(feature[:n_nodes].copy(), left[:n_nodes].copy(), right[:n_nodes].copy(),
                     counts[:n_nodes].copy(), d)


def predict_tree(model: TreeModel, vector) -> int:
    if np.ndim(vector) != 1:
        raise ShapeError("predict_tree expects a single vector")
    return model.predict(vector)


# -- random forest ----------------------------------------------------------

@dataclass(frozen=True)
class ForestParams:
    tree_count: int = 100
    bootstrap: bool = True
    tree: TreeParams = field(default_factory=TreeParams)


@dataclass
class ForestModel:
    trees: list
    bootstrap: bool = True

    @property
    def tree_count(self):
        return len(self.trees)

    @property
    def n_features(self):
        return self.trees[0].n_features

    def votes(self, X):
        X, _ = _check_shape(X, self.n_features)
        v = np.zeros((len(X), N_CLASSES), dtype=np.int64)
        rows = np.arange(len(X))
        for t in self.trees:
            np.add.at(v, (rows, t.predict(X)), 1)
        return v

    def predict(self, X):
        single = np.ndim(X) == 1
        out = np.argmax(self.votes(X), axis=1)
        return int(out[0]) if single else out

    def to_dict(self):
        return {"model": "random_forest", "version": FORMAT_VERSION, "bootstrap": self.bootstrap,
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, data):
        return cls([TreeModel.from_dict(t) for t in data["trees"]], data["bootstrap"])


def _train_member(matrix, params: ForestParams, seed):
    rng = np.random.default_rng(seed)
    if params.bootstrap:
        n = matrix.X.shape[0]
        matrix = matrix.take(rng.integers(0, n, size=n))
    return train_random_tree(matrix, params.tree, rng)


def train_random_forest(matrix: FeatureMatrix, params: ForestParams, rng: np.random.Generator,
                        threads: int = 1) -> ForestModel:
    """Bagged random trees; tree ``i`` uses the ``i``-th seed from :func:`derive_seeds`."""
    if params.tree_count < 1:
        raise ConfigError(f"tree_count must be >= 1, got {params.tree_count}")
    if matrix.X.size == 0:
        raise TrainingError(f"cannot train a forest on an empty matrix {matrix.X.shape}")
    seeds = derive_seeds(rng, params.tree_count)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            trees = list(ex.map(lambda s: _train_member(matrix, params, s), seeds))
    else:
        trees = [_train_member(matrix, params, s) for s in seeds]
    return ForestModel(trees, params.bootstrap)


def predict_forest(model: ForestModel, vector) -> int:
    if np.ndim(vector) != 1:
        raise ShapeError("predict_forest expects a single vector")
    return model.predict(vector)


# -- RBF network ------------------------------------------------------------

@dataclass(frozen=True)
class RBFParams:
    centers: int = 10
    ridge: float = 1e-6
    kmeans_iter: int = 100
    kmeans_tol: float = 1e-9


def _sq_dists(X, C):
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def kmeans_pp_init(X, k, rng):
    n = len(X)
    centers = [X[rng.integers(n)]]
    d2 = _sq_dists(X, np.array(centers))[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        i = rng.integers(n) if total <= 0 else rng.choice(n, p=d2 / total)
        centers.append(X[i])
        d2 = np.minimum(d2, _sq_dists(X, X[i:i + 1])[:, 0])
    return np.array(centers, dtype=float)


def kmeans(X, k, rng, max_iter=100, tol=1e-9):
    """Lloyd's algorithm with k-means++ seeding.

    Returns ``(centers, assignment, history)`` where ``history`` holds the
    within-cluster sum of squares after each assignment step. Empty clusters
    keep their previous center.
    """
    X = np.asarray(X, dtype=float)
    if not 1 <= k <= len(X):
        raise ConfigError(f"k-means needs 1 <= k <= {len(X)} rows, got k={k}")
    C = kmeans_pp_init(X, k, rng)
    history = []
    for _ in range(max_iter):
        D = _sq_dists(X, C)
        assign = np.argmin(D, axis=1)
        history.append(float(D[np.arange(len(X)), assign].sum()))
        new = C.copy()
        for c in range(k):
            members = X[assign == c]
            if len(members):
                new[c] = members.mean(axis=0)
        shift = float(np.sqrt(((new - C) ** 2).sum(1)).max())
        C = new
        if shift < tol:
            break
    D = _sq_dists(X, C)
    assign = np.argmin(D, axis=1)
    history.append(float(D[np.arange(len(X)), assign].sum()))
    return C, assign, history


@dataclass
class RBFModel:
    centers: np.ndarray
    sigma: float
    weights: np.ndarray  # (n_centers + 1, N_CLASSES); last row is the bias

    @property
    def n_features(self):
        return self.centers.shape[1]

    def hidden(self, X):
        X, _ = _check_shape(X, self.n_features)
        H = np.exp(-_sq_dists(X.astype(float), self.centers) / (2.0 * self.sigma ** 2))
        return np.hstack([H, np.ones((len(X), 1))])

    def scores(self, X):
        return self.hidden(X) @ self.weights

    def predict(self, X):
        single = np.ndim(X) == 1
        out = np.argmax(self.scores(X), axis=1)
        return int(out[0]) if single else out

    def to_dict(self):
        return {"model": "rbf_network", "version": FORMAT_VERSION, "sigma": self.sigma,
                "centers": self.centers.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(np.array(data["centers"], dtype=float), float(data["sigma"]),
                   np.array(data["weights"], dtype=float))


def rbf_width(centers) -> float:
    k = len(centers)
    dmax = float(np.sqrt(_sq_dists(centers, centers).max())) if k > 1 else 0.0
    return max(dmax / math.sqrt(2.0 * k), 1e-6)


def ridge_weights(H, Y, ridge):
    """Solve ``(H^T H + ridge * I) W = H^T Y``."""
    A = H.T @ H + ridge * np.eye(H.shape[1])
    return np.linalg.solve(A, H.T @ Y)


def train_rbf(matrix: FeatureMatrix, params: RBFParams, rng: np.random.Generator) -> RBFModel:
    X = matrix.X.astype(float)
    if len(X) == 0:
        raise TrainingError("cannot train an RBF network on an empty matrix")
    if params.centers > len(X):
        raise ConfigError(f"{params.centers} centers requested but only {len(X)} training rows")
    C, _, _ = kmeans(X, params.centers, rng, params.kmeans_iter, params.kmeans_tol)
    sigma = rbf_width(C)
    model = RBFModel(C, sigma, np.zeros((len(C) + 1, N_CLASSES)))
    Y = np.eye(N_CLASSES)[matrix.y]
    model.weights = ridge_weights(model.hidden(X), Y, params.ridge)
    return model


def predict_rbf(model: RBFModel, vector) -> int:
    if np.ndim(vector) != 1:
        raise ShapeError("predict_rbf expects a single vector")
    return model.predict(vector)


# -- registry ---------------------------------------------------------------

@dataclass(frozen=True)
class ClassifierSpec:
    """A named classifier with its parameters; ``train`` returns a fitted model."""

    name: str
    params: object

    def train(self, matrix, rng, threads=1):
        if self.name == "random_tree":
            return train_random_tree(matrix, self.params, rng)
        if self.name == "random_forest":
            return train_random_forest(matrix, self.params, rng, threads)
        if self.name == "rbf_network":
            return train_rbf(matrix, self.params, rng)
        raise ConfigError(f"unknown classifier {self.name!r}")


CLASSIFIERS = ("random_tree", "random_forest", "rbf_network")


def make_classifier(name, trees=100, feature_sample=None, max_depth=None, min_leaf=1,
                    bootstrap=True, rbf_centers=10) -> ClassifierSpec:
    tree = TreeParams(feature_sample, max_depth, min_leaf)
    if name == "random_tree":
        return ClassifierSpec(name, tree)
    if name == "random_forest":
        return ClassifierSpec(name, ForestParams(trees, bootstrap, tree))
    if name == "rbf_network":
        return ClassifierSpec(name, RBFParams(centers=rbf_centers))
    raise ConfigError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIERS)}")


def dumps(model) -> str:
    """Canonical JSON for a trained model."""
    return json.dumps(model.to_dict(), sort_keys=True, separators=(",", ":"))


def loads(text):
    data = json.loads(text)
    kind = data.get("model")
    if data.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {data.get('version')}")
    return {"random_tree": TreeModel, "random_forest": ForestModel, "rbf_network": RBFModel}[kind].from_dict(data)
