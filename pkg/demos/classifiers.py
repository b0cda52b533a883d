"""
Tree, forest and RBF network on binary word features
====================================================

All three classifiers take a ``FeatureMatrix`` of 0/1 word presence and a
numpy ``Generator``. Fitted models serialize to JSON.
"""
# %%
import numpy as np

from woafs.classifiers import dumps, loads, make_classifier
from woafs.evaluation import cross_validate, kfold_plan
from woafs.features import FeatureSubset, build_matrix
from woafs.synthetic import generate_corpus

syn = generate_corpus(n_docs=600, n_informative=20, n_noise=100, seed=3)
words = sorted(syn.informative) + sorted(syn.positive_words.words - syn.informative)[:20]
matrix = build_matrix(syn.documents, FeatureSubset.from_words(words))
print("matrix", matrix.shape, "positives:", int(matrix.y.sum()))

# %%
# Ten-fold cross-validation pools the confusion counts of all folds.
plan = kfold_plan(matrix.y, k=10, seed=0)
for name in ("random_tree", "random_forest", "rbf_network"):
    rep = cross_validate(make_classifier(name, trees=50), matrix, plan, seed=0)
    print(f"{name:14s} accuracy {rep.accuracy:.3f}  F {rep.f_measure:.3f}  build {rep.build_time:.2f}s")

# %%
# A fitted tree round-trips through JSON.
tree = make_classifier("random_tree").train(matrix, np.random.default_rng(0))
clone = loads(dumps(tree))
print("nodes:", tree.n_nodes, "same predictions:", bool((clone.predict(matrix.X) == tree.predict(matrix.X)).all()))
