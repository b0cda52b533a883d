"""
Does a larger word budget help?
===============================

For each budget the optimizer searches word subsets, scored by the
F-measure of a random tree on a fixed holdout split. The chosen subset is
then evaluated by ten-fold cross-validation. Decoding collapses repeated
indices, so a budget is an upper bound on the number of distinct words.
"""
# %%
import tempfile
from pathlib import Path

from woafs.config import parse_config
from woafs.experiment import run_experiment
from woafs.synthetic import generate_corpus

workdir = Path(tempfile.mkdtemp())
generate_corpus(n_docs=1000, seed=0).write(workdir)
cfg = parse_config("""
positive_reviews = reviews-positive.txt
negative_reviews = reviews-negative.txt
positive_words   = words-positive.txt
negative_words   = words-negative.txt
budgets     = [20, 100, 500]
agents      = 8
max_iter    = 8
classifiers = [random_tree, random_forest]
trees       = 50
seeds       = [0, 1]
""", workdir)
report = run_experiment(cfg, out_dir=workdir / "results")

# %%
for sel in report.selections:
    print(f"budget {sel.budget:3d} seed {sel.seed}: {len(sel.subset):3d} distinct words, "
          f"fitness {sel.fitness:.3f}")
for rec in report.records:
    print(f"{rec.classifier:14s} budget {rec.budget:3d} seed {rec.seed}: accuracy {rec.report.accuracy:.3f}")
print("reports written to", workdir / "results")
