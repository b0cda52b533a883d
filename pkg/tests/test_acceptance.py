"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import filecmp
import time
from fractions import Fraction

import numpy as np
from conftest import ACCEPTANCE, FIXTURES
from woafs.classifiers import (ForestModel, ForestParams, RBFModel, RBFParams, TreeParams, derive_seeds, dumps, make_classifier,
                               predict_rbf, predict_tree, train_random_forest, train_random_tree,
                               train_rbf)
from woafs.cli import main
from woafs.config import parse_config
from woafs.corpus import apply_frequency_filter, build_vocabulary, load_corpus
from woafs.evaluation import ConfusionMatrix, cross_validate, kfold_plan, metrics
from woafs.experiment import run_experiment
from woafs.features import FeatureMatrix
from woafs.synthetic import generate_corpus
from woafs.woa import WOAParams, negate, optimize, random_search, sphere


def record(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    print(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def brute_metrics(tp, fp, tn, fn):
    """Exact rational arithmetic, independent of the package."""
    p = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    r = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    f = 2 * p * r / (p + r) if p + r else Fraction(0)
    return [float(v) for v in (p, r, Fraction(tp + tn, tp + fp + tn + fn), f)]


def test_ac1_metric_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    n = 2000
    for cells in rng.integers(0, 500, size=(n, 4)):
        tp, fp, tn, fn = (int(c) for c in cells)
        if tp + fp + tn + fn == 0:
            tn = 1
        m = metrics(ConfusionMatrix(tp, fp, tn, fn))
        got = [m.precision, m.recall, m.accuracy, m.f_measure]
        worst = max(worst, max(abs(a - b) for a, b in zip(got, brute_metrics(tp, fp, tn, fn))))
    lit = metrics(ConfusionMatrix(tp=50, fp=10, tn=20, fn=20), mode="paper-literal")
    p, r = Fraction(50, 60), Fraction(50, 70)
    lit_ok = lit.accuracy == 0.5 and abs(lit.f_measure - float((2 * r + p) / (r + p))) < 1e-12 \
        and round(lit.f_measure, 3) == 1.462
    elapsed = time.perf_counter() - start
    record("AC1 metric oracle", worst <= 1e-12 and lit_ok and elapsed < 1.0,
           f"{n} matrices, max err {worst:.1e}; literal acc={lit.accuracy} F={lit.f_measure:.4f}; {elapsed:.2f}s")


def test_ac2_optimizer_validity():
    start = time.perf_counter()
    woa_best, rs_best = [], []
    for seed in range(20):
        params = WOAParams(agents=30, max_iter=100, lb=-100.0, ub=100.0, dim=10, seed=seed)
        woa_best.append(-optimize(params, negate(sphere)).best.fitness)
        rs_best.append(-random_search(params, negate(sphere), np.random.default_rng(10_000 + seed)))
    wins = sum(w < r for w, r in zip(woa_best, rs_best))
    median = float(np.median(woa_best))
    elapsed = time.perf_counter() - start
    record("AC2 optimizer validity", median <= 1e-2 and wins >= 18 and elapsed < 10.0,
           f"median best {median:.2e}, beats random search {wins}/20, {elapsed:.2f}s")


def test_ac3_monotone_convergence():
    runs = []
    for agents, max_iter, seed in [(30, 100, 0), (5, 0, 1), (1, 7, 2), (12, 40, 3)]:
        params = WOAParams(agents=agents, max_iter=max_iter, lb=-5.0, ub=5.0, dim=6, seed=seed)
        calls = []

        def objective(x):
            calls.append(1)
            return -sphere(x)

        res = optimize(params, objective)
        ok = (all(b >= a for a, b in zip(res.trace, res.trace[1:]))
              and len(res.trace) == max_iter + 1
              and res.evaluations == len(calls) == agents * (max_iter + 1))
        runs.append(ok)
    # the CLI traces of a real selection run obey the same rules
    cfg = parse_config((FIXTURES / "smoke.cfg").read_text(), FIXTURES)
    report = run_experiment(cfg, write=False)
    for sel in report.selections:
        runs.append(all(b >= a for a, b in zip(sel.trace, sel.trace[1:]))
                    and len(sel.trace) == cfg.max_iter + 1
                    and sel.evaluations == cfg.agents * (cfg.max_iter + 1))
    record("AC3 monotone convergence", all(runs), f"{sum(runs)}/{len(runs)} runs conform")


def test_ac4_feature_budget_trend(tmp_path):
    start = time.perf_counter()
    generate_corpus(n_docs=2000, n_informative=40, n_noise=400, seed=0).write(tmp_path)
    cfg = parse_config(
        "\n".join([
            "positive_reviews = reviews-positive.txt", "negative_reviews = reviews-negative.txt",
            "positive_words = words-positive.txt", "negative_words = words-negative.txt",
            "budgets = [100, 500]", "agents = 10", "max_iter = 10",
            "classifiers = [random_tree, random_forest]", "k = 10",
            "seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]", "checkpoints = []",
        ]), tmp_path)
    report = run_experiment(cfg, write=False)
    acc = {(r.classifier, r.budget, r.seed): r.report.accuracy for r in report.records}
    seeds = cfg.seeds
    trend = sum(acc["random_forest", 500, s] >= acc["random_forest", 100, s] for s in seeds)
    rf_mean = {s: (acc["random_forest", 100, s] + acc["random_forest", 500, s]) / 2 for s in seeds}
    rt_mean = {s: (acc["random_tree", 100, s] + acc["random_tree", 500, s]) / 2 for s in seeds}
    forest = sum(rf_mean[s] >= rt_mean[s] for s in seeds)
    elapsed = time.perf_counter() - start
    avg = {key: np.mean([acc[key + (s,)] for s in seeds]) for key in
           [("random_forest", 100), ("random_forest", 500), ("random_tree", 100), ("random_tree", 500)]}
    record("AC4 feature-budget trend", trend >= 8 and forest >= 8 and elapsed < 600,
           f"RF 500>=100 in {trend}/10, RF>=RT in {forest}/10; mean acc RF {avg['random_forest', 100]:.3f}"
           f"->{avg['random_forest', 500]:.3f}, RT {avg['random_tree', 100]:.3f}->{avg['random_tree', 500]:.3f};"
           f" {elapsed:.0f}s")


def test_ac5_preprocessing(tmp_path):
    rng = np.random.default_rng(5)
    words = ["Great", "reception!", "battery,", "bad", "Bad", "the", "a", "signal.", "rare", "ok", "fine"]
    weights = np.array([3, 2, 2, 2, 1, 12, 9, 2, 0.05, 1, 1], dtype=float)
    pos, neg = [], []
    for i in range(100):
        k = int(rng.integers(1, 8))
        line = " ".join(rng.choice(words, size=k, p=weights / weights.sum()))
        (pos if i % 2 else neg).append(line + (" \t" if i % 7 == 0 else ""))
    (tmp_path / "p.txt").write_text("\n".join(pos) + "\n", encoding="utf-8")
    (tmp_path / "n.txt").write_text("\n".join(neg) + "\n", encoding="utf-8")
    docs = load_corpus(tmp_path / "p.txt", tmp_path / "n.txt")

    # brute force straight from the raw text
    counts, records = {}, 0
    for line in pos + neg:
        if not line.split():
            continue
        records += 1
        for tok in line.split():
            counts[tok.lower()] = counts.get(tok.lower(), 0) + 1
    expected = {w: c for w, c in counts.items() if not (c <= 2 or 2 * c > records)}
    vocab = apply_frequency_filter(build_vocabulary(docs))
    got = dict(vocab.entries)
    tokens = [t for d in docs for t in d.tokens]
    ok = (got == expected and "reception!" in got and all(t == t.lower() and t for t in tokens)
          and len(docs) == records == 100)
    record("AC5 preprocessing", ok,
           f"{len(got)} filtered words match brute force: {got == expected}; kept {sorted(got)}")


def test_ac6_cross_validation():
    rng = np.random.default_rng(6)
    partitions = skew_ok = pooled_ok = True
    for trial in range(200):
        n = int(rng.integers(2, 120))
        y = rng.integers(0, 2, size=n)
        k = int(rng.integers(2, min(n, 12) + 1))
        plan = kfold_plan(y, k, True, trial)
        tests = np.concatenate([plan.test_indices(f) for f in range(k)])
        partitions &= sorted(tests.tolist()) == list(range(n))
        for c in (0, 1):
            per = [int((y[plan.test_indices(f)] == c).sum()) for f in range(k)]
            skew_ok &= max(per) - min(per) <= 1
        if trial < 30 and n >= 4:
            X = (rng.random((n, 5)) < 0.5).astype(np.uint8)
            m = FeatureMatrix(X, y, tuple("abcde"))
            rep = cross_validate(make_classifier("random_tree"), m, plan, trial)
            pooled_ok &= rep.confusion.total == n
    sep = FeatureMatrix(np.array([[1, 0], [1, 1], [0, 1], [0, 0]], dtype=np.uint8), np.array([1, 1, 0, 0]), ("a", "b"))
    loo = cross_validate(make_classifier("random_tree"), sep, kfold_plan(sep.y, 4), 0).accuracy
    record("AC6 cross-validation", partitions and skew_ok and pooled_ok and loo == 1.0,
           f"partitions {partitions}, class skew<=1 {skew_ok}, pooled totals {pooled_ok}, LOO acc {loo}")


def test_ac7_classifier_degenerate_cases():
    checks = {}
    rng = np.random.default_rng(7)
    X = (rng.random((50, 8)) < 0.4).astype(np.uint8)
    y = X[:, 1].astype(np.int64)
    m = FeatureMatrix(X, y, tuple(f"f{j}" for j in range(8)))

    ok = True
    for seed in range(20):
        [ts] = derive_seeds(np.random.default_rng(seed), 1)
        forest = train_random_forest(m, ForestParams(tree_count=1, bootstrap=False), np.random.default_rng(seed))
        tree = train_random_tree(m, TreeParams(), np.random.default_rng(ts))
        ok &= dumps(forest.trees[0]) == dumps(tree)
    checks["forest-of-one"] = ok

    ok = True
    for label in (0, 1):
        pure = FeatureMatrix(X, np.full(50, label), m.feature_names)
        tree = train_random_tree(pure, TreeParams(), rng)
        ok &= tree.n_nodes == 1 and set(tree.predict(1 - X)) == {label}
    checks["pure single leaf"] = ok

    Xd = np.unique((rng.random((30, 6)) < 0.5).astype(np.uint8), axis=0)[:8]
    yd = np.array([0, 1] * 4)[:len(Xd)]
    rbf = train_rbf(FeatureMatrix(Xd, yd, tuple("abcdef")), RBFParams(centers=len(Xd)), rng)
    checks["rbf k=n"] = rbf.predict(Xd).tolist() == yd.tolist()

    tie_leaf = train_random_tree(FeatureMatrix(np.ones((2, 1), np.uint8), np.array([1, 0]), ("a",)), TreeParams(), rng)
    ones = [train_random_tree(FeatureMatrix(np.ones((1, 1), np.uint8), np.array([c]), ("a",)), TreeParams(), rng)
            for c in (1, 0)]
    checks["ties -> lower id"] = (predict_tree(tie_leaf, np.array([1])) == 0
                                  and ForestModel(ones).predict(np.ones((1, 1))).tolist() == [0]
                                  and predict_rbf(RBFModel(np.zeros((1, 1)), 1.0, np.zeros((2, 2))), np.ones(1)) == 0)
    record("AC7 classifier degenerate cases", all(checks.values()),
           ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in checks.items()))


def test_ac8_determinism(tmp_path):
    outs = []
    for run, threads in enumerate((1, 4, 1)):
        out = tmp_path / f"run{run}"
        assert main(["run", "--config", str(FIXTURES / "smoke.cfg"), "--threads", str(threads), "--out", str(out)]) == 0
        outs.append(out)

    def metrics_sans_time(path):
        return [line.rsplit(",", 1)[0] for line in (path / "metrics.csv").read_text().splitlines()]

    names = sorted(p.name for p in outs[0].iterdir() if p.name.startswith(("convergence_", "checkpoints_", "selected_")))
    same_metrics = all(metrics_sans_time(o) == metrics_sans_time(outs[0]) for o in outs[1:])
    _, mismatch, errors = filecmp.cmpfiles(outs[0], outs[1], names, shallow=False)
    _, mismatch2, errors2 = filecmp.cmpfiles(outs[0], outs[2], names, shallow=False)
    ok = same_metrics and not (mismatch or errors or mismatch2 or errors2) and len(names) > 0
    record("AC8 determinism", ok,
           f"metrics.csv equal (build time excluded): {same_metrics}; {len(names)} trace/checkpoint files, "
           f"mismatches {mismatch + mismatch2 + errors + errors2}")
