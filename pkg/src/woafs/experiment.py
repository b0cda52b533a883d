"""End-to-end runs: ingest, pools, WOA word selection, cross-validated classifiers, reports."""

from __future__ import annotations

import csv
import json
import logging
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .classifiers import make_classifier
from .config import ExperimentConfig
from .corpus import (NEGATIVE, POSITIVE, apply_frequency_filter, build_candidate_pools,
                     build_vocabulary, load_corpus, load_word_list)
from .errors import DataError, WoafsError
from .evaluation import FitnessConfig, MetricsReport, WrapperFitness, cross_validate, kfold_plan
from .features import FeatureSubset, build_matrix
from .woa import decode, optimize, selection_params

logger = logging.getLogger(__name__)

METRICS_HEADER = ["classifier", "features", "seed", "accuracy", "precision", "recall",
                  "f_measure", "build_time_s"]


class StageError(WoafsError):
    """A non-package exception raised inside a pipeline stage."""


@dataclass
class SelectionRun:
    budget: int
    seed: int
    subset: FeatureSubset
    fitness: float
    trace: list
    snapshots: list  # [(iteration, [words])]
    evaluations: int
    distinct_subsets: int


@dataclass
class MetricRecord:
    budget: int
    classifier: str
    seed: int
    report: MetricsReport


@dataclass
class RunReport:
    config: ExperimentConfig
    pool_sizes: dict = field(default_factory=dict)
    selections: list = field(default_factory=list)
    records: list = field(default_factory=list)
    stamp: dict = field(default_factory=dict)
    partial: bool = False
    failure: Optional[str] = None

    def selected_words(self, budget) -> Optional[FeatureSubset]:
        """Subset of the highest-fitness seed for ``budget`` (first seed on ties)."""
        runs = [s for s in self.selections if s.budget == budget]
        if not runs:
            return None
        return max(runs, key=lambda s: s.fitness).subset


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except WoafsError as exc:
        raise type(exc)(f"stage '{name}': {exc}") from exc
    except Exception as exc:
        raise StageError(f"stage '{name}': {type(exc).__name__}: {exc}") from exc


def run_experiment(config: ExperimentConfig, threads: int = 1, out_dir=None,
                   write: bool = True) -> RunReport:
    """Run every (budget, seed) selection and cross-validate every classifier on it.

    Reports are written to ``out_dir`` (default ``config.output_dir``) unless
    ``write`` is false. On failure whatever finished is flushed with a
    ``.partial`` marker and the error is re-raised.
    """
    out_dir = Path(out_dir or config.output_dir)
    report = RunReport(config, stamp={
        "version": __version__,
        "seeds": list(config.seeds),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "python": platform.python_version(),
        "numpy": np.__version__,
    })
    try:
        _run(config, report, threads)
    except Exception as exc:
        report.partial = True
        report.failure = str(exc)
        if write:
            try:
                emit_reports(report, out_dir)
            except OSError:
                logger.exception("could not flush partial reports")
        raise
    if write:
        emit_reports(report, out_dir)
    return report


def _run(config, report, threads):
    docs = _stage("ingest", load_corpus, config.positive_reviews, config.negative_reviews)
    if not docs:
        raise DataError("stage 'ingest': corpus is empty")
    pos_words = _stage("ingest", load_word_list, config.positive_words, POSITIVE)
    neg_words = _stage("ingest", load_word_list, config.negative_words, NEGATIVE)
    vocab = _stage("filter", lambda: apply_frequency_filter(build_vocabulary(docs)))
    pools = _stage("pools", build_candidate_pools, vocab, pos_words, neg_words)
    report.pool_sizes = {"documents": len(docs), "vocabulary": len(vocab),
                         POSITIVE: len(pools.positive_pool), NEGATIVE: len(pools.negative_pool)}
    logger.info("%d documents, %d filtered words, pools %d/%d", len(docs), len(vocab),
                len(pools.positive_pool), len(pools.negative_pool))

    universe = pools.positive_pool + pools.negative_pool
    specs = [make_classifier(name, trees=config.trees, feature_sample=config.feature_sample,
                             max_depth=config.max_depth, min_leaf=config.min_leaf,
                             bootstrap=config.bootstrap, rbf_centers=config.rbf_centers)
             for name in config.classifiers]

    for budget in config.budgets:
        for seed in config.seeds:
            fitness = _stage("fitness", WrapperFitness, docs, universe, FitnessConfig(
                config.fitness_classifier, config.holdout, seed, config.trees, config.rbf_centers))
            params = _stage("optimize", selection_params, budget, pools, ub=config.ub, lb=config.lb,
                            agents=config.agents, max_iter=config.max_iter, seed=seed)

            def objective(x):
                return fitness(decode(x, pools).subset)

            def words_at(x):
                return list(decode(x, pools).subset.words)

            logger.info("budget %d seed %d: optimizing", budget, seed)
            result = _stage("optimize", optimize, params, objective, config.checkpoints,
                            words_at, threads)
            subset = decode(result.best.coords, pools).subset
            report.selections.append(SelectionRun(
                budget, seed, subset, result.best.fitness, result.trace,
                result.snapshots, result.evaluations, fitness.cache_size))

            matrix = _stage("features", build_matrix, docs, subset)
            plan = _stage("evaluate", kfold_plan, matrix.y, config.k, config.stratified, seed)
            for spec in specs:
                metrics = _stage("evaluate", cross_validate, spec, matrix, plan, seed,
                                 config.metrics_mode, threads)
                report.records.append(MetricRecord(budget, spec.name, seed, metrics))
                logger.info("budget %d seed %d %s: accuracy %.4f", budget, seed, spec.name, metrics.accuracy)


def _pct(x):
    return f"{100.0 * x:.2f}"


def _write_lines(path, lines):
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def emit_reports(report: RunReport, out_dir) -> list:
    """Write metrics, convergence traces, checkpoints, word lists and run.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    path = out_dir / "metrics.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRICS_HEADER)
        for r in report.records:
            m = r.report
            w.writerow([r.classifier, r.budget, r.seed, _pct(m.accuracy), _pct(m.precision),
                        _pct(m.recall), _pct(m.f_measure), f"{m.build_time:.3f}"])
    written.append(path)

    for sel in report.selections:
        path = out_dir / f"convergence_{sel.budget}_{sel.seed}.csv"
        _write_lines(path, ["iteration,best_fitness"] + [f"{i},{v!r}" for i, v in enumerate(sel.trace)])
        written.append(path)
        path = out_dir / f"checkpoints_{sel.budget}_{sel.seed}.json"
        snaps = [{"iteration": it, "words": list(words)} for it, words in sel.snapshots]
        path.write_text(json.dumps(snaps, indent=2) + "\n", encoding="utf-8")
        written.append(path)

    for budget in dict.fromkeys(s.budget for s in report.selections):
        path = out_dir / f"selected_words_{budget}.txt"
        _write_lines(path, report.selected_words(budget).words)
        written.append(path)

    path = out_dir / "run.json"
    path.write_text(json.dumps(_run_json(report), indent=2) + "\n", encoding="utf-8")
    written.append(path)

    marker = out_dir / ".partial"
    if report.partial:
        marker.write_text((report.failure or "") + "\n", encoding="utf-8")
        written.append(marker)
    elif marker.exists():
        marker.unlink()
    return written


def _run_json(report: RunReport):
    cfg = {k: (str(v) if isinstance(v, Path) else list(v) if isinstance(v, tuple) else v)
           for k, v in report.config.__dict__.items() if k != "source"}
    return {
        "stamp": report.stamp,
        "partial": report.partial,
        "failure": report.failure,
        "config": cfg,
        "assumptions": {
            "positive_class": POSITIVE,
            "aggregation": "pooled confusion matrix over folds",
            "not_applicable": {"PART": "rule learner not implemented"},
        },
        "pools": report.pool_sizes,
        "selections": [{
            "budget": s.budget, "seed": s.seed, "fitness": s.fitness,
            "distinct_words": len(s.subset), "evaluations": s.evaluations,
            "distinct_subsets": s.distinct_subsets,
            "words": list(s.subset.words), "origin": list(s.subset.origin),
            "trace": s.trace,
            "checkpoints": [{"iteration": it, "words": list(w)} for it, w in s.snapshots],
        } for s in report.selections],
        "metrics": [{
            "budget": r.budget, "classifier": r.classifier, "seed": r.seed,
            "accuracy": r.report.accuracy, "precision": r.report.precision,
            "recall": r.report.recall, "f_measure": r.report.f_measure,
            "mode": r.report.mode, "zero_division": r.report.zero_division,
            "confusion": r.report.confusion.__dict__ if r.report.confusion else None,
            "build_time_s": r.report.build_time, "wall_time_s": r.report.wall_time,
        } for r in report.records],
    }
