"""Wrapper feature selection for opinion mining with the Whale Optimization Algorithm.

Pipeline: :mod:`woafs.corpus` (ingest, filter, candidate pools) ->
:mod:`woafs.woa` (word-index search) with :mod:`woafs.evaluation` fitness ->
:mod:`woafs.classifiers` under k-fold cross-validation ->
:mod:`woafs.experiment` reports.
"""

__version__ = "0.1.0"
