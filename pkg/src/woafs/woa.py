"""Whale Optimization Algorithm and the word-index decoding adapter.

The optimizer maximizes. Minimization problems go through :func:`negate`.

Update rules (per agent, per iteration ``t``)::

    a = 2 * (1 - t / max_iter)
    A = 2*a*r1 - a,  C = 2*r2
    p <  0.5, |A| <  1 :  X <- X* - A * |C*X* - X|          (encircling)
    p <  0.5, |A| >= 1 :  X <- Xr - A * |C*Xr - X|          (exploration)
    p >= 0.5           :  X <- |X* - X| * exp(b*l) * cos(2*pi*l) + X*

with ``X*`` the best position so far, ``Xr`` a uniformly chosen agent and
``l ~ U[-1, 1]``. Positions are clamped to ``[lb, ub]`` after every update.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np

from .corpus import CandidatePools
from .errors import ConfigError, DecodeError, SequencingError
from .features import FeatureSubset

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class WOAParams:
    agents: int = 30
    max_iter: int = 100
    lb: float = 0.0
    ub: float = 4000.0
    dim: int = 100
    seed: int = 0
    b: float = 1.0  # spiral shape constant

    def validate(self, for_selection: bool = False) -> "WOAParams":
        if self.agents < 1:
            raise ConfigError(f"agents must be >= 1, got {self.agents}")
        if self.max_iter < 0:
            raise ConfigError(f"max_iter must be >= 0, got {self.max_iter}")
        if not self.lb < self.ub:
            raise ConfigError(f"lb must be < ub, got lb={self.lb} ub={self.ub}")
        if self.dim < 1:
            raise ConfigError(f"dim must be >= 1, got {self.dim}")
        if for_selection and self.dim % 2:
            raise ConfigError(f"dim must be even for feature selection, got {self.dim}")
        return self


@dataclass
class Position:
    coords: np.ndarray
    fitness: Optional[float] = None


@dataclass
class Population:
    """Search state. Row ``i`` of ``X`` is agent ``i``; NaN fitness = unevaluated."""

    X: np.ndarray
    fitness: np.ndarray
    best: Optional[Position] = None
    iteration: int = 0
    trace: list = field(default_factory=list)
    evaluations: int = 0

    @property
    def positions(self) -> list[Position]:
        return [Position(x.copy(), None if np.isnan(f) else float(f)) for x, f in zip(self.X, self.fitness)]

    @property
    def evaluated(self) -> bool:
        return not np.isnan(self.fitness).any()


@dataclass(frozen=True)
class DecodedSubset:
    subset: FeatureSubset
    indices: np.ndarray  # per-coordinate pool index


@dataclass
class OptimizeResult:
    best: Position
    trace: list
    snapshots: list  # [(iteration, payload)], payload from the decoder or raw coords
    evaluations: int
    population: Population


def control_parameter(t, max_iter):
    """Linearly decreasing ``a``: 2 at ``t=0``, 0 at ``t=max_iter``."""
    if max_iter == 0:
        return 0.0
    return 2.0 * (1.0 - t / max_iter)


def init_population(params: WOAParams, rng: np.random.Generator) -> Population:
    params.validate()
    X = rng.uniform(params.lb, params.ub, size=(params.agents, params.dim))
    np.clip(X, params.lb, params.ub, out=X)
    return Population(X=X, fitness=np.full(params.agents, np.nan))


def _safe_call(objective, x, index):
    try:
        value = float(objective(x))
    except Exception as exc:  # an agent failure must not kill the run
        logger.warning("objective failed for agent %d: %s", index, exc)
        return -math.inf
    if math.isnan(value):
        logger.warning("objective returned NaN for agent %d", index)
        return -math.inf
    return value


def evaluate_population(pop: Population, objective: Objective,
                        executor: Optional[ThreadPoolExecutor] = None) -> Population:
    """Fill in fitness, update the global best and append to the trace."""
    rows = list(pop.X)
    idx = range(len(rows))
    if executor is None:
        values = [_safe_call(objective, x, i) for i, x in zip(idx, rows)]
    else:
        values = list(executor.map(lambda i: _safe_call(objective, rows[i], i), idx))
    fitness = np.asarray(values, dtype=float)

    best = pop.best
    k = int(np.argmax(fitness))  # first maximum wins ties
    if best is None or fitness[k] > best.fitness:
        best = Position(pop.X[k].copy(), float(fitness[k]))
    return replace(pop, fitness=fitness, best=best, trace=pop.trace + [best.fitness],
                   evaluations=pop.evaluations + len(rows))


def update_positions(X, best, a, r1, r2, p, l, rand_idx, b=1.0):
    """Apply one WOA move to every row of ``X`` given pre-drawn randoms.

    ``r1, r2, p, l, rand_idx`` are per-agent arrays. No clamping is done.
    """
    X = np.asarray(X, dtype=float)
    A = (2.0 * a * r1 - a)[:, None]
    C = (2.0 * r2)[:, None]
    p = p[:, None]
    l = l[:, None]

    encircle = best - A * np.abs(C * best - X)
    X_rand = X[rand_idx]
    explore = X_rand - A * np.abs(C * X_rand - X)
    spiral = np.abs(best - X) * np.exp(b * l) * np.cos(2.0 * np.pi * l) + best

    shrink = np.where(np.abs(A) < 1.0, encircle, explore)
    return np.where(p < 0.5, shrink, spiral)


def step(pop: Population, params: WOAParams, rng: np.random.Generator) -> Population:
    if not pop.evaluated or pop.best is None:
        raise SequencingError("step() requires an evaluated population")
    if pop.iteration >= params.max_iter:
        raise SequencingError(f"population already at max_iter={params.max_iter}")
    n = len(pop.X)
    a = control_parameter(pop.iteration, params.max_iter)
    r1 = rng.random(n)
    r2 = rng.random(n)
    p = rng.random(n)
    l = rng.uniform(-1.0, 1.0, n)
    rand_idx = rng.integers(0, n, size=n)
    X = update_positions(pop.X, pop.best.coords, a, r1, r2, p, l, rand_idx, params.b)
    np.clip(X, params.lb, params.ub, out=X)
    return replace(pop, X=X, fitness=np.full(n, np.nan), iteration=pop.iteration + 1)


def optimize(params: WOAParams, objective: Objective, checkpoints: Iterable[int] = (),
             decoder: Optional[Callable[[np.ndarray], object]] = None,
             threads: int = 1, rng: Optional[np.random.Generator] = None) -> OptimizeResult:
    """Run init -> evaluate -> (step -> evaluate) x max_iter.

    ``checkpoints`` are iteration numbers (0 = initial population) at which
    the best position is recorded, passed through ``decoder`` when given.
    """
    params.validate()
    rng = np.random.default_rng(params.seed) if rng is None else rng
    wanted = sorted(set(int(c) for c in checkpoints))
    snapshots = []

    executor = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        pop = evaluate_population(init_population(params, rng), objective, executor)
        while True:
            if pop.iteration in wanted:
                payload = pop.best.coords.copy() if decoder is None else decoder(pop.best.coords)
                snapshots.append((pop.iteration, payload))
            if pop.iteration >= params.max_iter:
                break
            pop = evaluate_population(step(pop, params, rng), objective, executor)
    finally:
        if executor is not None:
            executor.shutdown()
    return OptimizeResult(pop.best, list(pop.trace), snapshots, pop.evaluations, pop)


def random_search(params: WOAParams, objective: Objective, rng: np.random.Generator):
    """Uniform sampling baseline with the same budget as :func:`optimize`.

    Returns the best (maximized) value over ``agents * (max_iter + 1)`` draws.
    """
    budget = params.agents * (params.max_iter + 1)
    X = rng.uniform(params.lb, params.ub, size=(budget, params.dim))
    return max(_safe_call(objective, x, i) for i, x in enumerate(X))


def negate(f: Objective) -> Objective:
    """Turn a minimization objective into a maximization one."""
    def neg(x):
        return -f(x)
    return neg


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


# -- feature-selection adapter ----------------------------------------------

def decode(coords, pools: CandidatePools) -> DecodedSubset:
    """Map a position to words: floor, then modulo the pool size.

    The first half of the coordinates indexes the positive pool, the second
    half the negative pool. Repeated words are kept once, in first-seen order.
    """
    coords = np.asarray(getattr(coords, "coords", coords), dtype=float)
    if coords.size % 2:
        raise DecodeError(f"position dimension must be even, got {coords.size}")
    if not pools.positive_pool or not pools.negative_pool:
        raise DecodeError("cannot decode against an empty candidate pool")
    half = coords.size // 2
    floors = np.floor(coords).astype(np.int64)
    indices = np.concatenate([floors[:half] % len(pools.positive_pool),
                              floors[half:] % len(pools.negative_pool)])
    chosen = {}
    for k, idx in enumerate(indices):
        if k < half:
            word, tag = pools.positive_pool[idx], "positive-pool"
        else:
            word, tag = pools.negative_pool[idx], "negative-pool"
        chosen.setdefault(word, tag)
    return DecodedSubset(FeatureSubset(tuple(chosen), tuple(chosen.values())), indices)


def selection_params(budget: int, pools: CandidatePools, ub=None, lb=0.0, **overrides) -> WOAParams:
    """WOA parameters for a feature budget; ``ub`` defaults to the larger pool size."""
    if ub is None:
        ub = float(max(len(pools.positive_pool), len(pools.negative_pool)))
    return WOAParams(dim=budget, lb=float(lb), ub=float(ub), **overrides).validate(for_selection=True)
