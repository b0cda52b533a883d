"""
The whale optimizer on benchmark functions
==========================================

The optimizer maximizes, so minimization problems are wrapped with
``negate``. The best-so-far trace can only go up.
"""
# %%
import numpy as np

from woafs.woa import WOAParams, negate, optimize, random_search, rastrigin, sphere

params = WOAParams(agents=30, max_iter=100, lb=-100.0, ub=100.0, dim=10, seed=0)
result = optimize(params, negate(sphere), checkpoints=[0, 10, 50, 100])
print("best sphere value:", -result.best.fitness)
print("evaluations:", result.evaluations, "trace length:", len(result.trace))
for it, coords in result.snapshots:
    print(f"  iteration {it:3d}: |x| = {np.linalg.norm(coords):.3e}")

# %%
# Uniform random search with the same number of evaluations, for scale.
baseline = -random_search(params, negate(sphere), np.random.default_rng(0))
print(f"random search best: {baseline:.1f}")

# %%
# Rastrigin is multimodal; the search still ends near the global optimum at 0.
values = [-optimize(WOAParams(agents=30, max_iter=200, lb=-5.12, ub=5.12, dim=5, seed=s),
                    negate(rastrigin)).best.fitness for s in range(5)]
print("rastrigin best per seed:", np.round(values, 4))
