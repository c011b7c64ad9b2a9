"""Monte-Carlo trajectories and the descent martingale.

Growing a permutation one element at a time, the descent count moves up by
one with probability (k - D_k)/(k + 1). M_k = k (D_k - (k - 1)/2) is then a
martingale; its bracket grows like n^3/12 and the rescaled trajectory has
covariance s/(12 t^2) at times s <= t.
"""

import math

import numpy as np

from descent_tails import martingale_stats, run_summary, sample_path

s = run_summary(1000, 20_000, seed=1, time_grid=(0.25, 0.5, 1.0))
print(f"mean {s.mean_hat:.3f} +- {s.mean_se:.3f} (exact 499.5)")
print(f"variance {s.var_hat:.3f} +- {s.var_se:.3f} (exact {1001 / 12:.3f})")
print(f"<M>_n / n^3 = {s.bracket_hat:.6f} (limit {1 / 12:.6f})")

grid = np.array(s.time_grid)
target = np.minimum.outer(grid, grid) / (12 * np.maximum.outer(grid, grid) ** 2)
print("empirical covariance\n", np.round(s.fclt_cov, 4))
print("limit covariance\n", np.round(target, 4))

# any single path can be replayed from (seed, index)
path = sample_path(1000, seed=1, path_index=123)
ms = martingale_stats(path)
print(f"path 123: D_n = {path.d[-1]}, M_n = {ms.m[-1]:.0f}, qsl = {ms.qsl:.4f}, lil = {ms.lil:+.4f}")

# the quadratic strong law converges only at rate 1/log n
for n in (10**3, 10**5):
    s = run_summary(n, 200, seed=5)
    print(f"n={n}: qsl {s.qsl_hat:.4f} (limit {1 / 12:.4f}, 1/log n = {1 / math.log(n):.3f})")
