"""Monte-Carlo sampling of descent trajectories through their Markov chain.

Given ``D_k``, the next count is ``D_{k+1} = D_k + xi`` with
``xi ~ Bernoulli((k - D_k)/(k + 1))``. Running the chain from ``D_1 = 0``
gives the whole trajectory ``D_1, ..., D_n`` of a uniform random permutation
grown one element at a time, in O(n) work and O(1) state per path.

Randomness is counter-based. Paths are grouped in blocks of
:data:`BLOCK_SIZE`; block ``b`` under ``seed`` owns the Philox stream with
key ``seed`` and counter word ``b``, consumed step-major. The uniform used by
path ``i`` at step ``k`` is therefore a fixed function of ``(seed, i, k)``
and any single path can be replayed with :func:`sample_path`.

The summary statistics follow the martingale
``M_k = k (D_k - (k - 1)/2)``, whose predictable quadratic variation is
``<M>_n = sum_{k<n} (k - D_k)(D_k + 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._util import DomainError

__all__ = [
    "BLOCK_SIZE",
    "DescentPath",
    "MartingaleStats",
    "SimulationSummary",
    "sample_path",
    "sample_paths",
    "sample_endpoints",
    "sample_path_fisher_yates",
    "martingale_stats",
    "run_summary",
]

BLOCK_SIZE = 256
_STEP_CHUNK = 512
_MAX_LANES = 16384


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


def _run_chain(n: int, seed: int, first_block: int, n_blocks: int, consumer) -> None:
    """Advance ``n_blocks * BLOCK_SIZE`` chains side by side.

    ``consumer(k, d)`` is called for k = 1..n with ``d`` holding ``D_k``.
    """
    gens = [_block_generator(seed, b) for b in range(first_block, first_block + n_blocks)]
    d = np.zeros(n_blocks * BLOCK_SIZE, dtype=np.int64)
    consumer(1, d)
    k = 1
    while k < n:
        steps = min(_STEP_CHUNK, n - k)
        u = np.concatenate([g.random((steps, BLOCK_SIZE)) for g in gens], axis=1)
        for s in range(steps):
            # P(xi = 1 | D_k) = (k - D_k)/(k + 1)  <=>  (k+1) u < k - D_k
            d += (k + 1) * u[s] < (k - d)
            k += 1
            consumer(k, d)


def _lane_batches(paths: int):
    """Yield ``(first_block, n_blocks, n_used)`` covering ``paths`` paths."""
    total_blocks = -(-paths // BLOCK_SIZE)
    per = max(1, _MAX_LANES // BLOCK_SIZE)
    done = 0
    for b0 in range(0, total_blocks, per):
        nb = min(per, total_blocks - b0)
        used = min(nb * BLOCK_SIZE, paths - done)
        done += used
        yield b0, nb, used


@dataclass(frozen=True)
class DescentPath:
    """One trajectory; ``d[k - 1]`` holds ``D_k`` for ``k = 1..n``."""

    n: int
    d: np.ndarray
    seed: int
    path_index: int = 0

    def __post_init__(self):
        d = self.d
        if d.shape != (self.n,):
            raise ValueError("trajectory length must equal n")
        if d[0] != 0:
            raise ValueError("D_1 must be 0")
        steps = np.diff(d)
        if np.any((steps != 0) & (steps != 1)):
            raise ValueError("increments must be 0 or 1")
        if np.any(d > np.arange(self.n)):
            raise ValueError("D_k must not exceed k - 1")


def sample_paths(n: int, paths: int, seed: int) -> np.ndarray:
    """All trajectories as an int array of shape ``(paths, n)``.

    Memory is ``8 * paths * n`` bytes; use :func:`run_summary` for large runs.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    out = np.empty((paths, n), dtype=np.int64)
    row = 0
    for b0, nb, used in _lane_batches(paths):
        def record(k, d, row=row, used=used):
            out[row : row + used, k - 1] = d[:used]

        _run_chain(n, seed, b0, nb, record)
        row += used
    return out


def sample_path(n: int, seed: int, path_index: int = 0) -> DescentPath:
    """Replay path ``path_index`` of the run keyed by ``seed``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if path_index < 0:
        raise DomainError("path_index must be nonnegative")
    block, lane = divmod(path_index, BLOCK_SIZE)
    d = np.empty(n, dtype=np.int64)

    def record(k, dd):
        d[k - 1] = dd[lane]

    _run_chain(n, seed, block, 1, record)
    return DescentPath(n=n, d=d, seed=seed, path_index=path_index)


def sample_endpoints(n: int, paths: int, seed: int) -> np.ndarray:
    """``D_n`` for each of ``paths`` chains (same streams as :func:`sample_paths`)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    out = np.empty(paths, dtype=np.int64)
    row = 0
    for b0, nb, used in _lane_batches(paths):
        def record(k, d, row=row, used=used):
            if k == n:
                out[row : row + used] = d[:used]

        _run_chain(n, seed, b0, nb, record)
        row += used
    return out


def sample_path_fisher_yates(n: int, size: int, seed: int) -> np.ndarray:
    """Descent counts of ``size`` shuffled permutations of ``0..n-1``.

    Independent of the chain sampler: a uniform permutation per row, then a
    direct count of positions with ``pi(k) > pi(k+1)``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    out = np.empty(size, dtype=np.int64)
    chunk = max(1, 4_000_000 // n)
    for start in range(0, size, chunk):
        m = min(chunk, size - start)
        perms = rng.permuted(np.tile(np.arange(n), (m, 1)), axis=1)
        out[start : start + m] = np.count_nonzero(perms[:, :-1] > perms[:, 1:], axis=1)
    return out


def _lil_scale(n: int) -> float:
    ll = math.log(math.log(n)) if n > math.e else float("nan")
    return math.sqrt(n / (2 * ll)) if ll > 0 else float("nan")


@dataclass(frozen=True)
class MartingaleStats:
    """Per-path martingale quantities.

    ``m[k - 1] = M_k``; ``qsl_sum = sum_{k<=n} (D_k/k - 1/2)^2``;
    ``lil = sqrt(n/(2 log log n)) (D_n/n - 1/2)`` (nan for n < 3).
    """

    m: np.ndarray
    bracket: float
    qsl_sum: float
    lil: float

    @property
    def qsl(self) -> float:
        """``qsl_sum / log n``."""
        n = self.m.size
        return self.qsl_sum / math.log(n) if n > 1 else float("nan")


def martingale_stats(path: DescentPath) -> MartingaleStats:
    n = path.n
    k = np.arange(1, n + 1)
    d = path.d.astype(float)
    m = k * (d - (k - 1) / 2)
    bracket = float(np.sum((k[:-1] - d[:-1]) * (d[:-1] + 1)))
    qsl_sum = math.fsum((d / k - 0.5) ** 2)
    lil = _lil_scale(n) * (d[-1] / n - 0.5)
    return MartingaleStats(m=m, bracket=bracket, qsl_sum=qsl_sum, lil=lil)


@dataclass(frozen=True)
class SimulationSummary:
    """Monte-Carlo aggregates over independent paths, with standard errors.

    ``fclt_cov[i, j]`` estimates ``Cov(W_{s_i}, W_{s_j})`` for the process
    ``W_s = sqrt(n) (D_{floor(ns)}/floor(ns) - 1/2)`` on ``time_grid``.
    ``lil_max``/``lil_min`` are the extremes across paths of the
    iterated-logarithm scaling of ``D_n``.
    """

    n: int
    paths: int
    seed: int
    mean_hat: float
    mean_se: float
    var_hat: float
    var_se: float
    qsl_hat: float
    qsl_se: float
    bracket_hat: float
    bracket_se: float
    m_mean: float
    m_se: float
    lil_max: float
    lil_min: float
    time_grid: tuple[float, ...]
    fclt_cov: np.ndarray
    fclt_se: np.ndarray
    counts: np.ndarray

    def as_dict(self) -> dict:
        out = {}
        for key, val in self.__dict__.items():
            out[key] = val.tolist() if isinstance(val, np.ndarray) else val
        return out


def run_summary(
    n: int,
    paths: int,
    seed: int,
    time_grid: Optional[Sequence[float]] = None,
) -> SimulationSummary:
    """Simulate ``paths`` trajectories of length ``n`` and aggregate them.

    The per-path work streams through the chain without storing trajectories.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if paths < 2:
        raise DomainError("need at least two paths for standard errors")
    grid = tuple(float(s) for s in (time_grid if time_grid is not None else (0.5, 1.0)))
    grid_k = [math.floor(n * s) for s in grid]
    if any(not (1 <= k <= n) for k in grid_k):
        raise DomainError(f"time grid points must satisfy 1 <= floor(n s) <= n for n={n}")
    want: dict[int, list[int]] = {}
    for j, k in enumerate(grid_k):
        want.setdefault(k, []).append(j)

    d_end = np.empty(paths)
    qsl = np.empty(paths)
    bracket = np.empty(paths)
    w = np.empty((paths, len(grid)))
    row = 0
    for b0, nb, used in _lane_batches(paths):
        lanes = nb * BLOCK_SIZE
        acc_qsl = np.zeros(lanes)
        acc_br = np.zeros(lanes)
        wl = np.empty((lanes, len(grid)))

        def consume(k, d, acc_qsl=acc_qsl, acc_br=acc_br, wl=wl):
            df = d.astype(float)
            acc_qsl += (df / k - 0.5) ** 2
            if k < n:
                acc_br += (k - df) * (df + 1)
            for j in want.get(k, ()):
                wl[:, j] = math.sqrt(n) * (df / k - 0.5)
            if k == n:
                wl_end[:] = df

        wl_end = np.empty(lanes)
        _run_chain(n, seed, b0, nb, consume)
        sl = slice(row, row + used)
        d_end[sl] = wl_end[:used]
        qsl[sl] = acc_qsl[:used]
        bracket[sl] = acc_br[:used]
        w[sl] = wl[:used]
        row += used

    sqrt_p = math.sqrt(paths)
    mean = float(d_end.mean())
    centered = d_end - mean
    var = float(np.mean(centered**2)) * paths / (paths - 1)
    m4 = float(np.mean(centered**4))
    var_se = math.sqrt(max(m4 - var * var, 0.0) / paths)

    qsl_norm = qsl / math.log(n) if n > 1 else np.full(paths, np.nan)
    br_norm = bracket / float(n) ** 3
    m_end = n * (d_end - (n - 1) / 2)
    lil = _lil_scale(n) * (d_end / n - 0.5)

    wc = w - w.mean(axis=0)
    prods = wc[:, :, None] * wc[:, None, :]
    cov = prods.sum(axis=0) / (paths - 1)
    cov_se = prods.std(axis=0, ddof=1) / sqrt_p

    return SimulationSummary(
        n=n,
        paths=paths,
        seed=seed,
        mean_hat=mean,
        mean_se=float(d_end.std(ddof=1)) / sqrt_p,
        var_hat=var,
        var_se=var_se,
        qsl_hat=float(qsl_norm.mean()),
        qsl_se=float(qsl_norm.std(ddof=1)) / sqrt_p,
        bracket_hat=float(br_norm.mean()),
        bracket_se=float(br_norm.std(ddof=1)) / sqrt_p,
        m_mean=float(m_end.mean()),
        m_se=float(m_end.std(ddof=1)) / sqrt_p,
        lil_max=float(np.max(lil)),
        lil_min=float(np.min(lil)),
        time_grid=grid,
        fclt_cov=cov,
        fclt_se=cov_se,
        counts=np.bincount(d_end.astype(np.int64), minlength=n),
    )
