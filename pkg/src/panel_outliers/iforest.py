"""Isolation forest for one-dimensional score vectors.

Liu, Ting and Zhou (2008): points that random axis splits isolate after
unusually few cuts are anomalies. Each tree grows on a subsample of size q
drawn without replacement; the split value is uniform strictly inside the
node's value range; growth stops at single points, constant nodes, or
depth ceil(log2 q). A leaf holding more than one point contributes its
depth plus c(size), the expected extra path length had growth continued,
so the score u = 2^(-avg_path / c(q)) calibrates to 0.5 for average
points and approaches 1 for easily isolated ones.

Determinism: every tree derives its own generator from (seed, tree index)
via a counter-based bit stream, so results are bit-identical for any
thread count.
"""
from __future__ import annotations

import math
import os
import secrets
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyInputError, QTooSmallError
from .report import DetectionResult, ScoreVector, rank_units

DEFAULT_SUBSAMPLE_CAP = 256
DEFAULT_NTREES = 500
THREADS_ENV = "PANEL_OUTLIERS_THREADS"


def harmonic(n: int) -> float:
    """H(n) = sum of 1/i for i = 1..n; series approximation above 1e6."""
    if n < 1:
        raise ConfigError(f"harmonic number needs n >= 1, got {n}")
    if n <= 1_000_000:
        return math.fsum(1.0 / i for i in range(1, n + 1))
    g = 0.5772156649015328606
    return math.log(n) + g + 1 / (2 * n) - 1 / (12 * n**2) + 1 / (120 * n**4)


def c_factor(q: int) -> float:
    """Expected path length 2*H(q-1) - 2*(q-1)/q of a q-point tree."""
    if q < 2:
        raise QTooSmallError(f"c factor needs q >= 2, got {q}")
    return 2.0 * harmonic(q - 1) - 2.0 * (q - 1) / q


def _c_table(q: int) -> np.ndarray:
    """c(size) for every leaf size 0..q; sizes below 2 contribute 0."""
    t = np.zeros(q + 1)
    if q >= 2:
        H = np.cumsum(1.0 / np.arange(1, q, dtype=float))
        sizes = np.arange(2, q + 1, dtype=float)
        t[2:] = 2.0 * H - 2.0 * (sizes - 1.0) / sizes
    return t


@dataclass(frozen=True)
class ForestParams:
    q: int | None = None          # subsample size; None = min(m, 256)
    ntrees: int = DEFAULT_NTREES
    seed: int | None = None       # None = drawn from entropy at fit time
    max_depth: int | None = None  # None = ceil(log2 q)
    threads: int | None = None    # None = env cap or serial

    def __post_init__(self):
        if self.ntrees < 1:
            raise ConfigError(f"ntrees must be at least 1, got {self.ntrees}")
        if self.q is not None and self.q < 2:
            raise QTooSmallError(f"subsample size must be at least 2, got {self.q}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError(f"max_depth must be at least 1, got {self.max_depth}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.seed is not None and not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")


@dataclass
class _Tree:
    splits: np.ndarray   # in-order split values, strictly increasing
    contrib: np.ndarray  # per-leaf depth + c(leaf size), left to right


@dataclass
class Forest:
    trees: list[_Tree]
    m: int
    q: int
    ntrees: int
    seed: int
    max_depth: int
    c_q: float


@dataclass
class IFScores:
    avg_path: np.ndarray
    u: np.ndarray


def _resolve_threads(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _grow_tree(x: np.ndarray, q: int, max_depth: int, c_leaf: np.ndarray,
               seed: int, tree_index: int) -> _Tree:
    rng = np.random.Generator(np.random.Philox(key=seed, counter=tree_index << 128))
    m = x.size
    if q < m:
        sub = np.sort(x[rng.choice(m, size=q, replace=False)])
    else:
        sub = np.sort(x)
    # At most q-1 internal nodes exist, so one block of draws suffices.
    draws = rng.random(max(q - 1, 1)).tolist()
    vals = sub.tolist()
    splits: list[float] = []
    contrib: list[float] = []
    cursor = 0

    def node(lo: int, hi: int, depth: int) -> None:
        nonlocal cursor
        size = hi - lo
        a = vals[lo]
        b = vals[hi - 1]
        if size == 1 or depth == max_depth or a == b:
            contrib.append(depth + c_leaf[size])
            return
        u = a + (b - a) * draws[cursor]
        cursor += 1
        if u <= a:
            u = math.nextafter(a, b)
        elif u > b:
            u = b
        pos = bisect_left(vals, u, lo, hi)
        node(lo, pos, depth + 1)
        splits.append(u)
        node(pos, hi, depth + 1)

    node(0, q, 0)
    return _Tree(np.asarray(splits), np.asarray(contrib))


def fit_forest(x, params: ForestParams | None = None) -> Forest:
    """Grow ntrees isolation trees over x; deterministic given the seed."""
    params = params or ForestParams()
    x = np.asarray(x, dtype=float)
    m = x.size
    if m == 0:
        raise EmptyInputError("cannot fit a forest on no data")
    q = params.q if params.q is not None else min(m, DEFAULT_SUBSAMPLE_CAP)
    if q < 2:
        raise QTooSmallError(f"subsample size must be at least 2, got {q}")
    if q > m:
        raise ConfigError(f"subsample size q={q} exceeds the {m} available units")
    seed = params.seed if params.seed is not None else secrets.randbits(64)
    max_depth = params.max_depth if params.max_depth is not None \
        else max(1, math.ceil(math.log2(q)))
    c_leaf = _c_table(q)
    threads = _resolve_threads(params.threads)

    def build(i: int) -> _Tree:
        return _grow_tree(x, q, max_depth, c_leaf, seed, i)

    if threads == 1:
        trees = [build(i) for i in range(params.ntrees)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(build, range(params.ntrees)))
    return Forest(trees=trees, m=m, q=q, ntrees=params.ntrees, seed=seed,
                  max_depth=max_depth, c_q=c_factor(q))


def score(forest: Forest, x) -> IFScores:
    """Average isolation depth per unit and the normalized score u."""
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.size)
    for tree in forest.trees:
        leaf = np.searchsorted(tree.splits, x, side="right")
        total += tree.contrib[leaf]
    avg = total / forest.ntrees
    return IFScores(avg_path=avg, u=np.power(2.0, -avg / forest.c_q))


def iforest_detect(sv: ScoreVector, params: ForestParams | None = None,
                   u0: float = 0.5) -> DetectionResult:
    """Flag units whose isolation score exceeds u0."""
    if not 0.0 < u0 < 1.0:
        raise ConfigError(f"u0 must be in (0, 1), got {u0}")
    params = params or ForestParams()
    forest = fit_forest(sv.values, params)
    sc = score(forest, sv.values)
    flagged = [u for u, v in zip(sv.unit_ids, sc.u) if v > u0]
    mean_u = float(np.mean(sc.u))
    warnings = []
    if mean_u < 0.5:
        warnings.append(
            f"mean isolation score {mean_u:.4f} is below 0.5; "
            "consider increasing ntrees"
        )
    return DetectionResult(
        method="iforest",
        params={"q": forest.q, "ntrees": forest.ntrees, "seed": forest.seed,
                "max_depth": forest.max_depth, "u0": u0},
        unit_ids=list(sv.unit_ids),
        scores={sv.name: sv.values.tolist(), "u": sc.u.tolist()},
        flagged=flagged,
        rule={"kind": "threshold", "score": "u", "value": u0},
        ranking=rank_units(sv.unit_ids, sc.u),
        ranking_score="u",
        base_score=sv.name,
        warnings=warnings,
        details={"mean_u": mean_u, "c_q": forest.c_q},
    )
