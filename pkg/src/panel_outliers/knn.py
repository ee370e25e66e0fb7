"""k-nearest-neighbor outlier scores on one-dimensional score vectors.

Two score families: the distance to the k-th nearest neighbor (Ramaswamy,
Rastogi and Shim 2000) and the sum of the k nearest distances (Angiulli
and Pizzuti 2002), which reacts less to the exact choice of k. A `mean`
variant divides the sum by k; it ranks identically to the sum.

Distance is absolute difference on the real line, so after sorting every
unit's k nearest neighbors sit in the k positions on either side of it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, KTooLargeError, TooFewPointsError
from .report import DetectionResult, ScoreVector, rank_units

SCORE_KINDS = ("distance", "weight", "mean")


@dataclass
class KnnScores:
    d_k: np.ndarray             # (m,) distance to the k-th nearest neighbor
    neighbor_dists: np.ndarray  # (m, k) ascending per row
    weight: np.ndarray          # (m,) row sums of neighbor_dists
    k: int


def knn_distances(x, k: int) -> KnnScores:
    """Per-unit distances to the k nearest other units (self excluded)."""
    x = np.asarray(x, dtype=float)
    m = x.size
    if k < 1:
        raise ConfigError(f"k must be a positive integer, got {k}")
    if k >= m:
        raise KTooLargeError(f"k={k} requires at least {k + 1} units, got {m}")

    order = np.argsort(x, kind="stable")
    xs = x[order]
    idx = np.arange(m)[:, None]
    offs = np.arange(1, k + 1)[None, :]

    # Candidate neighbors are the k predecessors and k successors in sorted
    # order; out-of-range slots are masked to +inf before the row sort.
    li = idx - offs
    left = xs[idx] - xs[np.maximum(li, 0)]
    left[li < 0] = np.inf
    ri = idx + offs
    right = xs[np.minimum(ri, m - 1)] - xs[idx]
    right[ri > m - 1] = np.inf

    cand = np.concatenate([left, right], axis=1)
    cand.sort(axis=1)
    nd_sorted = cand[:, :k]

    nd = np.empty_like(nd_sorted)
    nd[order] = nd_sorted
    return KnnScores(d_k=nd[:, -1].copy(), neighbor_dists=nd,
                     weight=nd.sum(axis=1), k=k)


def gap_threshold(scores, epsilon: float) -> float:
    """epsilon times the largest jump between consecutive sorted scores."""
    s = np.asarray(scores, dtype=float)
    if s.size < 2:
        raise TooFewPointsError("gap threshold needs at least 2 scores")
    if not 0.0 < epsilon <= 1.0:
        raise ConfigError(f"epsilon must be in (0, 1], got {epsilon}")
    return float(epsilon * np.max(np.diff(np.sort(s))))


def _series_name(k: int, score_kind: str) -> str:
    suffix = {"distance": "dist", "weight": "weight", "mean": "mean"}[score_kind]
    return f"{k}nn_{suffix}"


def knn_detect(sv: ScoreVector, k: int, score_kind: str = "distance",
               threshold: float | None = None,
               epsilon: float | None = None) -> DetectionResult:
    """Score every unit; flag those above a threshold if one is resolved.

    Pass `threshold` directly, or `epsilon` to derive it from the largest
    gap in the sorted scores. With neither, the result is ranking-only:
    no unit is flagged and the caller inspects the sorted scores.
    """
    if score_kind not in SCORE_KINDS:
        raise ConfigError(f"score_kind must be one of {SCORE_KINDS}, got {score_kind!r}")
    if threshold is not None and epsilon is not None:
        raise ConfigError("pass threshold or epsilon, not both")

    ks = knn_distances(sv.values, k)
    if score_kind == "distance":
        values = ks.d_k
    elif score_kind == "weight":
        values = ks.weight
    else:
        values = ks.weight / k
    name = _series_name(k, score_kind)

    params: dict = {"k": k, "score_kind": score_kind}
    if epsilon is not None:
        threshold = gap_threshold(values, epsilon)
        params["epsilon"] = epsilon
    if threshold is not None:
        params["threshold"] = threshold
        rule = {"kind": "threshold", "score": name, "value": float(threshold)}
        flagged = [u for u, v in zip(sv.unit_ids, values) if v > threshold]
    else:
        rule = {"kind": "ranking_only"}
        flagged = []

    return DetectionResult(
        method=f"knn-{score_kind}",
        params=params,
        unit_ids=list(sv.unit_ids),
        scores={sv.name: sv.values.tolist(), name: values.tolist()},
        flagged=flagged,
        rule=rule,
        ranking=rank_units(sv.unit_ids, values),
        ranking_score=name,
        base_score=sv.name,
    )
