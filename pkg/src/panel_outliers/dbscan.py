"""Density-based clustering on one-dimensional score vectors.

DBSCAN (Ester et al. 1996) specialised to the real line: a core point has
at least g-1 other units within distance delta, clusters are maximal
chains of cores with consecutive sorted gaps at most delta, border points
attach to the cluster of the leftmost core that reaches them, everything
else is noise. Noise points are the reported outliers.

delta is never chosen automatically. `sorted_knn_curve` supplies the
ascending (g-1)-NN distances whose jump locates a sensible radius.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .knn import knn_distances
from .report import DetectionResult, ScoreVector, rank_units

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    delta: float
    g: int

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.g < 2:
            raise ConfigError(f"g must be at least 2, got {self.g}")


def dbscan_cluster(x, params: DbscanParams) -> np.ndarray:
    """Cluster labels 0..c-1 in ascending-x order; noise labelled -1.

    Duplicates count as distinct units when deciding core status, and
    equal values always receive equal labels, so the labelling does not
    depend on input order.
    """
    x = np.asarray(x, dtype=float)
    m = x.size
    labels = np.full(m, NOISE, dtype=int)
    if m == 0:
        return labels

    order = np.argsort(x, kind="stable")
    xs = x[order]
    lo = np.searchsorted(xs, xs - params.delta, side="left")
    hi = np.searchsorted(xs, xs + params.delta, side="right")
    n_within = hi - lo - 1
    core = n_within >= params.g - 1

    sorted_labels = np.full(m, NOISE, dtype=int)
    core_pos = np.flatnonzero(core)
    if core_pos.size:
        # Cores chain into one cluster while consecutive core gaps stay
        # within delta; a larger gap starts the next cluster.
        gaps = np.diff(xs[core_pos])
        cluster_of_core = np.concatenate([[0], np.cumsum(gaps > params.delta)])
        sorted_labels[core_pos] = cluster_of_core

        # A border point joins the leftmost core within delta of it.
        border = np.flatnonzero(~core)
        j = np.searchsorted(xs[core_pos], xs[border] - params.delta, side="left")
        jc = np.minimum(j, core_pos.size - 1)
        reachable = (j < core_pos.size) & (
            np.abs(xs[core_pos[jc]] - xs[border]) <= params.delta
        )
        sorted_labels[border[reachable]] = cluster_of_core[jc[reachable]]

    labels[order] = sorted_labels
    return labels


def sorted_knn_curve(x, k: int) -> list[tuple[int, float]]:
    """Ascending (rank, k-NN distance) pairs used to eyeball delta."""
    d_k = knn_distances(x, k).d_k
    return [(rank + 1, float(v)) for rank, v in enumerate(np.sort(d_k))]


def dbscan_detect(sv: ScoreVector, params: DbscanParams) -> DetectionResult:
    """Flag noise points; ranking follows the (g-1)-NN distance."""
    labels = dbscan_cluster(sv.values, params)
    flagged = [u for u, lab in zip(sv.unit_ids, labels) if lab == NOISE]
    n_clusters = int(labels.max() + 1) if labels.size and labels.max() >= 0 else 0
    scores: dict = {sv.name: sv.values.tolist(), "label": labels.tolist()}
    ranking_abs = False
    if params.g - 1 < sv.m:
        curve_name = f"d{params.g - 1}nn"
        curve = knn_distances(sv.values, params.g - 1).d_k
        scores[curve_name] = curve.tolist()
        ranking = rank_units(sv.unit_ids, curve)
    else:
        # Too few units for the (g-1)-NN curve; everything is noise and
        # the ranking falls back to score magnitude.
        curve_name = sv.name
        ranking = rank_units(sv.unit_ids, np.abs(sv.values))
        ranking_abs = True
    return DetectionResult(
        method="dbscan",
        params={"delta": params.delta, "g": params.g},
        unit_ids=list(sv.unit_ids),
        scores=scores,
        flagged=flagged,
        rule={"kind": "noise_labels"},
        ranking=ranking,
        ranking_score=curve_name,
        ranking_abs=ranking_abs,
        base_score=sv.name,
        details={"n_clusters": n_clusters, "n_noise": len(flagged)},
    )
