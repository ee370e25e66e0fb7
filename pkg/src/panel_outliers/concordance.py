"""Kendall rank correlation between detector score vectors.

The tie-corrected tau-b variant is used throughout: score vectors carry
ties (duplicate data values, zero k-NN distances), and the uncorrected
tau-a would understate agreement there. Pair counts are accumulated in
exact integer arithmetic (Knight 1966), so identical vectors give
exactly 1.0 rather than 1 minus a rounding error.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DegenerateVectorError

# Layout of the standard comparison run: magnitude of the effect scores,
# the isolation score, then the k-NN families over k = 5, 10, 15.
COMPARE_LABELS = ("|E|", "IF", "5-NN-dist", "10-NN-dist", "15-NN-dist",
                  "5-NN-weight", "10-NN-weight", "15-NN-weight")


@dataclass
class ConcordanceMatrix:
    labels: list[str]
    tau: np.ndarray
    params: dict = field(default_factory=dict)  # run settings echo (seed etc.)

    def to_json_dict(self) -> dict:
        from .report import SCHEMA

        return {
            "schema": SCHEMA,
            "kind": "concordance",
            "labels": list(self.labels),
            "params": dict(self.params),
            "tau": [[float(v) for v in row] for row in self.tau],
        }

    def to_csv_bytes(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["", *self.labels])
        for label, row in zip(self.labels, self.tau):
            writer.writerow([label, *(f"{v:.4f}" for v in row)])
        return buf.getvalue().encode("utf-8")


def _tie_pairs(sorted_values: np.ndarray) -> int:
    """Number of index pairs falling inside runs of equal values."""
    if sorted_values.size == 0:
        return 0
    boundaries = np.flatnonzero(np.diff(sorted_values) != 0)
    counts = np.diff(np.concatenate([[-1], boundaries, [sorted_values.size - 1]]))
    return int(sum(int(c) * (int(c) - 1) // 2 for c in counts))


def _merge_count(seq: list[float]) -> int:
    """Strict inversions (i < j with seq[i] > seq[j]) by mergesort."""
    n = len(seq)
    if n < 2:
        return 0
    buf = list(seq)
    src = list(seq)
    inversions = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    buf[k] = src[i]
                    i += 1
                else:
                    buf[k] = src[j]
                    inversions += mid - i
                    j += 1
                k += 1
            buf[k:hi] = src[i:mid] if i < mid else src[j:hi]
        src, buf = buf, src
        width *= 2
    return inversions


def kendall_tau(a, b) -> float:
    """Tau-b over all unit pairs of the two score vectors.

    (C - D) / sqrt((n0 - t1)(n0 - t2)) with n0 all pairs and t1, t2 the
    tie pairs of each vector; C - D comes from counting inversions of b
    after lexicographic sorting, all in exact integers.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DataError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise DataError(f"kendall tau needs at least 2 units, got {a.size}")
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise DegenerateVectorError(
            "kendall tau is undefined for a constant score vector"
        )
    n = int(a.size)
    order = np.lexsort((b, a))
    ax, bx = a[order], b[order]

    n0 = n * (n - 1) // 2
    t1 = _tie_pairs(ax)
    t2 = _tie_pairs(np.sort(b))
    joint_breaks = np.flatnonzero((np.diff(ax) != 0) | (np.diff(bx) != 0))
    counts = np.diff(np.concatenate([[-1], joint_breaks, [n - 1]]))
    t12 = int(sum(int(c) * (int(c) - 1) // 2 for c in counts))
    # within an a-block bx ascends, so every counted inversion has a_i < a_j
    discordant = _merge_count(bx.tolist())

    numerator = n0 - t1 - t2 + t12 - 2 * discordant
    p, q = n0 - t1, n0 - t2
    root = math.isqrt(p * q)
    denom = float(root) if root * root == p * q else math.sqrt(p * q)
    return numerator / denom


def build_matrix(scores: dict, use_abs_for: set | frozenset = frozenset()) -> ConcordanceMatrix:
    """Pairwise tau-b matrix over named score vectors, in dict order.

    Vectors named in `use_abs_for` enter as absolute values (the effect
    score ranks by magnitude, sign only says which side moved).
    """
    labels = list(scores)
    vecs = []
    for name in labels:
        v = np.asarray(scores[name], dtype=float)
        vecs.append(np.abs(v) if name in use_abs_for else v)
    n = len(labels)
    tau = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            t = kendall_tau(vecs[i], vecs[j])
            tau[i, j] = t
            tau[j, i] = t
    return ConcordanceMatrix(labels=labels, tau=tau)
