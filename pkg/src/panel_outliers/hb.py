"""Hidiroglou-Berthelot ratio editing: centered ratios, effect scores and
the robust detection interval.

The transformation makes period-over-period ratios symmetric in
multiplicative deviation from their median, then weights each unit by its
magnitude so that large units dominate. Bounds come from the quartiles of
the resulting scores, with a floor constant that keeps them from collapsing
when ratios concentrate at the median; the decile variant (10th/90th
percentiles) is the usual fallback for heavily tied ratios.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyInputError
from .ingest import RatioSet
from .report import DetectionResult, rank_units

PERCENTILE_MODES = ("quartiles", "deciles")


@dataclass(frozen=True)
class HBParams:
    """Tuning constants: magnitude exponent U, width C, floor A."""

    U: float = 0.5
    C: float = 7.0
    A: float = 0.05
    percentile_mode: str = "quartiles"

    def __post_init__(self):
        if not 0.0 <= self.U <= 1.0:
            raise ConfigError(f"U must be in [0, 1], got {self.U}")
        if self.C <= 0:
            raise ConfigError(f"C must be positive, got {self.C}")
        if self.A <= 0:
            raise ConfigError(f"A must be positive, got {self.A}")
        if self.percentile_mode not in PERCENTILE_MODES:
            raise ConfigError(
                f"percentile_mode must be one of {PERCENTILE_MODES}, got {self.percentile_mode!r}"
            )


@dataclass
class HBScores:
    s: np.ndarray
    E: np.ndarray
    r_M: float


@dataclass
class HBInterval:
    lower: float
    upper: float
    E_M: float
    d_Q1: float
    d_Q3: float
    degenerate: bool = False


def center_ratios(ratios: RatioSet) -> tuple[np.ndarray, float]:
    """Centered ratios: 0 at the median, -1 at half and +1 at double of it.

    s = 1 - r_M/r below the median ratio r_M, and r/r_M - 1 at or above
    it, so multiplicative deviations map symmetrically around zero.
    """
    r = ratios.ratios()
    if r.size == 0:
        raise EmptyInputError("ratio set is empty")
    r_M = float(np.median(r))
    s = np.where(r < r_M, 1.0 - r_M / r, r / r_M - 1.0)
    return s, r_M


def effect_scores(s: np.ndarray, ratios: RatioSet, U: float) -> np.ndarray:
    """Weight centered ratios by unit magnitude: E = s * max(y1, y2)^U."""
    if not 0.0 <= U <= 1.0:
        raise ConfigError(f"U must be in [0, 1], got {U}")
    magnitude = np.maximum(ratios.y1(), ratios.y2())
    return s * magnitude ** U


def hb_scores(ratios: RatioSet, U: float) -> HBScores:
    s, r_M = center_ratios(ratios)
    return HBScores(s=s, E=effect_scores(s, ratios, U), r_M=r_M)


def hb_interval(E: np.ndarray, params: HBParams) -> HBInterval:
    """Robust interval around the median score.

    Quartile mode: d_Q1 = max(E_M - E_Q1, |A*E_M|) and d_Q3 =
    max(E_Q3 - E_M, |A*E_M|), bounds [E_M - C*d_Q1, E_M + C*d_Q3]; decile
    mode replaces the quartiles with the 10th/90th percentiles. Quantiles
    interpolate order statistics at h = (m-1)p + 1. The interval is marked
    degenerate when it has zero width or fewer than 3 distinct scores
    fed it.
    """
    E = np.asarray(E, dtype=float)
    if E.size == 0:
        raise EmptyInputError("no scores")
    if params.percentile_mode == "deciles":
        p_lo, p_hi = 0.10, 0.90
    else:
        p_lo, p_hi = 0.25, 0.75
    E_lo, E_M, E_hi = (float(v) for v in np.quantile(E, [p_lo, 0.5, p_hi]))
    floor = abs(params.A * E_M)
    d_q1 = max(E_M - E_lo, floor)
    d_q3 = max(E_hi - E_M, floor)
    lower = E_M - params.C * d_q1
    upper = E_M + params.C * d_q3
    degenerate = (np.unique(E).size < 3) or (lower == upper)
    return HBInterval(lower=lower, upper=upper, E_M=E_M, d_Q1=d_q1, d_Q3=d_q3,
                      degenerate=degenerate)


def tied_ratio_share(ratios: RatioSet) -> float:
    """Share of units at the most frequent ratio value (decile-mode cue).

    When more than a quarter of the units share one ratio value the
    quartile bounds tend to overflag; the caller can then switch
    ``percentile_mode`` to "deciles".
    """
    counts = Counter(ratios.ratios().tolist())
    return max(counts.values()) / ratios.m


def hb_detect(ratios: RatioSet, params: HBParams | None = None) -> DetectionResult:
    """Full procedure: center, weight, bound, flag.

    Units whose effect score falls strictly outside the interval are
    flagged; the ranking orders units by |E| descending.
    """
    params = params or HBParams()
    scores = hb_scores(ratios, params.U)
    interval = hb_interval(scores.E, params)
    unit_ids = ratios.unit_ids()
    mask = (scores.E < interval.lower) | (scores.E > interval.upper)
    flagged = [u for u, hit in zip(unit_ids, mask) if hit]
    warnings = []
    if interval.degenerate:
        warnings.append("degenerate interval: scores carry too little spread")
    return DetectionResult(
        method="hb",
        params={"U": params.U, "C": params.C, "A": params.A,
                "percentile_mode": params.percentile_mode},
        unit_ids=unit_ids,
        scores={"E": scores.E.tolist()},
        flagged=flagged,
        rule={"kind": "interval", "score": "E",
              "lower": interval.lower, "upper": interval.upper},
        ranking=rank_units(unit_ids, np.abs(scores.E)),
        ranking_score="E",
        ranking_abs=True,
        base_score="E",
        warnings=warnings,
        details={
            "r_M": scores.r_M,
            "E_M": interval.E_M,
            "d_Q1": interval.d_Q1,
            "d_Q3": interval.d_Q3,
            "degenerate": interval.degenerate,
            "tied_ratio_share": tied_ratio_share(ratios),
        },
        exclusions=ratios.exclusion_ledger(),
    )
