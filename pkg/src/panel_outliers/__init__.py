"""Outlier detection for two-occasion panel data.

The pipeline turns per-unit value pairs into period-over-period ratios,
centers and magnitude-weights them into effect scores, and offers several
detectors over those scores: the Hidiroglou-Berthelot interval, standard
and skewness-adjusted boxplots, isolation forests, DBSCAN noise points,
and k-NN distance/weight scores, plus a Kendall tau-b concordance matrix
for comparing the resulting rankings.
"""
from .boxplot import (
    Fences,
    adjusted_fences,
    box_detect,
    medcouple,
    quartiles,
    standard_fences,
)
from .concordance import COMPARE_LABELS, ConcordanceMatrix, build_matrix, kendall_tau
from .dbscan import NOISE, DbscanParams, dbscan_cluster, dbscan_detect, sorted_knn_curve
from .errors import (
    ConfigError,
    DataError,
    DegenerateVectorError,
    DuplicateUnitError,
    EmptyInputError,
    EmptyRatioSetError,
    KTooLargeError,
    MissingColumnError,
    NegativeValueError,
    PanelOutliersError,
    QTooSmallError,
    TooFewPointsError,
    ValueParseError,
)
from .hb import (
    HBInterval,
    HBParams,
    HBScores,
    center_ratios,
    effect_scores,
    hb_detect,
    hb_interval,
    hb_scores,
    tied_ratio_share,
)
from .iforest import (
    Forest,
    ForestParams,
    IFScores,
    c_factor,
    fit_forest,
    harmonic,
    iforest_detect,
    score,
)
from .ingest import (
    Exclusion,
    PanelPair,
    RatioEntry,
    RatioSet,
    compute_ratios,
    load_panel,
)
from .knn import KnnScores, gap_threshold, knn_detect, knn_distances
from .report import (
    SCHEMA,
    DetectionResult,
    ScoreVector,
    emit_plot_data,
    emit_report,
    freedman_diaconis_edges,
    plot_series,
    rank_units,
    replay_flags,
)

__version__ = "0.1.0"

__all__ = [
    "adjusted_fences",
    "box_detect",
    "build_matrix",
    "c_factor",
    "center_ratios",
    "COMPARE_LABELS",
    "compute_ratios",
    "ConcordanceMatrix",
    "ConfigError",
    "DataError",
    "dbscan_cluster",
    "dbscan_detect",
    "DbscanParams",
    "DegenerateVectorError",
    "DetectionResult",
    "DuplicateUnitError",
    "effect_scores",
    "emit_plot_data",
    "emit_report",
    "EmptyInputError",
    "EmptyRatioSetError",
    "Exclusion",
    "Fences",
    "fit_forest",
    "Forest",
    "ForestParams",
    "freedman_diaconis_edges",
    "gap_threshold",
    "harmonic",
    "hb_detect",
    "hb_interval",
    "hb_scores",
    "HBInterval",
    "HBParams",
    "HBScores",
    "iforest_detect",
    "IFScores",
    "kendall_tau",
    "knn_detect",
    "knn_distances",
    "KnnScores",
    "KTooLargeError",
    "load_panel",
    "medcouple",
    "MissingColumnError",
    "NegativeValueError",
    "NOISE",
    "PanelOutliersError",
    "PanelPair",
    "plot_series",
    "QTooSmallError",
    "quartiles",
    "rank_units",
    "RatioEntry",
    "RatioSet",
    "replay_flags",
    "SCHEMA",
    "score",
    "ScoreVector",
    "sorted_knn_curve",
    "standard_fences",
    "tied_ratio_share",
    "TooFewPointsError",
    "ValueParseError",
]
