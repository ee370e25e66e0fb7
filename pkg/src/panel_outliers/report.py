"""Uniform result model, JSON/CSV serialization and plot-data emission.

Every detector returns a :class:`DetectionResult`; ``emit_report`` turns a
result (or a concordance matrix) into deterministic bytes, and
``emit_plot_data`` writes the CSV series behind the usual diagnostic plots
(score histogram, score-vs-score scatters, sorted-score curves).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA = "panel-outliers/1"


@dataclass
class ScoreVector:
    """A named per-unit score series, the common currency of detectors."""

    name: str
    unit_ids: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if len(self.unit_ids) != self.values.size:
            raise ValueError("unit ids and values disagree in length")

    @property
    def m(self) -> int:
        return self.values.size


def _plain(value):
    """Recursively convert numpy scalars/arrays so json and == behave."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class DetectionResult:
    """Outcome of one detector run.

    ``rule`` records how ``flagged`` was derived so the decision can be
    replayed from the stored scores alone:

    - ``{"kind": "interval", "score": s, "lower": a, "upper": b}``:
      flag units whose score ``s`` falls strictly outside [a, b];
    - ``{"kind": "threshold", "score": s, "value": t}``: flag score > t;
    - ``{"kind": "noise_labels"}``: flag units labelled -1 in the
      ``label`` series;
    - ``{"kind": "ranking_only"}``: nothing flagged, scores are for
      inspection.
    """

    method: str
    params: dict
    unit_ids: list[str]
    scores: dict[str, list[float]]
    flagged: list[str]
    rule: dict
    ranking: list[str]
    ranking_score: str
    ranking_abs: bool = False
    base_score: str = ""
    warnings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    exclusions: list[dict] = field(default_factory=list)

    def __post_init__(self):
        self.params = _plain(self.params)
        self.scores = {k: [float(v) for v in vs] for k, vs in self.scores.items()}
        self.details = _plain(self.details)

    def score_array(self, name: str) -> np.ndarray:
        return np.asarray(self.scores[name], dtype=float)

    def to_json_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "method": self.method,
            "params": self.params,
            "unit_ids": list(self.unit_ids),
            "scores": {k: list(v) for k, v in self.scores.items()},
            "flagged": list(self.flagged),
            "rule": dict(self.rule),
            "ranking": list(self.ranking),
            "ranking_score": self.ranking_score,
            "ranking_abs": self.ranking_abs,
            "base_score": self.base_score,
            "warnings": list(self.warnings),
            "details": self.details,
            "exclusions": [dict(e) for e in self.exclusions],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "DetectionResult":
        if payload.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {payload.get('schema')!r}")
        return cls(
            method=payload["method"],
            params=payload["params"],
            unit_ids=list(payload["unit_ids"]),
            scores={k: list(v) for k, v in payload["scores"].items()},
            flagged=list(payload["flagged"]),
            rule=dict(payload["rule"]),
            ranking=list(payload["ranking"]),
            ranking_score=payload["ranking_score"],
            ranking_abs=payload["ranking_abs"],
            base_score=payload["base_score"],
            warnings=list(payload["warnings"]),
            details=payload["details"],
            exclusions=[dict(e) for e in payload["exclusions"]],
        )


def rank_units(unit_ids, values, descending=True) -> list[str]:
    """Order unit ids by value; ties broken by unit id for determinism."""
    sign = -1.0 if descending else 1.0
    keyed = sorted(zip(unit_ids, values), key=lambda t: (sign * t[1], t[0]))
    return [u for u, _ in keyed]


def replay_flags(result: DetectionResult) -> list[str]:
    """Re-derive the flag set from the recorded rule and scores."""
    rule = result.rule
    kind = rule["kind"]
    if kind == "ranking_only":
        return []
    if kind == "interval":
        x = result.score_array(rule["score"])
        mask = (x < rule["lower"]) | (x > rule["upper"])
    elif kind == "threshold":
        x = result.score_array(rule["score"])
        mask = x > rule["value"]
    elif kind == "noise_labels":
        mask = result.score_array("label") == -1
    else:
        raise ValueError(f"unknown rule kind {kind!r}")
    return [u for u, hit in zip(result.unit_ids, mask) if hit]


# --- serialization ---------------------------------------------------------

def _result_csv(result: DetectionResult) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = list(result.scores)
    writer.writerow(["unit_id", *names, "flagged"])
    flagged = set(result.flagged)
    for i, unit in enumerate(result.unit_ids):
        row = [unit] + [repr(result.scores[n][i]) for n in names]
        row.append("1" if unit in flagged else "0")
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")


def emit_report(obj, format: str = "json") -> bytes:
    """Serialize a DetectionResult or ConcordanceMatrix deterministically.

    JSON keeps full float precision (shortest round-trip representation,
    up to 17 significant digits); the CSV matrix is rounded to 4 decimals
    to match the usual presentation of rank-correlation tables.
    """
    from .concordance import ConcordanceMatrix  # local import, no cycle

    if format not in ("json", "csv"):
        raise ValueError(f"unknown format {format!r}")
    if isinstance(obj, DetectionResult):
        if format == "json":
            return (json.dumps(obj.to_json_dict(), indent=2) + "\n").encode("utf-8")
        return _result_csv(obj)
    if isinstance(obj, ConcordanceMatrix):
        if format == "json":
            return (json.dumps(obj.to_json_dict(), indent=2) + "\n").encode("utf-8")
        return obj.to_csv_bytes()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- plot data -------------------------------------------------------------

def freedman_diaconis_edges(x: np.ndarray) -> np.ndarray:
    """Histogram bin edges with the Freedman-Diaconis width 2*IQR*m^(-1/3)."""
    x = np.asarray(x, dtype=float)
    q1, q3 = np.quantile(x, [0.25, 0.75])
    width = 2.0 * (q3 - q1) * x.size ** (-1.0 / 3.0)
    lo, hi = float(x.min()), float(x.max())
    if width <= 0 or lo == hi:
        # Degenerate spread: one bin covering the data.
        return np.array([lo, hi if hi > lo else lo + 1.0])
    nbins = max(1, int(math.ceil((hi - lo) / width)))
    return np.linspace(lo, lo + nbins * width, nbins + 1)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def plot_series(result: DetectionResult) -> dict[str, tuple[list[str], list[list]]]:
    """Compute the plot-data series for a result: name -> (header, rows).

    Series: ``hist_<base>`` over the series the detector consumed
    (Freedman-Diaconis bins), ``sorted_<s>`` for every score series, and
    ``scatter_<base>_<s>`` pairing the consumed series with each derived
    one.
    """
    series: dict[str, tuple[list[str], list[list]]] = {}
    base = result.base_score
    names = list(result.scores)
    if base in result.scores:
        x = result.score_array(base)
        edges = freedman_diaconis_edges(x)
        counts, edges = np.histogram(x, bins=edges)
        rows = [
            [repr(float(edges[i])), repr(float(edges[i + 1])), int(counts[i])]
            for i in range(len(counts))
        ]
        series[f"hist_{base}"] = (["bin_left", "bin_right", "count"], rows)
    for name in names:
        vals = sorted(result.scores[name])
        rows = [[rank + 1, repr(float(v))] for rank, v in enumerate(vals)]
        series[f"sorted_{name}"] = (["rank", name], rows)
    for name in names:
        if name == base or base not in result.scores:
            continue
        rows = [
            [unit, repr(result.scores[base][i]), repr(result.scores[name][i])]
            for i, unit in enumerate(result.unit_ids)
        ]
        series[f"scatter_{base}_{name}"] = (["unit_id", base, name], rows)
    return series


def emit_plot_data(result: DetectionResult, out_dir: str | Path) -> list[Path]:
    """Write every plot-data series of ``result`` as <series>.csv files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in plot_series(result).items():
        path = out / f"{name}.csv"
        _write_csv(path, header, rows)
        written.append(path)
    return written
