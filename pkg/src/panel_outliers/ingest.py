"""Panel ingestion: CSV loading and period-over-period ratios.

A run works on one variable observed on the same units at two time
occasions. ``load_panel`` reads the wide CSV (one row per unit), and
``compute_ratios`` turns the pairs into the positive ratio set every
detector downstream consumes, recording one exclusion reason per dropped
unit.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DataError,
    DuplicateUnitError,
    EmptyRatioSetError,
    MissingColumnError,
    NegativeValueError,
    ValueParseError,
)

# Tokens read as a missing value, compared case-insensitively.
MISSING_TOKENS = frozenset({"", "na", "nan"})

EXCLUSION_REASONS = ("missing_y1", "missing_y2", "zero_y1", "zero_y2")


@dataclass(frozen=True)
class PanelPair:
    """One unit's observations at the two occasions; ``None`` = missing."""

    unit_id: str
    y1: float | None
    y2: float | None


@dataclass(frozen=True)
class RatioEntry:
    unit_id: str
    r: float
    y1: float
    y2: float


@dataclass(frozen=True)
class Exclusion:
    unit_id: str
    reason: str


@dataclass
class RatioSet:
    """Valid ratios r = y2/y1 plus the ledger of excluded units."""

    entries: list[RatioEntry]
    exclusions: list[Exclusion] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.entries)

    def unit_ids(self) -> list[str]:
        return [e.unit_id for e in self.entries]

    def ratios(self) -> np.ndarray:
        return np.array([e.r for e in self.entries], dtype=float)

    def y1(self) -> np.ndarray:
        return np.array([e.y1 for e in self.entries], dtype=float)

    def y2(self) -> np.ndarray:
        return np.array([e.y2 for e in self.entries], dtype=float)

    def exclusion_ledger(self) -> list[dict]:
        return [{"unit_id": e.unit_id, "reason": e.reason} for e in self.exclusions]


def _parse_cell(token: str, unit_id: str, column: str) -> float | None:
    text = token.strip()
    if text.lower() in MISSING_TOKENS:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ValueParseError(
            f"unit {unit_id!r}, column {column!r}: cannot parse {token!r} as a number"
        ) from None
    if math.isnan(value):
        return None
    if not math.isfinite(value):
        raise ValueParseError(f"unit {unit_id!r}, column {column!r}: non-finite value {token!r}")
    if value < 0:
        raise NegativeValueError(
            f"unit {unit_id!r}, column {column!r}: negative value {value}"
        )
    return value


def load_panel(path: str | Path, id_col: str, t1_col: str, t2_col: str) -> list[PanelPair]:
    """Read one :class:`PanelPair` per CSV row.

    The file must have a header naming all three columns. Empty cells and
    the tokens ``NA``/``NaN`` (any case) are missing values; negative
    numbers are a hard error, as are duplicated unit ids.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    pairs: list[PanelPair] = []
    seen: set[str] = set()
    # utf-8-sig tolerates a BOM; csv handles RFC 4180 quoting.
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (id_col, t1_col, t2_col):
            if col not in header:
                raise MissingColumnError(f"column {col!r} not in header {header}")
        for row in reader:
            unit_id = (row[id_col] or "").strip()
            if not unit_id:
                raise DataError(f"row {reader.line_num}: empty unit id")
            if unit_id in seen:
                raise DuplicateUnitError(f"duplicate unit id {unit_id!r}")
            seen.add(unit_id)
            y1 = _parse_cell(row[t1_col] or "", unit_id, t1_col)
            y2 = _parse_cell(row[t2_col] or "", unit_id, t2_col)
            pairs.append(PanelPair(unit_id, y1, y2))
    return pairs


def _exclusion_reason(pair: PanelPair) -> str | None:
    if pair.y1 is None:
        return "missing_y1"
    if pair.y2 is None:
        return "missing_y2"
    if pair.y1 == 0:
        return "zero_y1"
    if pair.y2 == 0:
        return "zero_y2"
    return None


def compute_ratios(pairs: list[PanelPair]) -> RatioSet:
    """Build the ratio set r = y2/y1, excluding zeros and missing values.

    Both directions are excluded: y1 = 0 (ratio undefined or infinite) and
    y2 = 0 (zero ratio). Each dropped unit is recorded with the first
    applicable reason, checked in the order missing_y1, missing_y2,
    zero_y1, zero_y2. Input order is preserved.
    """
    entries: list[RatioEntry] = []
    exclusions: list[Exclusion] = []
    for pair in pairs:
        reason = _exclusion_reason(pair)
        if reason is not None:
            exclusions.append(Exclusion(pair.unit_id, reason))
            continue
        entries.append(RatioEntry(pair.unit_id, pair.y2 / pair.y1, pair.y1, pair.y2))
    if not entries:
        raise EmptyRatioSetError("no unit has both occasions present and positive")
    return RatioSet(entries, exclusions)
