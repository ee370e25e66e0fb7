"""Shared fixtures: vendored CSV panels and their effect-score vectors."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from panel_outliers import compute_ratios, hb_scores, load_panel

DATA_DIR = Path(__file__).parent / "data"


def load_ratio_set(name: str):
    return compute_ratios(load_panel(DATA_DIR / name, "id", "y1", "y2"))


@pytest.fixture(scope="session")
def rice_ratios():
    return load_ratio_set("rice_area.csv")


@pytest.fixture(scope="session")
def wages_ratios():
    return load_ratio_set("wages.csv")


@pytest.fixture(scope="session")
def firms_ratios():
    return load_ratio_set("firms_synth.csv")


@pytest.fixture(scope="session")
def shiw_ratios():
    return load_ratio_set("shiw_synth.csv")


@pytest.fixture(scope="session")
def rice_E(rice_ratios) -> np.ndarray:
    return hb_scores(rice_ratios, 0.5).E


@pytest.fixture(scope="session")
def wages_E(wages_ratios) -> np.ndarray:
    return hb_scores(wages_ratios, 0.5).E


@pytest.fixture(scope="session")
def firms_E(firms_ratios) -> np.ndarray:
    return hb_scores(firms_ratios, 0.5).E


@pytest.fixture(scope="session")
def shiw_E(shiw_ratios) -> np.ndarray:
    return hb_scores(shiw_ratios, 0.5).E


def rng_for(test_key: int, stream: int = 0) -> np.random.Generator:
    """Deterministic per-test generator; streams never overlap."""
    return np.random.Generator(np.random.Philox(key=test_key, counter=stream << 64))
