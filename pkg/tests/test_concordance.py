"""Rank concordance between detector score vectors."""
import json

import numpy as np
import pytest

from panel_outliers import (
    COMPARE_LABELS,
    DataError,
    DegenerateVectorError,
    build_matrix,
    emit_report,
    kendall_tau,
)

from conftest import rng_for
from oracles import kendall_tau_pairs


class TestKendallTau:
    def test_perfect_agreement(self):
        a = np.array([3.0, 1.0, 4.0, 1.5, 9.0])
        assert kendall_tau(a, a) == 1.0

    def test_perfect_reversal(self):
        a = np.array([3.0, 1.0, 4.0, 1.5, 9.0])
        assert kendall_tau(a, -a) == -1.0

    def test_single_swap(self):
        assert kendall_tau([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(2.0 / 3.0)

    def test_monotone_transform_invariance(self):
        rng = rng_for(601)
        a = rng.normal(0, 1, 60)
        b = rng.normal(0, 1, 60)
        assert kendall_tau(np.exp(a), b) == pytest.approx(kendall_tau(a, b), abs=1e-12)

    def test_antisymmetry(self):
        rng = rng_for(602)
        a = rng.normal(0, 1, 40)
        b = rng.normal(0, 1, 40)
        assert kendall_tau(-a, b) == pytest.approx(-kendall_tau(a, b), abs=1e-12)

    def test_matches_pair_enumeration_with_ties(self):
        rng = rng_for(603)
        for _ in range(25):
            m = int(rng.integers(2, 80))
            a = np.round(rng.normal(0, 2, m), 1)
            b = np.round(rng.normal(0, 2, m), 1)
            if np.unique(a).size < 2 or np.unique(b).size < 2:
                continue
            assert kendall_tau(a, b) == pytest.approx(kendall_tau_pairs(a, b),
                                                      abs=1e-12)

    def test_constant_vector_rejected(self):
        with pytest.raises(DegenerateVectorError):
            kendall_tau([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        with pytest.raises(DegenerateVectorError):
            kendall_tau([1.0, 2.0, 3.0], [7.0, 7.0, 7.0])

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            kendall_tau([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_too_short(self):
        with pytest.raises(DataError):
            kendall_tau([1.0], [2.0])


class TestBuildMatrix:
    def scores_for(self, rng, m=50):
        base = rng.normal(0, 2, m)
        return {
            "A": base + rng.normal(0, 0.3, m),
            "B": -base + rng.normal(0, 0.3, m),
            "C": rng.normal(0, 1, m),
        }

    def test_symmetric_unit_diagonal(self):
        rng = rng_for(604)
        mat = build_matrix(self.scores_for(rng))
        t = np.array(mat.tau)
        assert mat.labels == ["A", "B", "C"]
        assert np.array_equal(t, t.T)
        assert np.all(np.diag(t) == 1.0)

    def test_identical_vectors_give_one(self):
        v = np.array([1.0, 5.0, 2.0, 4.0])
        mat = build_matrix({"x": v, "y": v.copy()})
        assert mat.tau[0][1] == 1.0

    def test_abs_applied_to_named_series(self):
        v = np.array([-5.0, 1.0, -2.0, 4.0, -3.0])
        w = np.abs(v)
        with_abs = build_matrix({"s": v, "t": w}, use_abs_for={"s"})
        assert with_abs.tau[0][1] == 1.0
        without = build_matrix({"s": v, "t": w})
        assert without.tau[0][1] != 1.0

    def test_label_order_preserved(self):
        rng = rng_for(605)
        scores = {name: rng.normal(0, 1, 30) for name in ("z", "a", "m")}
        assert build_matrix(scores).labels == ["z", "a", "m"]

    def test_compare_labels_constant(self):
        assert COMPARE_LABELS == ("|E|", "IF", "5-NN-dist", "10-NN-dist",
                                  "15-NN-dist", "5-NN-weight", "10-NN-weight",
                                  "15-NN-weight")


class TestSerialization:
    def make_matrix(self):
        rng = rng_for(606)
        base = rng.normal(0, 1, 40)
        mat = build_matrix({"A": base, "B": base + rng.normal(0, 0.5, 40)})
        mat.params = {"seed": 7}
        return mat

    def test_json_document(self):
        mat = self.make_matrix()
        doc = json.loads(emit_report(mat, "json"))
        assert doc["schema"] == "panel-outliers/1"
        assert doc["kind"] == "concordance"
        assert doc["labels"] == ["A", "B"]
        assert doc["params"] == {"seed": 7}
        assert doc["tau"][0][0] == 1.0
        assert doc["tau"][0][1] == doc["tau"][1][0]

    def test_csv_document(self):
        mat = self.make_matrix()
        lines = emit_report(mat, "csv").decode().strip().split("\n")
        assert lines[0] == ",A,B"
        cells = lines[1].split(",")
        assert cells[0] == "A"
        assert cells[1] == "1.0000"
        # entries rounded to 4 decimals
        assert cells[2] == f"{mat.tau[0][1]:.4f}"
