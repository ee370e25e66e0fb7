"""Density clustering on the line: labels, noise, and the distance curve."""
import numpy as np
import pytest

from panel_outliers import (
    NOISE,
    ConfigError,
    DbscanParams,
    ScoreVector,
    dbscan_cluster,
    dbscan_detect,
    replay_flags,
    sorted_knn_curve,
)

from conftest import rng_for
from oracles import dbscan_audit, dbscan_queue


def sv_of(values):
    return ScoreVector("E", [f"u{i}" for i in range(len(values))],
                       np.asarray(values, dtype=float))


class TestParams:
    def test_valid(self):
        p = DbscanParams(delta=0.5, g=3)
        assert p.delta == 0.5 and p.g == 3

    @pytest.mark.parametrize("kwargs", [
        {"delta": 0.0, "g": 3}, {"delta": -1.0, "g": 3}, {"delta": 1.0, "g": 1},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ConfigError):
            DbscanParams(**kwargs)


class TestCluster:
    def test_small_example(self):
        labels = dbscan_cluster([0.0, 0.1, 0.2, 10.0], DbscanParams(0.5, 3))
        assert labels.tolist() == [0, 0, 0, -1]

    def test_two_clusters_one_noise(self):
        x = [0.0, 0.3, 0.6, 5.0, 5.2, 5.4, 20.0]
        labels = dbscan_cluster(x, DbscanParams(0.5, 3))
        assert labels.tolist() == [0, 0, 0, 1, 1, 1, -1]

    def test_wide_delta_single_cluster(self):
        rng = rng_for(401)
        x = rng.normal(0, 1, 50)
        labels = dbscan_cluster(x, DbscanParams(float(x.max() - x.min()), 3))
        assert np.all(labels == 0)

    def test_too_few_for_core_everything_noise(self):
        labels = dbscan_cluster([1.0, 2.0], DbscanParams(5.0, 4))
        assert labels.tolist() == [-1, -1]

    def test_duplicates_share_labels(self):
        x = [1.0, 1.0, 1.0, 9.0, 9.0, 9.0]
        labels = dbscan_cluster(x, DbscanParams(0.5, 3))
        assert labels.tolist() == [0, 0, 0, 1, 1, 1]

    def test_border_joins_leftmost_reaching_cluster(self):
        # the non-core point at 2.0 is within delta of core 1.0 (left
        # cluster) and core 3.0 (right cluster); the left one wins
        x = [0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 3.75, 4.0, 4.5]
        labels = dbscan_cluster(x, DbscanParams(1.0, 4))
        assert labels.tolist() == [0, 0, 0, 0, 0, 1, 1, 1, 1]

    def test_labels_count_up_in_x_order(self):
        x = [100.0, 100.5, 101.0, 0.0, 0.5, 1.0]
        labels = dbscan_cluster(x, DbscanParams(0.6, 3))
        assert labels.tolist() == [1, 1, 1, 0, 0, 0]

    def test_input_order_irrelevant(self):
        rng = rng_for(402)
        x = np.concatenate([rng.normal(0, 0.5, 30), rng.normal(40, 0.5, 30),
                            [15.0, 80.0]])
        params = DbscanParams(1.0, 5)
        base = dbscan_cluster(x, params)
        perm = rng.permutation(x.size)
        assert np.array_equal(dbscan_cluster(x[perm], params), base[perm])

    def test_empty_input(self):
        assert dbscan_cluster([], DbscanParams(1.0, 3)).size == 0

    def test_matches_queue_reference(self):
        rng = rng_for(403)
        for _ in range(25):
            m = int(rng.integers(5, 80))
            x = rng.normal(0, 2, m)
            if rng.random() < 0.4:
                x = np.round(x, 1)
            gaps = np.diff(np.sort(x))
            delta = float(np.quantile(gaps[gaps > 0], rng.uniform(0.3, 0.95)) *
                          rng.uniform(1.01, 1.49))
            g = int(rng.integers(2, 8))
            labels = dbscan_cluster(x, DbscanParams(delta, g))
            ref = dbscan_queue(x, delta, g)
            assert np.array_equal(labels, ref)
            dbscan_audit(x, delta, g, labels)

    def test_noise_shrinks_as_delta_grows(self):
        rng = rng_for(404)
        x = rng.lognormal(0, 1, 120)
        params_narrow = DbscanParams(0.05, 4)
        params_wide = DbscanParams(0.5, 4)
        noise_narrow = set(np.flatnonzero(dbscan_cluster(x, params_narrow) == NOISE))
        noise_wide = set(np.flatnonzero(dbscan_cluster(x, params_wide) == NOISE))
        assert noise_wide <= noise_narrow


class TestCurve:
    def test_sorted_and_one_based(self):
        pts = sorted_knn_curve([0.0, 1.0, 3.0, 7.0], 2)
        assert [r for r, _ in pts] == [1, 2, 3, 4]
        assert [d for _, d in pts] == [2.0, 3.0, 3.0, 6.0]

    def test_far_point_jumps_at_the_end(self):
        rng = rng_for(405)
        x = np.concatenate([rng.uniform(0, 1, 40), [50.0]])
        pts = sorted_knn_curve(x, 5)
        dists = [d for _, d in pts]
        assert dists == sorted(dists)
        assert dists[-1] > 10 * dists[-2]

    def test_constant_curve(self):
        pts = sorted_knn_curve(np.full(6, 3.0), 2)
        assert all(d == 0.0 for _, d in pts)


class TestDetect:
    def test_noise_flagged(self):
        result = dbscan_detect(sv_of([0.0, 0.1, 0.2, 10.0]), DbscanParams(0.5, 3))
        assert result.flagged == ["u3"]
        assert result.rule == {"kind": "noise_labels"}
        assert result.scores["label"] == [0, 0, 0, -1]
        assert result.details == {"n_clusters": 1, "n_noise": 1}
        assert replay_flags(result) == result.flagged

    def test_ranking_follows_curve_distance(self):
        result = dbscan_detect(sv_of([0.0, 0.1, 0.2, 10.0]), DbscanParams(0.5, 3))
        assert result.ranking_score == "d2nn"
        assert result.ranking[0] == "u3"
        assert len(result.scores["d2nn"]) == 4

    def test_fallback_when_g_exceeds_m(self):
        result = dbscan_detect(sv_of([1.0, -8.0]), DbscanParams(0.5, 6))
        assert result.flagged == ["u0", "u1"]
        assert result.ranking_score == "E"
        assert result.ranking_abs
        assert result.ranking[0] == "u1"
        assert "d5nn" not in result.scores

    def test_no_noise_on_dense_data(self):
        rng = rng_for(406)
        x = rng.uniform(0, 1, 200)
        result = dbscan_detect(sv_of(x), DbscanParams(0.2, 6))
        assert result.flagged == []
        assert result.details["n_noise"] == 0
