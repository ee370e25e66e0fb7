"""Command-line behavior: exit codes, determinism, and byte parity."""
import json

import numpy as np
import pytest

from panel_outliers import (
    COMPARE_LABELS,
    ForestParams,
    HBParams,
    emit_report,
    hb_detect,
    iforest_detect,
)
from panel_outliers.cli import main

from conftest import DATA_DIR, load_ratio_set, rng_for

RICE = str(DATA_DIR / "rice_area.csv")


@pytest.fixture()
def small_csv(tmp_path):
    rng = rng_for(701)
    lines = ["id,y1,y2"]
    for i in range(40):
        y1 = rng.uniform(10, 100)
        lines.append(f"u{i},{y1!r},{y1 * rng.uniform(0.8, 1.25)!r}")
    lines.append("wild,50.0,5000.0")
    lines.append("skip,0,10")
    path = tmp_path / "panel.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def run_to_file(tmp_path, args, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, out


class TestExitCodes:
    def test_detect_returns_zero(self, small_csv, tmp_path):
        code, out = run_to_file(tmp_path, ["detect", "--input", small_csv])
        assert code == 0
        assert json.loads(out.read_bytes())["method"] == "hb"

    def test_missing_input_file_is_data_error(self, tmp_path):
        assert main(["detect", "--input", str(tmp_path / "gone.csv")]) == 3

    def test_negative_value_is_data_error(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text("id,y1,y2\na,-4,2\n")
        assert main(["detect", "--input", str(path)]) == 3

    def test_all_rows_excluded_is_data_error(self, tmp_path):
        path = tmp_path / "zeros.csv"
        path.write_text("id,y1,y2\na,0,2\nb,3,0\n")
        assert main(["detect", "--input", str(path)]) == 3

    def test_no_input_is_config_error(self):
        assert main(["detect"]) == 2

    def test_dbscan_without_delta_is_config_error(self, small_csv):
        assert main(["detect", "--input", small_csv, "--method", "dbscan"]) == 2

    def test_bad_u0_is_config_error(self, small_csv):
        assert main(["detect", "--input", small_csv, "--method", "iforest",
                     "--u0", "1.5", "--seed", "1"]) == 2

    def test_unknown_method_exits_via_argparse(self, small_csv):
        with pytest.raises(SystemExit) as err:
            main(["detect", "--input", small_csv, "--method", "zscore"])
        assert err.value.code == 2

    def test_csv_format_with_all_methods_rejected(self, small_csv):
        assert main(["detect", "--input", small_csv, "--method", "all",
                     "--format", "csv", "--seed", "1"]) == 2

    def test_curve_without_k_or_g_is_config_error(self, small_csv):
        assert main(["curve", "--input", small_csv]) == 2


class TestDeterminism:
    def test_detect_iforest_same_seed_same_bytes(self, small_csv, tmp_path):
        _, a = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                      "--method", "iforest", "--seed", "42",
                                      "--ntrees", "50"], "a.json")
        _, b = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                      "--method", "iforest", "--seed", "42",
                                      "--ntrees", "50"], "b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_compare_same_seed_same_bytes(self, small_csv, tmp_path):
        args = ["compare", "--input", small_csv, "--seed", "7", "--ntrees", "40"]
        _, a = run_to_file(tmp_path, args, "a.json")
        _, b = run_to_file(tmp_path, args, "b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_drawn_seed_is_echoed(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--method", "iforest", "--ntrees", "20"])
        seed = json.loads(out.read_bytes())["params"]["seed"]
        assert isinstance(seed, int) and 0 <= seed < 2 ** 64


class TestLibraryParity:
    def test_hb_bytes_match_library(self, tmp_path):
        code, out = run_to_file(tmp_path, ["detect", "--input", RICE])
        assert code == 0
        expected = emit_report(hb_detect(load_ratio_set("rice_area.csv"),
                                         HBParams()))
        assert out.read_bytes() == expected

    def test_iforest_bytes_match_library(self, tmp_path):
        code, out = run_to_file(tmp_path, ["detect", "--input", RICE,
                                           "--method", "iforest",
                                           "--seed", "11", "--ntrees", "60"])
        assert code == 0
        from panel_outliers import ScoreVector, hb_scores
        ratios = load_ratio_set("rice_area.csv")
        sv = ScoreVector("E", ratios.unit_ids(), hb_scores(ratios, 0.5).E)
        result = iforest_detect(sv, ForestParams(ntrees=60, seed=11), 0.5)
        result.exclusions = ratios.exclusion_ledger()
        assert out.read_bytes() == emit_report(result)


class TestDetect:
    def test_flags_the_planted_wild_unit(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv])
        doc = json.loads(out.read_bytes())
        assert doc["flagged"] == ["wild"]
        assert doc["exclusions"] == [{"unit_id": "skip", "reason": "zero_y1"}]

    def test_csv_output_single_method(self, small_csv, tmp_path):
        code, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                           "--format", "csv"], "out.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "unit_id,E,flagged"
        assert len(lines) == 42  # header + 41 kept units

    def test_all_methods_suite(self, small_csv, tmp_path, capsys):
        code, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                           "--method", "all", "--seed", "3",
                                           "--ntrees", "30"])
        assert code == 0
        doc = json.loads(out.read_bytes())
        assert doc["kind"] == "suite"
        methods = [r["method"] for r in doc["results"]]
        assert methods == ["hb", "sabp", "boxplot", "iforest",
                           "knn-distance", "knn-weight"]
        assert "skipping dbscan" in capsys.readouterr().err

    def test_all_methods_with_delta_includes_dbscan(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--method", "all", "--seed", "3",
                                        "--ntrees", "30", "--delta", "5.0"])
        doc = json.loads(out.read_bytes())
        assert "dbscan" in [r["method"] for r in doc["results"]]

    def test_on_ratios_marked(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--method", "knn-dist", "--on-ratios"])
        doc = json.loads(out.read_bytes())
        assert doc["params"]["on_ratios"] is True
        assert doc["base_score"] == "r"
        assert any("exploratory" in w for w in doc["warnings"])

    def test_plot_dir_files(self, small_csv, tmp_path):
        plot_dir = tmp_path / "plots"
        code, _ = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                         "--plot-dir", str(plot_dir)])
        assert code == 0
        names = sorted(p.name for p in (plot_dir / "hb").iterdir())
        assert names == ["hist_E.csv", "sorted_E.csv"]

    def test_custom_columns(self, tmp_path):
        path = tmp_path / "named.csv"
        path.write_text("unit,before,after\nx,10,12\ny,10,11\nz,10,90\n")
        code, out = run_to_file(tmp_path, ["detect", "--input", str(path),
                                           "--id-col", "unit", "--t1-col",
                                           "before", "--t2-col", "after"])
        assert code == 0
        assert json.loads(out.read_bytes())["unit_ids"] == ["x", "y", "z"]

    def test_stdout_default(self, small_csv, capsysbinary):
        assert main(["detect", "--input", small_csv]) == 0
        doc = json.loads(capsysbinary.readouterr().out)
        assert doc["method"] == "hb"


class TestCompare:
    def test_matrix_labels_and_shape(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["compare", "--input", small_csv,
                                        "--seed", "5", "--ntrees", "40"])
        doc = json.loads(out.read_bytes())
        assert doc["kind"] == "concordance"
        assert tuple(doc["labels"]) == COMPARE_LABELS
        t = np.array(doc["tau"])
        assert t.shape == (8, 8)
        assert np.array_equal(t, t.T)
        assert np.all(np.diag(t) == 1.0)
        assert doc["params"]["seed"] == 5

    def test_csv_matrix(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["compare", "--input", small_csv,
                                        "--seed", "5", "--ntrees", "40",
                                        "--format", "csv"], "m.csv")
        lines = out.read_text().splitlines()
        assert lines[0] == "," + ",".join(COMPARE_LABELS)
        assert len(lines) == 9


class TestCurve:
    def test_csv_with_k(self, small_csv, tmp_path):
        code, out = run_to_file(tmp_path, ["curve", "--input", small_csv,
                                           "--k", "5", "--format", "csv"],
                                "curve.csv")
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "rank,d5nn"
        assert len(lines) == 42
        dists = [float(ln.split(",")[1]) for ln in lines[1:]]
        assert dists == sorted(dists)

    def test_json_with_g(self, small_csv, tmp_path):
        _, out = run_to_file(tmp_path, ["curve", "--input", small_csv, "--g", "6"])
        doc = json.loads(out.read_bytes())
        assert doc["kind"] == "curve" and doc["k"] == 5
        assert len(doc["points"]) == 41


class TestConfigFile:
    def test_values_applied(self, small_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nhb_c = 4.0\npercentile-mode = deciles\n")
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--config", str(cfg)])
        doc = json.loads(out.read_bytes())
        assert doc["params"]["C"] == 4.0
        assert doc["params"]["percentile_mode"] == "deciles"

    def test_explicit_flag_wins(self, small_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("hb_c = 4.0\n")
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--config", str(cfg), "--hb-c", "9.0"])
        assert json.loads(out.read_bytes())["params"]["C"] == 9.0

    def test_boolean_key(self, small_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("on_ratios = true\n")
        _, out = run_to_file(tmp_path, ["detect", "--input", small_csv,
                                        "--method", "knn-dist",
                                        "--config", str(cfg)])
        assert json.loads(out.read_bytes())["params"]["on_ratios"] is True

    def test_malformed_line(self, small_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("just some words\n")
        assert main(["detect", "--input", small_csv, "--config", str(cfg)]) == 2

    def test_nested_config_rejected(self, small_csv, tmp_path):
        inner = tmp_path / "inner.cfg"
        inner.write_text("hb_c = 3.0\n")
        cfg = tmp_path / "outer.cfg"
        cfg.write_text(f"config = {inner}\n")
        assert main(["detect", "--input", small_csv, "--config", str(cfg)]) == 2

    def test_missing_config_file(self, small_csv, tmp_path):
        assert main(["detect", "--input", small_csv,
                     "--config", str(tmp_path / "none.cfg")]) == 2

    def test_unknown_key_exits_via_argparse(self, small_csv, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("warp_factor = 9\n")
        with pytest.raises(SystemExit) as err:
            main(["detect", "--input", small_csv, "--config", str(cfg)])
        assert err.value.code == 2
