"""Explorer HTTP endpoints: parity with the CLI, error mapping, statics."""
import json
import threading
import urllib.error
import urllib.request
from http.server import HTTPServer

import pytest

from panel_outliers.cli import build_parser, main
from panel_outliers.server import ExplorerHandler, ExplorerState

from conftest import DATA_DIR

RICE = str(DATA_DIR / "rice_area.csv")


@pytest.fixture(scope="module")
def base_url():
    ns = build_parser().parse_args(["explore", "--input", RICE])
    state = ExplorerState(ns, static_dir=None)
    handler = type("BoundHandler", (ExplorerHandler,), {"state": state})
    httpd = HTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}"
    httpd.shutdown()
    thread.join()


def get(url):
    with urllib.request.urlopen(url) as resp:
        return resp.status, resp.read()


def post(url, payload):
    req = urllib.request.Request(
        url, data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"}, method="POST")
    with urllib.request.urlopen(req) as resp:
        return resp.status, resp.read()


def post_error(url, body: bytes):
    req = urllib.request.Request(
        url, data=body, headers={"Content-Type": "application/json"},
        method="POST")
    with pytest.raises(urllib.error.HTTPError) as err:
        urllib.request.urlopen(req)
    return err.value.code, err.value.read()


class TestRun:
    def test_hb_bytes_match_cli(self, base_url, tmp_path):
        out = tmp_path / "cli.json"
        assert main(["detect", "--input", RICE, "--out", str(out)]) == 0
        _, body = post(f"{base_url}/run", {"method": "hb"})
        assert body == out.read_bytes()

    def test_iforest_bytes_match_cli(self, base_url, tmp_path):
        out = tmp_path / "cli.json"
        assert main(["detect", "--input", RICE, "--method", "iforest",
                     "--seed", "11", "--ntrees", "60", "--out", str(out)]) == 0
        _, body = post(f"{base_url}/run",
                       {"method": "iforest", "seed": 11, "ntrees": 60})
        assert body == out.read_bytes()

    def test_override_changes_result(self, base_url):
        _, wide = post(f"{base_url}/run", {"method": "hb"})
        _, narrow = post(f"{base_url}/run", {"method": "hb", "hb_c": 4.0})
        wide_doc, narrow_doc = json.loads(wide), json.loads(narrow)
        assert narrow_doc["params"]["C"] == 4.0
        assert set(wide_doc["flagged"]) <= set(narrow_doc["flagged"])

    def test_integer_spelled_floats_match_cli_bytes(self, base_url, tmp_path):
        out = tmp_path / "cli.json"
        assert main(["detect", "--input", RICE, "--method", "boxplot",
                     "--box-c", "2", "--out", str(out)]) == 0
        _, body = post(f"{base_url}/run", {"method": "boxplot", "box_c": 2})
        assert body == out.read_bytes()

    def test_fractional_int_field_is_400(self, base_url):
        code, body = post_error(
            f"{base_url}/run", json.dumps({"method": "hb", "g": 6.5}).encode())
        assert code == 400
        assert b"bad value" in body

    def test_unknown_field_is_400(self, base_url):
        code, body = post_error(f"{base_url}/run",
                                json.dumps({"method": "hb", "warp": 9}).encode())
        assert code == 400
        assert b"unknown run field" in body

    def test_unknown_method_is_400(self, base_url):
        code, _ = post_error(f"{base_url}/run",
                             json.dumps({"method": "zscore"}).encode())
        assert code == 400

    def test_malformed_json_is_400(self, base_url):
        code, _ = post_error(f"{base_url}/run", b"{not json")
        assert code == 400

    def test_data_error_is_422(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("id,y1,y2\na,1,2\nb,2,3\n")
        ns = build_parser().parse_args(["explore", "--input", str(path)])
        state = ExplorerState(ns, static_dir=None)
        handler = type("H", (ExplorerHandler,), {"state": state})
        httpd = HTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{httpd.server_address[1]}/run"
            code, _ = post_error(url, json.dumps({"method": "sabp"}).encode())
            assert code == 422
        finally:
            httpd.shutdown()
            thread.join()

    def test_post_elsewhere_is_404(self, base_url):
        code, _ = post_error(f"{base_url}/elsewhere", b"{}")
        assert code == 404


class TestMeta:
    def test_fields(self, base_url):
        _, body = get(f"{base_url}/meta")
        meta = json.loads(body)
        assert meta["input"].endswith("rice_area.csv")
        assert meta["m"] == 171
        assert meta["excluded"] == 0
        assert meta["defaults"]["method"] == "hb"
        assert meta["defaults"]["hb_c"] == 7.0


class TestPlotData:
    def test_listing_and_series(self, base_url):
        post(f"{base_url}/run", {"method": "hb"})
        _, body = get(f"{base_url}/plotdata")
        names = json.loads(body)["series"]
        assert names == ["hist_E", "sorted_E"]
        _, csv_body = get(f"{base_url}/plotdata/sorted_E")
        lines = csv_body.decode().splitlines()
        assert lines[0] == "rank,E"
        assert len(lines) == 172

    def test_no_run_yet_is_404(self, tmp_path):
        ns = build_parser().parse_args(["explore", "--input", RICE])
        state = ExplorerState(ns, static_dir=None)
        handler = type("H", (ExplorerHandler,), {"state": state})
        httpd = HTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{httpd.server_address[1]}/plotdata"
            with pytest.raises(urllib.error.HTTPError) as err:
                urllib.request.urlopen(url)
            assert err.value.code == 404
        finally:
            httpd.shutdown()
            thread.join()

    def test_unknown_series_is_404(self, base_url):
        post(f"{base_url}/run", {"method": "hb"})
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(f"{base_url}/plotdata/uncharted")
        assert err.value.code == 404


class TestStatic:
    def test_fallback_page(self, base_url):
        status, body = get(f"{base_url}/")
        assert status == 200
        assert b"<html" in body.lower()

    def test_static_dir_served_and_guarded(self, tmp_path):
        static = tmp_path / "static"
        static.mkdir()
        (static / "index.html").write_text("<html><body>probe</body></html>")
        (tmp_path / "secret.txt").write_text("keep out")
        ns = build_parser().parse_args(
            ["explore", "--input", RICE, "--static-dir", str(static)])
        state = ExplorerState(ns, static_dir=static)
        handler = type("H", (ExplorerHandler,), {"state": state})
        httpd = HTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{httpd.server_address[1]}"
            _, body = get(f"{url}/index.html")
            assert b"probe" in body
            with pytest.raises(urllib.error.HTTPError) as err:
                urllib.request.urlopen(f"{url}/../secret.txt")
            assert err.value.code == 404
        finally:
            httpd.shutdown()
            thread.join()


class TestSideEffects:
    def test_input_file_unchanged_by_runs(self, base_url):
        before = open(RICE, "rb").read()
        post(f"{base_url}/run", {"method": "boxplot"})
        post(f"{base_url}/run", {"method": "knn-dist", "k": 10})
        assert open(RICE, "rb").read() == before
