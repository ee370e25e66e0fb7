"""Local HTTP server behind the ``explore`` subcommand.

Serves the bundled single-page UI plus a small JSON API:

- ``POST /run`` with a config fragment (same field names as the CLI
  flags) runs one detector on the loaded dataset and returns the
  DetectionResult document;
- ``GET /plotdata`` lists the plot series of the last run;
- ``GET /plotdata/<series>`` returns one series as CSV;
- ``GET /meta`` describes the dataset and the current defaults.

The stdlib HTTP server handles one request at a time, which is exactly
the serialized-analysis contract the UI expects: a new /run cannot
overtake a pending one. The server never writes to the input file.
"""
from __future__ import annotations

import argparse
import io
import json
import signal
import sys
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

from .cli import base_vector, load_ratios, resolve_seed, run_method
from .errors import ConfigError, DataError, PanelOutliersError
from .report import plot_series

# Fields a /run request may override; everything else in the namespace
# (input path, column names) is pinned at server start.
RUN_FIELDS = ("method", "hb_u", "hb_c", "hb_a", "percentile_mode", "box_c",
              "q", "ntrees", "u0", "delta", "g", "k", "epsilon",
              "knn_threshold", "seed", "on_ratios")

# JSON does not distinguish 7 from 7.0, so overrides are coerced to the
# same types the CLI flags parse to; otherwise the params echo (and the
# report bytes) would depend on how the client spelled a number.
_FLOAT_FIELDS = frozenset(
    ("hb_u", "hb_c", "hb_a", "box_c", "u0", "delta", "epsilon",
     "knn_threshold"))
_INT_FIELDS = frozenset(("q", "ntrees", "g", "k", "seed"))


def _coerce_override(key: str, value):
    if value is None:
        return None
    try:
        if key in _FLOAT_FIELDS:
            return float(value)
        if key in _INT_FIELDS:
            as_int = int(value)
            if as_int != value:
                raise ValueError
            return as_int
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    return value

_FALLBACK_PAGE = b"""<!DOCTYPE html>
<html><head><title>panel-outliers</title></head>
<body><h1>panel-outliers explorer</h1>
<p>UI assets are not bundled in this install. The JSON API is live:
POST /run, GET /plotdata/&lt;series&gt;, GET /meta.</p>
</body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".json": "application/json",
}


class ExplorerState:
    """Dataset plus the last result, shared by all requests."""

    def __init__(self, ns: argparse.Namespace, static_dir: Path | None):
        self.ns = ns
        self.static_dir = static_dir
        self.ratios = load_ratios(ns)
        self.last_result = None

    def run(self, overrides: dict) -> dict:
        ns = argparse.Namespace(**vars(self.ns))
        for key, value in overrides.items():
            if key not in RUN_FIELDS:
                raise ConfigError(f"unknown run field {key!r}")
            setattr(ns, key, _coerce_override(key, value))
        method = ns.method
        if method not in ("hb", "sabp", "boxplot", "iforest", "dbscan",
                          "knn-dist", "knn-weight"):
            raise ConfigError(f"unknown method {method!r}")
        sv = base_vector(ns, self.ratios)
        result = run_method(method, ns, self.ratios, sv, resolve_seed(ns))
        self.last_result = result
        return result.to_json_dict()

    def meta(self) -> dict:
        ns = self.ns
        return {
            "input": ns.input,
            "m": self.ratios.m,
            "excluded": len(self.ratios.exclusions),
            "defaults": {key: getattr(ns, key, None) for key in RUN_FIELDS},
        }


class ExplorerHandler(BaseHTTPRequestHandler):
    state: ExplorerState  # assigned by serve()

    # Quiet request logging; errors still reach stderr via log_error.
    def log_message(self, fmt, *args):
        pass

    def _send(self, code: int, body: bytes, content_type: str) -> None:
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, code: int, doc: dict) -> None:
        self._send(code, (json.dumps(doc, indent=2) + "\n").encode("utf-8"),
                   "application/json")

    def _serve_static(self, rel: str) -> None:
        root = self.state.static_dir
        if root is None:
            if rel == "index.html":
                self._send(200, _FALLBACK_PAGE, _CONTENT_TYPES[".html"])
            else:
                self._send_json(404, {"error": f"no such asset {rel!r}"})
            return
        path = (root / rel).resolve()
        if root.resolve() not in path.parents and path != root.resolve():
            self._send_json(404, {"error": "bad path"})
            return
        if not path.is_file():
            self._send_json(404, {"error": f"no such asset {rel!r}"})
            return
        ctype = _CONTENT_TYPES.get(path.suffix, "application/octet-stream")
        self._send(200, path.read_bytes(), ctype)

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path in ("/", "/index.html"):
            self._serve_static("index.html")
        elif path == "/meta":
            self._send_json(200, self.state.meta())
        elif path == "/plotdata":
            if self.state.last_result is None:
                self._send_json(404, {"error": "no run yet"})
                return
            names = sorted(plot_series(self.state.last_result))
            self._send_json(200, {"series": names})
        elif path.startswith("/plotdata/"):
            self._serve_plotdata(path[len("/plotdata/"):])
        else:
            self._serve_static(path.lstrip("/"))

    def _serve_plotdata(self, name: str) -> None:
        if self.state.last_result is None:
            self._send_json(404, {"error": "no run yet"})
            return
        series = plot_series(self.state.last_result)
        if name not in series:
            self._send_json(404, {"error": f"no series {name!r}"})
            return
        header, rows = series[name]
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(str(cell) for cell in row) + "\n")
        self._send(200, buf.getvalue().encode("utf-8"), "text/csv; charset=utf-8")

    def do_POST(self):
        path = self.path.split("?", 1)[0]
        if path != "/run":
            self._send_json(404, {"error": f"no such endpoint {path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length) if length else b"{}"
            overrides = json.loads(body.decode("utf-8")) if body.strip() else {}
            if not isinstance(overrides, dict):
                raise ConfigError("run body must be a JSON object")
            doc = self.state.run(overrides)
        except (json.JSONDecodeError, ConfigError) as exc:
            self._send_json(400, {"error": str(exc)})
            return
        except DataError as exc:
            self._send_json(422, {"error": str(exc)})
            return
        except PanelOutliersError as exc:
            self._send_json(500, {"error": str(exc)})
            return
        self._send_json(200, doc)


def default_static_dir() -> Path | None:
    bundled = Path(__file__).parent / "static"
    return bundled if (bundled / "index.html").is_file() else None


def serve(ns: argparse.Namespace) -> int:
    if ns.static_dir:
        static_dir = Path(ns.static_dir)
        if not (static_dir / "index.html").is_file():
            raise ConfigError(f"no index.html under {static_dir}")
    else:
        static_dir = default_static_dir()

    state = ExplorerState(ns, static_dir)
    handler = type("BoundHandler", (ExplorerHandler,), {"state": state})
    try:
        server = HTTPServer((ns.bind, ns.port), handler)
    except OSError as exc:
        print(f"error: cannot bind {ns.bind}:{ns.port}: {exc}", file=sys.stderr)
        return 2

    def _terminate(signum, frame):
        raise SystemExit(0)

    signal.signal(signal.SIGTERM, _terminate)
    # Report the bound address, not the requested one: --port 0 asks the
    # OS for an ephemeral port and callers need to learn which.
    host, port = server.server_address[0], server.server_address[1]
    print(f"explorer listening on http://{host}:{port}/ "
          f"({state.ratios.m} units loaded)", file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    except (KeyboardInterrupt, SystemExit):
        pass
    finally:
        server.server_close()
    return 0
