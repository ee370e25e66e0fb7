"""Command line front end for the detection pipeline.

Subcommands:

- ``detect``: ingest a panel CSV, compute effect scores, run one or all
  detectors on them, write a report (JSON or CSV).
- ``compare``: rank-correlation matrix between the detector scores.
- ``curve``: sorted k-NN distances, the data for choosing a DBSCAN delta.
- ``explore``: serve the interactive explorer UI on localhost.

Exit codes: 0 on success (flagged units are data, not an error), 2 for
configuration problems, 3 for data problems. A ``--config`` file holds
``key=value`` lines with the same names as the long flags; explicit flags
win over file entries. All randomness flows from ``--seed``; when absent
a seed is drawn from system entropy and echoed in the report.
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from .boxplot import box_detect
from .concordance import COMPARE_LABELS, build_matrix
from .dbscan import DbscanParams, dbscan_detect, sorted_knn_curve
from .errors import ConfigError, DataError
from .hb import PERCENTILE_MODES, HBParams, hb_detect, hb_scores
from .iforest import ForestParams, fit_forest, iforest_detect, score
from .ingest import RatioSet, compute_ratios, load_panel
from .knn import knn_detect, knn_distances
from .report import SCHEMA, DetectionResult, ScoreVector, emit_plot_data, emit_report

METHODS = ("hb", "sabp", "boxplot", "iforest", "dbscan", "knn-dist", "knn-weight")
_CONFIG_BOOL_KEYS = frozenset({"on-ratios"})


# --- configuration ---------------------------------------------------------

def parse_config_file(path: str | Path) -> list[str]:
    """Translate key=value lines into an argv fragment.

    The fragment is injected before the explicit flags, so the command
    line wins whenever both specify the same option.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    args: list[str] = []
    for ln, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{ln}: expected key=value, got {raw!r}")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if key == "config":
            raise ConfigError(f"{path}:{ln}: config files cannot nest")
        if key in _CONFIG_BOOL_KEYS:
            if value.lower() in ("1", "true", "yes"):
                args.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no"):
                raise ConfigError(f"{path}:{ln}: {key} takes a boolean, got {value!r}")
        else:
            args.extend([f"--{key}", value])
    return args


def _inject_config(argv: list[str]) -> list[str]:
    """Expand --config FILE into its flags, right after the subcommand."""
    cfg_path = None
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                raise ConfigError("--config needs a file path")
            cfg_path = argv[i + 1]
        elif tok.startswith("--config="):
            cfg_path = tok.split("=", 1)[1]
    if cfg_path is None or not argv or argv[0].startswith("-"):
        return argv
    return argv[:1] + parse_config_file(cfg_path) + argv[1:]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; explicit flags win")
    p.add_argument("--input", help="panel CSV with one row per unit")
    p.add_argument("--id-col", default="id", help="unit id column (default: id)")
    p.add_argument("--t1-col", default="y1", help="first occasion column (default: y1)")
    p.add_argument("--t2-col", default="y2", help="second occasion column (default: y2)")
    p.add_argument("--on-ratios", action="store_true",
                   help="feed detectors the raw ratios instead of effect "
                        "scores (exploratory; reports are marked)")
    p.add_argument("--seed", type=int, help="master RNG seed (default: entropy)")
    p.add_argument("--out", help="report file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--plot-dir", help="also write plot-data CSVs under this directory")
    p.add_argument("--hb-u", type=float, default=0.5, metavar="U",
                   help="magnitude exponent in [0,1] (default: 0.5)")
    p.add_argument("--hb-c", type=float, default=7.0, metavar="C",
                   help="interval width multiplier (default: 7)")
    p.add_argument("--hb-a", type=float, default=0.05, metavar="A",
                   help="interval floor constant (default: 0.05)")
    p.add_argument("--percentile-mode", choices=PERCENTILE_MODES, default="quartiles",
                   help="interval anchors: quartiles or 10th/90th deciles")


def _add_detector_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--box-c", type=float, default=1.5,
                   help="whisker constant for the standard boxplot (default: 1.5)")
    p.add_argument("--q", type=int, help="isolation forest subsample size "
                                         "(default: min(m, 256))")
    p.add_argument("--ntrees", type=int, default=500,
                   help="isolation forest size (default: 500)")
    p.add_argument("--u0", type=float, default=0.5,
                   help="isolation score threshold in (0,1) (default: 0.5)")
    p.add_argument("--delta", type=float,
                   help="DBSCAN radius; choose it from the curve command output")
    p.add_argument("--g", type=int, default=6,
                   help="DBSCAN minimum points, core needs g-1 neighbors (default: 6)")
    p.add_argument("--k", type=int, default=5,
                   help="neighbor count for k-NN scores (default: 5)")
    p.add_argument("--epsilon", type=float,
                   help="gap rule multiplier in (0,1] for the k-NN threshold")
    p.add_argument("--knn-threshold", type=float,
                   help="explicit k-NN score threshold (alternative to --epsilon)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panel-outliers",
        description="Outlier detection for two-occasion panel data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="run detectors and report flagged units")
    _add_common(p)
    _add_detector_params(p)
    p.add_argument("--method", choices=METHODS + ("all",), default="hb",
                   help="detector to run (default: hb)")

    p = sub.add_parser("compare", help="rank-correlation matrix across detectors")
    _add_common(p)
    p.add_argument("--q", type=int, help="isolation forest subsample size "
                                         "(default: min(m, 256))")
    p.add_argument("--ntrees", type=int, default=500,
                   help="isolation forest size (default: 500)")

    p = sub.add_parser("curve", help="sorted k-NN distances for delta selection")
    _add_common(p)
    p.add_argument("--k", type=int, help="neighbor count; hint: ceil(sqrt(m))")
    p.add_argument("--g", type=int, help="DBSCAN minimum points; implies k = g-1")

    p = sub.add_parser("explore", help="serve the interactive explorer")
    _add_common(p)
    _add_detector_params(p)
    p.add_argument("--method", choices=METHODS, default="hb",
                   help="detector preselected in the UI (default: hb)")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--static-dir", help="override the bundled UI assets")
    return parser


# --- shared pipeline -------------------------------------------------------

def load_ratios(ns: argparse.Namespace) -> RatioSet:
    if not ns.input:
        raise ConfigError("an --input CSV is required")
    pairs = load_panel(ns.input, ns.id_col, ns.t1_col, ns.t2_col)
    return compute_ratios(pairs)


def hb_params(ns: argparse.Namespace) -> HBParams:
    return HBParams(U=ns.hb_u, C=ns.hb_c, A=ns.hb_a,
                    percentile_mode=ns.percentile_mode)


def base_vector(ns: argparse.Namespace, ratios: RatioSet) -> ScoreVector:
    """The series detectors consume: effect scores, or ratios if asked."""
    if ns.on_ratios:
        return ScoreVector("r", ratios.unit_ids(), ratios.ratios())
    E = hb_scores(ratios, ns.hb_u).E
    return ScoreVector("E", ratios.unit_ids(), E)


def run_method(method: str, ns: argparse.Namespace, ratios: RatioSet,
               sv: ScoreVector, seed: int) -> DetectionResult:
    """One detector run; the single code path behind detect and explore."""
    if method == "hb":
        result = hb_detect(ratios, hb_params(ns))
    elif method == "sabp":
        result = box_detect(sv, method="adjusted")
    elif method == "boxplot":
        result = box_detect(sv, method="standard", c=ns.box_c)
    elif method == "iforest":
        params = ForestParams(q=ns.q, ntrees=ns.ntrees, seed=seed)
        result = iforest_detect(sv, params, ns.u0)
    elif method == "dbscan":
        if ns.delta is None:
            raise ConfigError(
                "dbscan needs --delta; run the curve command and pick the "
                "distance where the sorted k-NN plot jumps"
            )
        result = dbscan_detect(sv, DbscanParams(delta=ns.delta, g=ns.g))
    elif method in ("knn-dist", "knn-weight"):
        kind = "distance" if method == "knn-dist" else "weight"
        result = knn_detect(sv, ns.k, kind, threshold=ns.knn_threshold,
                            epsilon=ns.epsilon)
    else:
        raise ConfigError(f"unknown method {method!r}")
    result.exclusions = ratios.exclusion_ledger()
    if ns.on_ratios and method != "hb":
        result.params["on_ratios"] = True
        result.warnings.append(
            "scores computed on raw ratios, not effect scores; exploratory only"
        )
    return result


def resolve_seed(ns: argparse.Namespace) -> int:
    return ns.seed if ns.seed is not None else secrets.randbits(64)


def _write_payload(ns: argparse.Namespace, payload: bytes) -> None:
    if ns.out:
        Path(ns.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


# --- subcommands -----------------------------------------------------------

def cmd_detect(ns: argparse.Namespace) -> int:
    ratios = load_ratios(ns)
    sv = base_vector(ns, ratios)
    seed = resolve_seed(ns)
    methods = list(METHODS) if ns.method == "all" else [ns.method]
    results = []
    for method in methods:
        if method == "dbscan" and ns.method == "all" and ns.delta is None:
            print("note: skipping dbscan (no --delta given; run the curve "
                  "command to choose one)", file=sys.stderr)
            continue
        results.append(run_method(method, ns, ratios, sv, seed))

    if len(results) == 1:
        payload = emit_report(results[0], ns.format)
    else:
        if ns.format == "csv":
            raise ConfigError("csv output covers a single method; "
                              "use --format json with --method all")
        suite = {"schema": SCHEMA, "kind": "suite",
                 "results": [r.to_json_dict() for r in results]}
        payload = (json.dumps(suite, indent=2) + "\n").encode("utf-8")
    _write_payload(ns, payload)
    if ns.plot_dir:
        for result in results:
            emit_plot_data(result, Path(ns.plot_dir) / result.method)
    return 0


def compare_matrix(ns: argparse.Namespace, ratios: RatioSet, seed: int):
    """Scores for the standard comparison: |E|, IF, and six k-NN columns."""
    E = hb_scores(ratios, ns.hb_u).E
    forest = fit_forest(E, ForestParams(q=ns.q, ntrees=ns.ntrees, seed=seed))
    u = score(forest, E).u
    knn_cache = {k: knn_distances(E, k) for k in (5, 10, 15)}
    scores = {"|E|": E, "IF": u}
    for k in (5, 10, 15):
        scores[f"{k}-NN-dist"] = knn_cache[k].d_k
    for k in (5, 10, 15):
        scores[f"{k}-NN-weight"] = knn_cache[k].weight
    assert tuple(scores) == COMPARE_LABELS
    matrix = build_matrix(scores, use_abs_for={"|E|"})
    matrix.params = {"U": ns.hb_u, "q": forest.q, "ntrees": ns.ntrees,
                     "seed": seed}
    return matrix


def cmd_compare(ns: argparse.Namespace) -> int:
    ratios = load_ratios(ns)
    seed = resolve_seed(ns)
    matrix = compare_matrix(ns, ratios, seed)
    _write_payload(ns, emit_report(matrix, ns.format))
    return 0


def cmd_curve(ns: argparse.Namespace) -> int:
    ratios = load_ratios(ns)
    sv = base_vector(ns, ratios)
    if ns.k is not None:
        k = ns.k
    elif ns.g is not None:
        k = ns.g - 1
    else:
        raise ConfigError("curve needs --k or --g")
    points = sorted_knn_curve(sv.values, k)
    if ns.format == "json":
        doc = {"schema": SCHEMA, "kind": "curve", "k": k,
               "points": [[r, d] for r, d in points]}
        payload = (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    else:
        lines = [f"rank,d{k}nn"] + [f"{r},{d!r}" for r, d in points]
        payload = ("\n".join(lines) + "\n").encode("utf-8")
    _write_payload(ns, payload)
    return 0


def cmd_explore(ns: argparse.Namespace) -> int:
    from .server import serve

    return serve(ns)


COMMANDS = {"detect": cmd_detect, "compare": cmd_compare,
            "curve": cmd_curve, "explore": cmd_explore}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        argv = _inject_config(argv)
        ns = build_parser().parse_args(argv)
        return COMMANDS[ns.command](ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
