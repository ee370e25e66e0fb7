"""Rebuild the CSV fixtures under tests/data.

Two fixtures come from the ``plm`` R package's bundled datasets (CRAN,
GPL; download the source tarball and point --rda-dir at its data/
directory):

- ``rice_area.csv``: RiceFarms, cultivated area per farm, growing seasons
  4 and 5 of the 6 recorded per farm.
- ``wages.csv``: Wages, weekly wage exp(lwage) per person, 1977 and 1978
  (rows 2 and 3 of the 7 yearly rows per person; no id column ships, so
  ids are positional).

Two are synthetic but mimic the shape of the restricted-access datasets
used in the method literature:

- ``firms_synth.csv``: business-register-like pairs whose effect scores
  skew left, with a handful of gross reporting errors.
- ``shiw_synth.csv``: household-income-like pairs with a symmetric score
  bulk and a ladder of increasingly isolated points, so isolation-score
  thresholds 0.6 and 0.7 split the flag set.

The synthetic generators are seeded; rebuilding produces byte-identical
files. After writing, the script re-reads every CSV and prints the
checks the acceptance tests rely on.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from rda_reader import frame_to_columns, load_rda  # noqa: E402

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from panel_outliers import (  # noqa: E402
    DbscanParams,
    ForestParams,
    HBParams,
    ScoreVector,
    compute_ratios,
    dbscan_cluster,
    fit_forest,
    hb_detect,
    hb_scores,
    kendall_tau,
    knn_distances,
    load_panel,
    medcouple,
    score,
    sorted_knn_curve,
)


def write_csv(path: Path, rows: list[tuple[str, float, float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "y1", "y2"])
        for unit, y1, y2 in rows:
            writer.writerow([unit, repr(float(y1)), repr(float(y2))])
    print(f"wrote {path} ({len(rows)} units)")


# --- public datasets -------------------------------------------------------

def build_rice(rda_dir: Path, out: Path) -> None:
    names, cols = frame_to_columns(load_rda(rda_dir / "RiceFarms.rda")["RiceFarms"])
    data = dict(zip(names, cols))
    ids = data["id"]
    area = np.asarray(data["size"], dtype=float)
    rows = []
    for i in range(len(ids) // 6):
        block = area[i * 6:(i + 1) * 6]
        rows.append((str(ids[i * 6]), block[3], block[4]))
    write_csv(out, rows)


def build_wages(rda_dir: Path, out: Path) -> None:
    names, cols = frame_to_columns(load_rda(rda_dir / "Wages.rda")["Wages"])
    data = dict(zip(names, cols))
    lwage = np.asarray(data["lwage"], dtype=float)
    n = len(lwage) // 7
    rows = []
    for i in range(n):
        block = lwage[i * 7:(i + 1) * 7]
        rows.append((f"P{i + 1:03d}", float(np.exp(block[1])), float(np.exp(block[2]))))
    write_csv(out, rows)


# --- synthetic datasets ----------------------------------------------------

def build_firms(out: Path) -> None:
    rng = np.random.Generator(np.random.Philox(key=714025))
    m = 1200
    y1 = np.exp(rng.normal(8.5, 1.1, m))
    t = rng.normal(0.0, 0.06, m)
    # Declining tail: pushes the effect-score distribution left-skewed.
    dec = rng.random(m) < 0.05
    t[dec] -= rng.gamma(2.0, 0.28, int(dec.sum()))
    # Gross reporting errors, mostly collapses.
    err = rng.choice(m, 12, replace=False)
    t[err[:8]] = np.log(rng.uniform(0.02, 0.12, 8))
    t[err[8:]] = np.log(rng.uniform(8.0, 25.0, 4))
    y2 = y1 * np.exp(t)
    rows = [(f"F{i + 1:04d}", round(a, 2), round(b, 2))
            for i, (a, b) in enumerate(zip(y1, y2))]
    write_csv(out, rows)


def build_shiw(out: Path) -> None:
    rng = np.random.Generator(np.random.Philox(key=889871))
    m = 2000
    y1 = np.exp(rng.normal(10.0, 0.6, m))
    t = rng.normal(0.0, 0.05, m)
    y2 = y1 * np.exp(t)
    # Ladder of increasingly isolated units on both sides of the bulk:
    # the nearer rungs sit between the 0.6 and 0.7 isolation-score
    # thresholds, the farther rungs above both.
    ladder_up = (0.12, 0.16, 0.22, 0.30, 0.55, 0.95)
    ladder_dn = (0.14, 0.20, 0.45)
    for j, c in enumerate(ladder_up):
        y1[j] = 30000.0
        y2[j] = 30000.0 * (1.0 + c)
    for j, c in enumerate(ladder_dn, start=len(ladder_up)):
        y1[j] = 30000.0
        y2[j] = 30000.0 / (1.0 + c)
    rows = [(f"H{i + 1:04d}", round(a, 2), round(b, 2))
            for i, (a, b) in enumerate(zip(y1, y2))]
    write_csv(out, rows)


# --- checks ----------------------------------------------------------------

def effect_vector(path: Path) -> ScoreVector:
    ratios = compute_ratios(load_panel(path, "id", "y1", "y2"))
    E = hb_scores(ratios, 0.5).E
    return ScoreVector("E", ratios.unit_ids(), E)


def check_rice(path: Path) -> None:
    sv = effect_vector(path)
    E = sv.values
    M = medcouple(E)
    absE = np.abs(E)
    k15 = knn_distances(E, 15)
    k5 = knn_distances(E, 5)
    print(f"rice: m={sv.m} medcouple(E)={M:.4f} "
          f"tau(|E|,15NN-weight)={kendall_tau(absE, k15.weight):.4f} "
          f"tau(|E|,5NN-dist)={kendall_tau(absE, k5.d_k):.4f}")
    forest = fit_forest(E, ForestParams(q=sv.m, ntrees=500, seed=1))
    print(f"rice: tau(|E|,IF seed=1)={kendall_tau(absE, score(forest, E).u):.4f}")


def check_wages(path: Path) -> None:
    ratios = compute_ratios(load_panel(path, "id", "y1", "y2"))
    E = hb_scores(ratios, 0.5).E
    absE = np.abs(E)
    M = medcouple(E)
    k5 = knn_distances(E, 5)
    print(f"wages: m={ratios.m} medcouple(E)={M:.4f} "
          f"tau(|E|,5NN-dist)={kendall_tau(absE, k5.d_k):.4f}")
    forest = fit_forest(E, ForestParams(q=ratios.m, ntrees=500, seed=1))
    print(f"wages: tau(|E|,IF seed=1)={kendall_tau(absE, score(forest, E).u):.4f}")


def check_firms(path: Path) -> None:
    ratios = compute_ratios(load_panel(path, "id", "y1", "y2"))
    sv = effect_vector(path)
    E = sv.values
    hb_flags = len(hb_detect(ratios, HBParams()).flagged)
    print(f"firms: m={sv.m} medcouple(E)={medcouple(E):.4f} hb_flags={hb_flags}")
    for g in (6, 11, 16):
        curve = np.array([d for _, d in sorted_knn_curve(E, g - 1)])
        jump = int(np.argmax(np.diff(curve)))
        delta = float(curve[jump])
        noise = int(np.sum(dbscan_cluster(E, DbscanParams(delta=delta, g=g)) == -1))
        print(f"firms: g={g} curve-jump delta={delta:.4f} noise={noise} "
              f"(< hb_flags: {noise < hb_flags})")
    t_w = kendall_tau(knn_distances(E, 5).weight, knn_distances(E, 15).weight)
    t_d = kendall_tau(knn_distances(E, 5).d_k, knn_distances(E, 15).d_k)
    print(f"firms: tau(w5,w15)={t_w:.4f} >= tau(d5,d15)={t_d:.4f}: {t_w >= t_d}")


def check_shiw(path: Path) -> None:
    sv = effect_vector(path)
    E = sv.values
    print(f"shiw: m={sv.m} medcouple(E)={medcouple(E):.4f}")
    for seed in (1, 2, 3, 4, 5):
        forest = fit_forest(E, ForestParams(ntrees=500, seed=seed))
        u = score(forest, E).u
        at6 = set(np.flatnonzero(u > 0.6).tolist())
        at7 = set(np.flatnonzero(u > 0.7).tolist())
        strict = at7 < at6
        print(f"shiw: seed={seed} flags@0.6={len(at6)} flags@0.7={len(at7)} "
              f"strict-subset={strict}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rda-dir", type=Path, default=Path("/tmp/plm/data"),
                    help="directory holding RiceFarms.rda and Wages.rda")
    ap.add_argument("--out-dir", type=Path, default=REPO / "tests" / "data")
    ap.add_argument("--skip-public", action="store_true",
                    help="only rebuild the synthetic fixtures")
    ns = ap.parse_args()
    ns.out_dir.mkdir(parents=True, exist_ok=True)

    if not ns.skip_public:
        build_rice(ns.rda_dir, ns.out_dir / "rice_area.csv")
        build_wages(ns.rda_dir, ns.out_dir / "wages.csv")
    build_firms(ns.out_dir / "firms_synth.csv")
    build_shiw(ns.out_dir / "shiw_synth.csv")

    check_rice(ns.out_dir / "rice_area.csv")
    check_wages(ns.out_dir / "wages.csv")
    check_firms(ns.out_dir / "firms_synth.csv")
    check_shiw(ns.out_dir / "shiw_synth.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
