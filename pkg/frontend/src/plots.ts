/** SVG plot builders. All values are taken verbatim from server series
 * and report rules; nothing is recomputed here. */
import { PlotSeries } from "./csv.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 360;
const PAD = { left: 56, right: 16, top: 16, bottom: 36 };

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (v: number) => number {
  const span = d1 - d0;
  if (span === 0) return () => (r0 + r1) / 2;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function emptyState(message: string): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "empty-state";
  panel.textContent = message;
  return panel;
}

// --- bounds overlay ---------------------------------------------------

export interface HistBin {
  left: number;
  right: number;
  count: number;
}

export function histogramFromSeries(series: PlotSeries): HistBin[] {
  return series.rows.map((row) => ({
    left: Number(row[0]),
    right: Number(row[1]),
    count: Number(row[2]),
  }));
}

export interface BoundPair {
  lower: number;
  upper: number;
}

export interface BoundsOverlayData {
  bins: HistBin[];
  hb: (BoundPair & { degenerate: boolean }) | null;
  sabp: BoundPair | null;
}

function boundLine(
  x: number,
  cls: string,
  dashed: boolean,
  value: number,
): SVGLineElement {
  const line = svgEl("line", {
    x1: x,
    x2: x,
    y1: PAD.top,
    y2: HEIGHT - PAD.bottom,
    class: cls,
    "data-value": value,
    stroke: dashed ? "#b2182b" : "#2166ac",
    "stroke-width": 2,
  });
  if (dashed) line.setAttribute("stroke-dasharray", "6 4");
  return line;
}

function renderHbLayer(
  layer: SVGGElement,
  scaleX: (v: number) => number,
  hb: (BoundPair & { degenerate: boolean }) | null,
): void {
  layer.replaceChildren();
  if (!hb) return;
  // Bounds swapped in later (updateHb) can leave the frozen domain; pin
  // them to the plot edge so they stay visible. data-value keeps the
  // exact number either way.
  const clampX = (v: number) =>
    Math.min(Math.max(scaleX(v), PAD.left), WIDTH - PAD.right);
  if (hb.degenerate) {
    layer.appendChild(boundLine(clampX(hb.lower), "hb-bound", false, hb.lower));
    const badge = svgEl("text", {
      x: clampX(hb.lower) + 6,
      y: PAD.top + 14,
      class: "degenerate-badge",
      fill: "#2166ac",
    });
    badge.textContent = "degenerate interval";
    layer.appendChild(badge);
    return;
  }
  layer.appendChild(boundLine(clampX(hb.lower), "hb-bound", false, hb.lower));
  layer.appendChild(boundLine(clampX(hb.upper), "hb-bound", false, hb.upper));
}

export interface BoundsOverlayView {
  root: SVGSVGElement;
  /** Swap in new interval bounds without touching histogram or fences. */
  updateHb(hb: (BoundPair & { degenerate: boolean }) | null): void;
}

export function renderBoundsOverlay(
  container: HTMLElement,
  data: BoundsOverlayData,
): BoundsOverlayView | null {
  container.replaceChildren();
  if (data.bins.length === 0) {
    container.appendChild(
      emptyState("no histogram series available for this run"),
    );
    return null;
  }

  const values: number[] = [];
  for (const bin of data.bins) values.push(bin.left, bin.right);
  for (const pair of [data.hb, data.sabp]) {
    if (pair) values.push(pair.lower, pair.upper);
  }
  const xMin = Math.min(...values);
  const xMax = Math.max(...values);
  const maxCount = Math.max(...data.bins.map((b) => b.count), 1);
  const scaleX = linearScale(xMin, xMax, PAD.left, WIDTH - PAD.right);
  const scaleY = linearScale(0, maxCount, HEIGHT - PAD.bottom, PAD.top);

  const root = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "plot bounds-overlay",
    role: "img",
  });

  const histLayer = svgEl("g", { class: "hist-layer" });
  for (const bin of data.bins) {
    const x0 = scaleX(bin.left);
    const x1 = scaleX(bin.right);
    const y = scaleY(bin.count);
    histLayer.appendChild(
      svgEl("rect", {
        x: x0,
        y,
        width: Math.max(x1 - x0, 0.5),
        height: HEIGHT - PAD.bottom - y,
        class: "hist-bar",
        fill: "#c6dbef",
        stroke: "#6baed6",
        "data-count": bin.count,
      }),
    );
  }
  root.appendChild(histLayer);

  const sabpLayer = svgEl("g", { class: "sabp-layer" });
  if (data.sabp) {
    sabpLayer.appendChild(
      boundLine(scaleX(data.sabp.lower), "sabp-fence", true, data.sabp.lower),
    );
    sabpLayer.appendChild(
      boundLine(scaleX(data.sabp.upper), "sabp-fence", true, data.sabp.upper),
    );
  }
  root.appendChild(sabpLayer);

  const hbLayer = svgEl("g", { class: "hb-layer" });
  renderHbLayer(hbLayer, scaleX, data.hb);
  root.appendChild(hbLayer);

  root.appendChild(
    svgEl("line", {
      x1: PAD.left,
      x2: WIDTH - PAD.right,
      y1: HEIGHT - PAD.bottom,
      y2: HEIGHT - PAD.bottom,
      class: "axis",
      stroke: "#555",
    }),
  );

  container.appendChild(root);
  return {
    root,
    updateHb: (hb) => renderHbLayer(hbLayer, scaleX, hb),
  };
}

// --- score scatter ----------------------------------------------------

export function renderScatter(
  container: HTMLElement,
  series: PlotSeries | null,
  flagged: ReadonlySet<string>,
): void {
  container.replaceChildren();
  if (!series || series.rows.length === 0) {
    container.appendChild(emptyState("no scatter series available for this run"));
    return;
  }
  const xs = series.rows.map((row) => Number(row[1]));
  const ys = series.rows.map((row) => Number(row[2]));
  const scaleX = linearScale(
    Math.min(...xs),
    Math.max(...xs),
    PAD.left,
    WIDTH - PAD.right,
  );
  const scaleY = linearScale(
    Math.min(...ys),
    Math.max(...ys),
    HEIGHT - PAD.bottom,
    PAD.top,
  );
  const root = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "plot scatter",
    role: "img",
  });
  series.rows.forEach((row, i) => {
    const unit = row[0] ?? "";
    const isFlagged = flagged.has(unit);
    root.appendChild(
      svgEl("circle", {
        cx: scaleX(xs[i]!),
        cy: scaleY(ys[i]!),
        r: isFlagged ? 4 : 2.5,
        class: isFlagged ? "pt flagged" : "pt",
        fill: isFlagged ? "#b2182b" : "#4393c3",
        "fill-opacity": isFlagged ? "0.95" : "0.55",
        "data-unit": unit,
      }),
    );
  });
  const xLabel = svgEl("text", {
    x: WIDTH / 2,
    y: HEIGHT - 8,
    "text-anchor": "middle",
    class: "axis-label",
  });
  xLabel.textContent = series.header[1] ?? "";
  root.appendChild(xLabel);
  const yLabel = svgEl("text", {
    x: 14,
    y: HEIGHT / 2,
    "text-anchor": "middle",
    class: "axis-label",
    transform: `rotate(-90 14 ${HEIGHT / 2})`,
  });
  yLabel.textContent = series.header[2] ?? "";
  root.appendChild(yLabel);
  container.appendChild(root);
}

// --- sorted k-NN curve ------------------------------------------------

export interface CurvePoint {
  rank: number;
  dist: number;
}

export function curveFromSeries(series: PlotSeries): CurvePoint[] {
  return series.rows.map((row) => ({
    rank: Number(row[0]),
    dist: Number(row[1]),
  }));
}

/** Snap a horizontal click fraction (0..1 across the rank axis) to the
 * nearest curve point; its distance is the delta proposal. */
export function pickDeltaOnCurve(
  points: CurvePoint[],
  fracX: number,
): CurvePoint | null {
  if (points.length === 0) return null;
  const clamped = Math.min(Math.max(fracX, 0), 1);
  const index = Math.round(clamped * (points.length - 1));
  return points[index]!;
}

export function renderCurve(
  container: HTMLElement,
  points: CurvePoint[],
  onPick: (point: CurvePoint) => void,
): void {
  container.replaceChildren();
  if (points.length === 0) {
    container.appendChild(emptyState("no sorted-distance series available"));
    return;
  }
  const scaleX = linearScale(
    points[0]!.rank,
    points[points.length - 1]!.rank,
    PAD.left,
    WIDTH - PAD.right,
  );
  const dists = points.map((p) => p.dist);
  const scaleY = linearScale(
    Math.min(...dists),
    Math.max(...dists),
    HEIGHT - PAD.bottom,
    PAD.top,
  );
  const root = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "plot knn-curve",
    role: "img",
  });
  const path = points
    .map((p, i) => `${i === 0 ? "M" : "L"}${scaleX(p.rank)},${scaleY(p.dist)}`)
    .join("");
  root.appendChild(
    svgEl("path", {
      d: path,
      class: "curve",
      fill: "none",
      stroke: "#2166ac",
      "stroke-width": 1.5,
    }),
  );
  root.appendChild(
    svgEl("line", {
      x1: PAD.left,
      x2: WIDTH - PAD.right,
      y1: HEIGHT - PAD.bottom,
      y2: HEIGHT - PAD.bottom,
      class: "axis",
      stroke: "#555",
    }),
  );
  const hint = svgEl("text", {
    x: PAD.left + 4,
    y: PAD.top + 12,
    class: "hint",
    fill: "#666",
  });
  hint.textContent = "click where the curve jumps to propose delta";
  root.appendChild(hint);

  root.addEventListener("click", (event: MouseEvent) => {
    const rect = root.getBoundingClientRect();
    if (rect.width <= 0) return;
    // Map the click to plot coordinates, then to a rank fraction.
    const plotX = ((event.clientX - rect.left) / rect.width) * WIDTH;
    const frac = (plotX - PAD.left) / (WIDTH - PAD.right - PAD.left);
    const point = pickDeltaOnCurve(points, frac);
    if (point) onPick(point);
  });
  container.appendChild(root);
}
