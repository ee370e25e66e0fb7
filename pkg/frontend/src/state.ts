/** Session state: the run configuration fragment and hash round-trips.
 *
 * The view must be reproducible from the URL alone, so every accepted
 * config lands in location.hash and a reload replays the same run.
 */

export const METHODS = [
  "hb",
  "sabp",
  "boxplot",
  "iforest",
  "dbscan",
  "knn-dist",
  "knn-weight",
] as const;

export type Method = (typeof METHODS)[number];

export interface RunConfig {
  method: Method;
  hb_u?: number;
  hb_c?: number;
  hb_a?: number;
  percentile_mode?: "quartiles" | "deciles";
  box_c?: number;
  q?: number;
  ntrees?: number;
  u0?: number;
  delta?: number;
  g?: number;
  k?: number;
  epsilon?: number;
  knn_threshold?: number;
  seed?: number;
  on_ratios?: boolean;
}

export const NUMERIC_FIELDS = [
  "hb_u",
  "hb_c",
  "hb_a",
  "box_c",
  "q",
  "ntrees",
  "u0",
  "delta",
  "g",
  "k",
  "epsilon",
  "knn_threshold",
  "seed",
] as const;

type NumericField = (typeof NUMERIC_FIELDS)[number];

const FIELD_ORDER: (keyof RunConfig)[] = [
  "method",
  "hb_u",
  "hb_c",
  "hb_a",
  "percentile_mode",
  "box_c",
  "q",
  "ntrees",
  "u0",
  "delta",
  "g",
  "k",
  "epsilon",
  "knn_threshold",
  "seed",
  "on_ratios",
];

export function encodeConfigHash(config: RunConfig): string {
  const params = new URLSearchParams();
  for (const key of FIELD_ORDER) {
    const value = config[key];
    if (value === undefined || value === null) continue;
    if (key === "on_ratios") {
      if (value === true) params.set(key, "true");
      continue;
    }
    params.set(key, String(value));
  }
  return params.toString();
}

export function decodeConfigHash(hash: string): RunConfig {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const method = params.get("method");
  const config: RunConfig = {
    method: (METHODS as readonly string[]).includes(method ?? "")
      ? (method as Method)
      : "hb",
  };
  for (const key of NUMERIC_FIELDS) {
    const raw = params.get(key);
    if (raw === null || raw === "") continue;
    const value = Number(raw);
    if (Number.isFinite(value)) config[key as NumericField] = value;
  }
  const mode = params.get("percentile_mode");
  if (mode === "quartiles" || mode === "deciles") {
    config.percentile_mode = mode;
  }
  if (params.get("on_ratios") === "true") config.on_ratios = true;
  return config;
}

/** The exact JSON body a config produces for POST /run. */
export function runBody(config: RunConfig): string {
  const payload: Record<string, unknown> = {};
  for (const key of FIELD_ORDER) {
    const value = config[key];
    if (value !== undefined && value !== null) payload[key] = value;
  }
  return JSON.stringify(payload);
}
