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
];
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
];
const FIELD_ORDER = [
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
export function encodeConfigHash(config) {
    const params = new URLSearchParams();
    for (const key of FIELD_ORDER) {
        const value = config[key];
        if (value === undefined || value === null)
            continue;
        if (key === "on_ratios") {
            if (value === true)
                params.set(key, "true");
            continue;
        }
        params.set(key, String(value));
    }
    return params.toString();
}
export function decodeConfigHash(hash) {
    const params = new URLSearchParams(hash.replace(/^#/, ""));
    const method = params.get("method");
    const config = {
        method: METHODS.includes(method ?? "")
            ? method
            : "hb",
    };
    for (const key of NUMERIC_FIELDS) {
        const raw = params.get(key);
        if (raw === null || raw === "")
            continue;
        const value = Number(raw);
        if (Number.isFinite(value))
            config[key] = value;
    }
    const mode = params.get("percentile_mode");
    if (mode === "quartiles" || mode === "deciles") {
        config.percentile_mode = mode;
    }
    if (params.get("on_ratios") === "true")
        config.on_ratios = true;
    return config;
}
/** The exact JSON body a config produces for POST /run. */
export function runBody(config) {
    const payload = {};
    for (const key of FIELD_ORDER) {
        const value = config[key];
        if (value !== undefined && value !== null)
            payload[key] = value;
    }
    return JSON.stringify(payload);
}
