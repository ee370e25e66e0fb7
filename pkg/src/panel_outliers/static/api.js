/** Typed client for the explorer server's JSON API.
 *
 * The UI computes no statistics of its own: every number on screen comes
 * from these endpoints. POST /run responses are kept as raw text next to
 * the parsed document so displayed values never pass through a
 * serialization round-trip.
 */
import { parsePlotCsv } from "./csv.js";
import { runBody } from "./state.js";
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        const resp = await this.fetchFn(this.baseUrl + path, init);
        const text = await resp.text();
        if (!resp.ok)
            throw new ApiError(resp.status, text.trim() || resp.statusText);
        return text;
    }
    async meta() {
        return JSON.parse(await this.request("/meta"));
    }
    async run(config) {
        const raw = await this.request("/run", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: runBody(config),
        });
        return { raw, report: JSON.parse(raw) };
    }
    async plotIndex() {
        const doc = JSON.parse(await this.request("/plotdata"));
        return doc.series;
    }
    async plotSeries(name) {
        return parsePlotCsv(name, await this.request(`/plotdata/${name}`));
    }
}
/** Serializes /run requests: at most one in flight, matching the server's
 * one-at-a-time queue. While a run is pending, newer submissions coalesce;
 * a superseded submission resolves to null. */
export class RunQueue {
    exec;
    busy = false;
    pending = null;
    constructor(exec) {
        this.exec = exec;
    }
    submit(config) {
        return new Promise((resolve, reject) => {
            if (this.busy) {
                this.pending?.resolve(null); // superseded before it ever ran
                this.pending = { config, resolve, reject };
                return;
            }
            this.launch(config, resolve, reject);
        });
    }
    launch(config, resolve, reject) {
        this.busy = true;
        this.exec(config).then((outcome) => {
            resolve(outcome);
            this.finish();
        }, (err) => {
            reject(err);
            this.finish();
        });
    }
    finish() {
        this.busy = false;
        if (this.pending) {
            const next = this.pending;
            this.pending = null;
            this.launch(next.config, next.resolve, next.reject);
        }
    }
}
