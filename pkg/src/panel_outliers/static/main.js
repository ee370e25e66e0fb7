/** App wiring: controls feed a serialized /run queue; the view renders
 * only from the last accepted (config, result) pair, never from stale
 * data. The active config always lives in location.hash, so a reload
 * reproduces the same view. */
import { ApiClient, RunQueue } from "./api.js";
import { buildControls } from "./controls.js";
import { curveFromSeries, emptyState, histogramFromSeries, renderBoundsOverlay, renderCurve, renderScatter, } from "./plots.js";
import { decodeConfigHash, encodeConfigHash } from "./state.js";
const TABS = ["overlay", "scatter", "curve"];
function intervalOf(report) {
    const rule = report.rule;
    if (rule.kind !== "interval")
        return null;
    if (typeof rule.lower !== "number" || typeof rule.upper !== "number") {
        return null;
    }
    return { lower: rule.lower, upper: rule.upper };
}
export class App {
    doc;
    api;
    config;
    lastOutcome = null;
    scatterSeries = null;
    activeTab = "overlay";
    overlay = null;
    controls;
    queue;
    /** Bumped on every config change or tab switch; async renders bail
     * when their epoch is no longer current, so a late response can never
     * overwrite a newer view. */
    viewEpoch = 0;
    constructor(doc, api) {
        this.doc = doc;
        this.api = api;
        this.config = decodeConfigHash(doc.defaultView?.location.hash ?? "");
        this.queue = new RunQueue((config) => this.api.run(config));
    }
    async start() {
        const controlsRoot = this.doc.getElementById("controls");
        this.controls = buildControls(controlsRoot, this.config, (config) => {
            void this.applyConfig(config);
        });
        for (const tab of TABS) {
            this.doc
                .getElementById(`tab-${tab}`)
                .addEventListener("click", () => void this.selectTab(tab));
        }
        try {
            const meta = await this.api.meta();
            this.doc.getElementById("dataset").textContent =
                `${meta.input} (${meta.m} units, ${meta.excluded} excluded)`;
        }
        catch {
            this.doc.getElementById("dataset").textContent = "dataset unavailable";
        }
        await this.applyConfig(this.config);
    }
    /** Accept a config change: mark the view stale, queue the run, and
     * render only when this config's own result arrives. */
    async applyConfig(config) {
        this.config = config;
        const epoch = ++this.viewEpoch;
        const win = this.doc.defaultView;
        if (win)
            win.location.hash = encodeConfigHash(config);
        this.markStale();
        let outcome;
        try {
            outcome = await this.queue.submit(config);
        }
        catch (err) {
            if (epoch === this.viewEpoch)
                this.showError(err);
            return;
        }
        if (outcome === null)
            return; // coalesced away by a newer change
        this.lastOutcome = outcome;
        await this.cacheScatterSeries(outcome.report);
        if (epoch !== this.viewEpoch)
            return;
        this.renderResult(outcome.report);
        await this.renderActivePlot(epoch);
    }
    /** The scatter series pairs the consumed score with the derived one;
     * it must be read while the server's plot store still belongs to this
     * run, so it is cached here rather than fetched at tab switch. */
    async cacheScatterSeries(report) {
        this.scatterSeries = null;
        const base = report.base_score;
        if (!(base in report.scores))
            return;
        const derived = Object.keys(report.scores).filter((name) => name !== base);
        const pick = derived.find((name) => name !== "label") ?? derived[0];
        if (pick === undefined)
            return;
        try {
            this.scatterSeries = await this.api.plotSeries(`scatter_${base}_${pick}`);
        }
        catch {
            this.scatterSeries = null;
        }
    }
    async selectTab(tab) {
        this.activeTab = tab;
        const epoch = ++this.viewEpoch;
        for (const name of TABS) {
            this.doc
                .getElementById(`tab-${name}`)
                .classList.toggle("active", name === tab);
        }
        await this.renderActivePlot(epoch);
    }
    markStale() {
        const plot = this.doc.getElementById("plot");
        plot.classList.add("stale");
        const flags = this.doc.getElementById("flags");
        flags.replaceChildren();
        const busy = this.doc.createElement("li");
        busy.className = "busy";
        busy.textContent = "updating…";
        flags.appendChild(busy);
        this.doc.getElementById("flag-count").textContent = "…";
    }
    showError(err) {
        const plot = this.doc.getElementById("plot");
        plot.classList.remove("stale");
        plot.replaceChildren(emptyState(`run failed: ${String(err)}`));
        this.overlay = null;
        this.doc.getElementById("flag-count").textContent = "–";
        this.doc.getElementById("flags").replaceChildren();
    }
    /** Flags, warnings, and the params echo, verbatim from the report. */
    renderResult(report) {
        const flags = this.doc.getElementById("flags");
        flags.replaceChildren();
        for (const unit of report.flagged) {
            const item = this.doc.createElement("li");
            item.textContent = unit;
            flags.appendChild(item);
        }
        this.doc.getElementById("flag-count").textContent = String(report.flagged.length);
        this.doc.getElementById("run-method").textContent = report.method;
        this.doc.getElementById("params").textContent = JSON.stringify(report.params);
        const warnings = this.doc.getElementById("warnings");
        warnings.replaceChildren();
        for (const warning of report.warnings) {
            const item = this.doc.createElement("li");
            item.textContent = warning;
            warnings.appendChild(item);
        }
        this.doc.getElementById("plot").classList.remove("stale");
    }
    async renderActivePlot(epoch) {
        const plot = this.doc.getElementById("plot");
        if (!this.lastOutcome) {
            plot.replaceChildren(emptyState("no run yet"));
            return;
        }
        if (this.activeTab === "overlay") {
            await this.renderOverlayTab(plot, epoch);
        }
        else if (this.activeTab === "scatter") {
            this.renderScatterTab(plot);
        }
        else {
            await this.renderCurveTab(plot, epoch);
        }
    }
    /** Histogram of the effect scores with solid interval bounds and
     * dashed adjusted-boxplot fences. Companion runs go through the same
     * serialized queue; when only the interval parameters moved, the
     * cached view swaps just the solid lines. */
    async renderOverlayTab(plot, epoch) {
        const config = this.config;
        const key = `u=${config.hb_u ?? ""}`;
        const hbConfig = { method: "hb" };
        if (config.hb_u !== undefined)
            hbConfig.hb_u = config.hb_u;
        if (config.hb_c !== undefined)
            hbConfig.hb_c = config.hb_c;
        if (config.hb_a !== undefined)
            hbConfig.hb_a = config.hb_a;
        if (config.percentile_mode !== undefined) {
            hbConfig.percentile_mode = config.percentile_mode;
        }
        const cached = this.overlay !== null &&
            this.overlay.key === key &&
            plot.contains(this.overlay.view.root)
            ? this.overlay
            : null;
        // The main run already is the interval run when its method is hb;
        // otherwise ask for one. With a valid cache no plot fetch follows,
        // so the shortcut is always safe there.
        let hbOutcome;
        if (cached && this.lastOutcome?.report.method === "hb") {
            hbOutcome = this.lastOutcome;
        }
        else {
            hbOutcome = await this.queue.submit(hbConfig);
        }
        if (hbOutcome === null || epoch !== this.viewEpoch)
            return;
        const interval = intervalOf(hbOutcome.report);
        const hbData = interval
            ? {
                ...interval,
                degenerate: hbOutcome.report.details["degenerate"] === true,
            }
            : null;
        if (cached) {
            cached.view.updateHb(hbData);
            return;
        }
        // Full build: the histogram is read right after the interval run,
        // while the plot store still belongs to it.
        let bins;
        try {
            bins = histogramFromSeries(await this.api.plotSeries(`hist_${hbOutcome.report.base_score}`));
        }
        catch {
            bins = [];
        }
        if (epoch !== this.viewEpoch)
            return;
        const sabpConfig = { method: "sabp" };
        if (config.hb_u !== undefined)
            sabpConfig.hb_u = config.hb_u;
        const sabpOutcome = await this.queue.submit(sabpConfig);
        if (sabpOutcome === null || epoch !== this.viewEpoch)
            return;
        const sabp = intervalOf(sabpOutcome.report);
        const view = renderBoundsOverlay(plot, { bins, hb: hbData, sabp });
        this.overlay = view === null ? null : { key, sabp, view };
    }
    renderScatterTab(plot) {
        renderScatter(plot, this.scatterSeries, new Set(this.lastOutcome.report.flagged));
    }
    /** Sorted distances to the (g-1)-th neighbor, from a ranking-only
     * companion run on the same series the clustering would consume.
     * Clicking proposes the distance as the radius of a clustering run. */
    async renderCurveTab(plot, epoch) {
        const config = this.config;
        const k = Math.max((config.g ?? 6) - 1, 1);
        const curveConfig = { method: "knn-dist", k };
        if (config.hb_u !== undefined)
            curveConfig.hb_u = config.hb_u;
        if (config.on_ratios)
            curveConfig.on_ratios = true;
        const outcome = await this.queue.submit(curveConfig);
        if (outcome === null || epoch !== this.viewEpoch)
            return;
        let points;
        try {
            points = curveFromSeries(await this.api.plotSeries(`sorted_${outcome.report.ranking_score}`));
        }
        catch {
            points = [];
        }
        if (epoch !== this.viewEpoch)
            return;
        renderCurve(plot, points, (point) => {
            const next = {
                ...this.config,
                method: "dbscan",
                delta: point.dist,
            };
            this.controls.setConfig(next);
            void this.applyConfig(next);
        });
    }
}
if (typeof document !== "undefined" && document.getElementById("controls")) {
    const app = new App(document, new ApiClient(""));
    void app.start();
}
