/** Typed client for the explorer server's JSON API.
 *
 * The UI computes no statistics of its own: every number on screen comes
 * from these endpoints. POST /run responses are kept as raw text next to
 * the parsed document so displayed values never pass through a
 * serialization round-trip.
 */
import { PlotSeries, parsePlotCsv } from "./csv.js";
import { RunConfig, runBody } from "./state.js";

export interface FlagRule {
  kind: "interval" | "threshold" | "noise_labels" | "ranking_only";
  score?: string;
  lower?: number;
  upper?: number;
  value?: number;
}

export interface DetectionReport {
  schema: string;
  method: string;
  params: Record<string, unknown>;
  unit_ids: string[];
  scores: Record<string, number[]>;
  flagged: string[];
  rule: FlagRule;
  ranking: string[];
  ranking_score: string;
  ranking_abs: boolean;
  base_score: string;
  warnings: string[];
  details: Record<string, unknown>;
  exclusions: { unit_id: string; reason: string }[];
}

export interface RunOutcome {
  raw: string;
  report: DetectionReport;
}

export interface ServerMeta {
  input: string;
  m: number;
  excluded: number;
  defaults: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const text = await resp.text();
    if (!resp.ok) throw new ApiError(resp.status, text.trim() || resp.statusText);
    return text;
  }

  async meta(): Promise<ServerMeta> {
    return JSON.parse(await this.request("/meta")) as ServerMeta;
  }

  async run(config: RunConfig): Promise<RunOutcome> {
    const raw = await this.request("/run", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: runBody(config),
    });
    return { raw, report: JSON.parse(raw) as DetectionReport };
  }

  async plotIndex(): Promise<string[]> {
    const doc = JSON.parse(await this.request("/plotdata")) as {
      series: string[];
    };
    return doc.series;
  }

  async plotSeries(name: string): Promise<PlotSeries> {
    return parsePlotCsv(name, await this.request(`/plotdata/${name}`));
  }
}

/** Serializes /run requests: at most one in flight, matching the server's
 * one-at-a-time queue. While a run is pending, newer submissions coalesce;
 * a superseded submission resolves to null. */
export class RunQueue {
  private busy = false;
  private pending: {
    config: RunConfig;
    resolve: (outcome: RunOutcome | null) => void;
    reject: (err: unknown) => void;
  } | null = null;

  constructor(private readonly exec: (config: RunConfig) => Promise<RunOutcome>) {}

  submit(config: RunConfig): Promise<RunOutcome | null> {
    return new Promise((resolve, reject) => {
      if (this.busy) {
        this.pending?.resolve(null); // superseded before it ever ran
        this.pending = { config, resolve, reject };
        return;
      }
      this.launch(config, resolve, reject);
    });
  }

  private launch(
    config: RunConfig,
    resolve: (outcome: RunOutcome | null) => void,
    reject: (err: unknown) => void,
  ): void {
    this.busy = true;
    this.exec(config).then(
      (outcome) => {
        resolve(outcome);
        this.finish();
      },
      (err) => {
        reject(err);
        this.finish();
      },
    );
  }

  private finish(): void {
    this.busy = false;
    if (this.pending) {
      const next = this.pending;
      this.pending = null;
      this.launch(next.config, next.resolve, next.reject);
    }
  }
}
