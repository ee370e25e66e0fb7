import { describe, expect, it } from "vitest";
import { RunOutcome, RunQueue } from "../src/api.js";
import { RunConfig } from "../src/state.js";

interface Deferred {
  config: RunConfig;
  resolve: (outcome: RunOutcome) => void;
  reject: (err: unknown) => void;
}

/** Queue harness whose executor blocks until the test releases it. */
function harness() {
  const calls: Deferred[] = [];
  const queue = new RunQueue(
    (config) =>
      new Promise<RunOutcome>((resolve, reject) => {
        calls.push({ config, resolve, reject });
      }),
  );
  const outcomeFor = (config: RunConfig): RunOutcome => ({
    raw: JSON.stringify(config),
    report: { method: config.method } as RunOutcome["report"],
  });
  return { calls, queue, outcomeFor };
}

describe("RunQueue", () => {
  it("keeps at most one request in flight", async () => {
    const { calls, queue, outcomeFor } = harness();
    const first = queue.submit({ method: "hb" });
    const second = queue.submit({ method: "sabp" });
    expect(calls.length).toBe(1); // second waits for the first

    calls[0]!.resolve(outcomeFor(calls[0]!.config));
    expect((await first)?.report.method).toBe("hb");
    expect(calls.length).toBe(2);
    expect(calls[1]!.config.method).toBe("sabp");

    calls[1]!.resolve(outcomeFor(calls[1]!.config));
    expect((await second)?.report.method).toBe("sabp");
  });

  it("coalesces queued submissions, resolving superseded ones to null", async () => {
    const { calls, queue, outcomeFor } = harness();
    const first = queue.submit({ method: "hb" });
    const second = queue.submit({ method: "sabp" });
    const third = queue.submit({ method: "boxplot" });
    expect(await second).toBeNull(); // displaced before it ever ran

    calls[0]!.resolve(outcomeFor(calls[0]!.config));
    await first;
    calls[1]!.resolve(outcomeFor(calls[1]!.config));
    expect((await third)?.report.method).toBe("boxplot");
    expect(calls.length).toBe(2); // sabp never reached the executor
  });

  it("propagates executor errors to the right submitter", async () => {
    const { calls, queue, outcomeFor } = harness();
    const first = queue.submit({ method: "hb" });
    const second = queue.submit({ method: "sabp" });

    calls[0]!.reject(new Error("boom"));
    await expect(first).rejects.toThrow("boom");
    // The failure does not wedge the queue.
    calls[1]!.resolve(outcomeFor(calls[1]!.config));
    expect((await second)?.report.method).toBe("sabp");
  });

  it("runs immediately again once idle", async () => {
    const { calls, queue, outcomeFor } = harness();
    const first = queue.submit({ method: "hb" });
    calls[0]!.resolve(outcomeFor(calls[0]!.config));
    await first;
    void queue.submit({ method: "iforest" });
    expect(calls.length).toBe(2);
    expect(calls[1]!.config.method).toBe("iforest");
  });
});
