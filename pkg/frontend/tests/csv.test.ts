import { describe, expect, it } from "vitest";
import { numericColumn, parsePlotCsv } from "../src/csv.js";

describe("parsePlotCsv", () => {
  it("splits header and rows on plain csv", () => {
    const series = parsePlotCsv("sorted_E", "rank,E\n1,0.5\n2,1.25\n");
    expect(series.name).toBe("sorted_E");
    expect(series.header).toEqual(["rank", "E"]);
    expect(series.rows).toEqual([
      ["1", "0.5"],
      ["2", "1.25"],
    ]);
  });

  it("handles quoted fields with commas and doubled quotes", () => {
    const series = parsePlotCsv(
      "scatter_E_u",
      'unit_id,E,u\n"farm, ""north""",1.5,0.9\n',
    );
    expect(series.rows).toEqual([['farm, "north"', "1.5", "0.9"]]);
  });

  it("tolerates a missing trailing newline and empty text", () => {
    expect(parsePlotCsv("x", "a,b\n1,2").rows).toEqual([["1", "2"]]);
    expect(parsePlotCsv("x", "").rows).toEqual([]);
  });

  it("round-trips full-precision float reprs exactly", () => {
    // The server writes Python repr(float): shortest string that
    // round-trips. Number() must recover the identical double.
    const values = [0.1, 1 / 3, 3533.830011021577, 2 ** -1074, 1e300];
    const text = "rank,E\n" + values.map((v, i) => `${i + 1},${v}`).join("\n");
    const series = parsePlotCsv("sorted_E", text);
    expect(numericColumn(series, 1)).toEqual(values);
  });
});
