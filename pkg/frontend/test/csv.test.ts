import { describe, expect, it } from "vitest";

import { methodOrder, parseMetricsCsv } from "../src/csv.js";

const HEADER = "method,seed,k,n_k,q_error,wall_time_s";

describe("parseMetricsCsv", () => {
  it("reads rows with typed fields", () => {
    const rows = parseMetricsCsv(
      `${HEADER}\nstructural,0,1000,125,0.25,1.5\nentrywise,1,2000,12,1.5,0.75\n`,
    );
    expect(rows).toHaveLength(2);
    expect(rows[0]).toEqual({
      method: "structural",
      seed: 0,
      k: 1000,
      n_k: 125,
      q_error: 0.25,
      wall_time_s: 1.5,
    });
    expect(rows[1].method).toBe("entrywise");
    expect(rows[1].q_error).toBe(1.5);
  });

  it("accepts any column order and ignores extras", () => {
    const rows = parseMetricsCsv(
      "q_error,method,extra,wall_time_s,n_k,k,seed\n0.5,m,x,0.1,7,100,3\n",
    );
    expect(rows[0]).toEqual({
      method: "m",
      seed: 3,
      k: 100,
      n_k: 7,
      q_error: 0.5,
      wall_time_s: 0.1,
    });
  });

  it("names a missing column", () => {
    const noNk = HEADER.replace(",n_k", "");
    expect(() => parseMetricsCsv(`${noNk}\nm,0,1,0.5,0.1\n`)).toThrow(/n_k/);
  });

  it("names every missing column", () => {
    expect(() => parseMetricsCsv("method,seed\nm,0\n")).toThrow(
      /k, n_k, q_error, wall_time_s/,
    );
  });

  it("rejects non-numeric fields with line and column", () => {
    expect(() =>
      parseMetricsCsv(`${HEADER}\nm,0,1000,oops,0.5,0.1\n`),
    ).toThrow(/line 2.*n_k.*"oops"/);
  });

  it("rejects an empty file", () => {
    expect(() => parseMetricsCsv("")).toThrow(/empty/);
  });

  it("rejects short rows", () => {
    expect(() => parseMetricsCsv(`${HEADER}\nm,0,1000\n`)).toThrow(
      /expected 6 fields, got 3/,
    );
  });
});

describe("methodOrder", () => {
  it("keeps first-appearance order", () => {
    const rows = parseMetricsCsv(
      `${HEADER}\nb,0,1,1,1,1\na,0,1,1,1,1\nb,1,1,1,1,1\n`,
    );
    expect(methodOrder(rows)).toEqual(["b", "a"]);
  });
});
