import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { parseMetricsCsv } from "../src/csv.js";
import {
  defaultOutputs,
  figureSvg,
  loadPlotSpec,
  render,
  renderDefaults,
} from "../src/figures.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");
const HEADER = "method,seed,k,n_k,q_error,wall_time_s";

function gridRows() {
  return parseMetricsCsv(
    fs.readFileSync(path.join(FIXTURES, "gridworld_three_method.csv"), "utf8"),
  );
}

function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "plots-"));
}

function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("figureSvg", () => {
  it("draws a single two-point series for a one-method CSV", () => {
    const rows = parseMetricsCsv(
      `${HEADER}\nonly,0,10,5,0.5,0.1\nonly,0,100,50,0.05,0.2\n`,
    );
    const svg = figureSvg("q_error_vs_k", rows);
    expect(count(svg, "<polyline")).toBe(1);
    expect(count(svg, "<circle")).toBe(2);
    expect(svg).toContain(">only</text>");
  });

  it("draws one series per method on the harness gridworld CSV", () => {
    const rows = gridRows();
    const qFig = figureSvg("q_error_vs_k", rows);
    expect(count(qFig, "<polyline")).toBe(3);
    for (const m of ["structural:more-info", "structural:least-info", "entrywise"]) {
      expect(qFig).toContain(`>${m}</text>`);
    }
    // two panels, each with the three series
    const infoFig = figureSvg("min_info_vs_k", rows);
    expect(count(infoFig, "<polyline")).toBe(6);
    expect(count(infoFig, "minimum information vs samples")).toBe(1);
    expect(count(infoFig, "information per sample")).toBe(1);
  });

  it("is deterministic across calls", () => {
    const rows = gridRows();
    expect(figureSvg("q_error_vs_k", rows)).toBe(figureSvg("q_error_vs_k", rows));
  });

  it("applies the methods filter in the given order", () => {
    const svg = figureSvg("q_error_vs_k", gridRows(), ["entrywise"]);
    expect(count(svg, "<polyline")).toBe(1);
    expect(svg).toContain(">entrywise</text>");
    expect(svg).not.toContain("more-info");
  });

  it("rejects a filter matching nothing, naming both sides", () => {
    expect(() => figureSvg("q_error_vs_k", gridRows(), ["sarsa"])).toThrow(
      /sarsa.*entrywise/s,
    );
  });

  it("keeps a method with no positive values in the legend without a line", () => {
    const rows = parseMetricsCsv(
      `${HEADER}\ndead,0,10,0,0.5,0.1\ndead,0,100,0,0.4,0.1\nlive,0,10,5,0.6,0.1\nlive,0,100,60,0.3,0.1\n`,
    );
    const svg = figureSvg("min_info_vs_k", rows);
    expect(svg).toContain(">dead</text>");
    // only the live method draws in each of the two panels
    expect(count(svg, "<polyline")).toBe(2);
  });
});

describe("plot specs", () => {
  it("loads a spec and resolves paths relative to the spec file", () => {
    const dir = tmpDir();
    fs.writeFileSync(
      path.join(dir, "spec.json"),
      JSON.stringify({
        input: "data.csv",
        kind: "q_error_vs_k",
        output: "out/fig.svg",
        methods: ["only"],
      }),
    );
    const spec = loadPlotSpec(path.join(dir, "spec.json"));
    expect(spec.input).toBe(path.join(dir, "data.csv"));
    expect(spec.output).toBe(path.join(dir, "out", "fig.svg"));
    expect(spec.methods).toEqual(["only"]);
  });

  it("names the offending field", () => {
    const dir = tmpDir();
    const write = (spec: unknown) => {
      const p = path.join(dir, "spec.json");
      fs.writeFileSync(p, JSON.stringify(spec));
      return p;
    };
    expect(() =>
      loadPlotSpec(write({ input: "a.csv", kind: "q_error_vs_k" })),
    ).toThrow(/'output'/);
    expect(() =>
      loadPlotSpec(write({ input: "a.csv", kind: "pie", output: "o.svg" })),
    ).toThrow(/'kind'.*q_error_vs_k, min_info_vs_k/);
    expect(() =>
      loadPlotSpec(
        write({ input: "a.csv", kind: "q_error_vs_k", output: "o.svg", methods: "x" }),
      ),
    ).toThrow(/'methods'/);
    expect(() =>
      loadPlotSpec(
        write({
          input: "a.csv",
          kind: "q_error_vs_k",
          output: "o.svg",
          aggregation: "mean",
        }),
      ),
    ).toThrow(/'aggregation'/);
  });

  it("renders one figure from a spec", () => {
    const dir = tmpDir();
    fs.copyFileSync(
      path.join(FIXTURES, "gridworld_three_method.csv"),
      path.join(dir, "data.csv"),
    );
    fs.writeFileSync(
      path.join(dir, "spec.json"),
      JSON.stringify({
        input: "data.csv",
        kind: "min_info_vs_k",
        output: "fig.svg",
      }),
    );
    const written = render(loadPlotSpec(path.join(dir, "spec.json")));
    expect(written).toBe(path.join(dir, "fig.svg"));
    const svg = fs.readFileSync(written, "utf8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(count(svg, "<polyline")).toBe(6);
  });
});

describe("renderDefaults", () => {
  it("derives deterministic filenames from the CSV stem", () => {
    const outs = defaultOutputs("/data/run7.csv", "/figs");
    expect(outs.q_error_vs_k).toBe("/figs/run7_q_error.svg");
    expect(outs.min_info_vs_k).toBe("/figs/run7_min_info.svg");
    const beside = defaultOutputs("/data/run7.csv");
    expect(beside.q_error_vs_k).toBe("/data/run7_q_error.svg");
  });

  it("writes both figures and re-rendering is byte-identical", () => {
    const dir = tmpDir();
    const csv = path.join(dir, "metrics.csv");
    fs.copyFileSync(path.join(FIXTURES, "gridworld_three_method.csv"), csv);
    const written = renderDefaults(csv);
    expect(written).toEqual([
      path.join(dir, "metrics_q_error.svg"),
      path.join(dir, "metrics_min_info.svg"),
    ]);
    const first = written.map((p) => fs.readFileSync(p, "utf8"));
    const again = renderDefaults(csv);
    expect(again).toEqual(written);
    const second = written.map((p) => fs.readFileSync(p, "utf8"));
    expect(second).toEqual(first);
  });
});
