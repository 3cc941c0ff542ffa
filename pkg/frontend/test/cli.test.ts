import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { afterEach, describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

function tmpDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "plots-cli-"));
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("render command", () => {
  it("writes both default figures and reports them", () => {
    const dir = tmpDir();
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    const code = main([
      "render",
      path.join(FIXTURES, "gridworld_three_method.csv"),
      "--out-dir",
      dir,
    ]);
    expect(code).toBe(0);
    const qPath = path.join(dir, "gridworld_three_method_q_error.svg");
    const infoPath = path.join(dir, "gridworld_three_method_min_info.svg");
    expect(fs.existsSync(qPath)).toBe(true);
    expect(fs.existsSync(infoPath)).toBe(true);
    const logged = log.mock.calls.map((c) => c[0]).join("\n");
    expect(logged).toContain(qPath);
    expect(logged).toContain(infoPath);
  });

  it("fails with exit 1 on a missing file", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render", "/nonexistent/metrics.csv"])).toBe(1);
    expect(err).toHaveBeenCalled();
  });

  it("names the missing column on a malformed CSV", () => {
    const dir = tmpDir();
    const bad = path.join(dir, "bad.csv");
    fs.writeFileSync(bad, "method,seed,k,q_error,wall_time_s\nm,0,1,0.5,0.1\n");
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render", bad])).toBe(1);
    const message = err.mock.calls.map((c) => c[0]).join("\n");
    expect(message).toContain("n_k");
  });

  it("needs a csv argument", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render"])).toBe(2);
  });
});

describe("plot command", () => {
  it("renders the spec's single figure", () => {
    const dir = tmpDir();
    fs.copyFileSync(
      path.join(FIXTURES, "toy3seed.csv"),
      path.join(dir, "toy.csv"),
    );
    fs.writeFileSync(
      path.join(dir, "spec.json"),
      JSON.stringify({
        input: "toy.csv",
        kind: "q_error_vs_k",
        output: "toy_fig.svg",
        methods: ["alpha", "beta"],
      }),
    );
    vi.spyOn(console, "log").mockImplementation(() => {});
    expect(main(["plot", path.join(dir, "spec.json")])).toBe(0);
    expect(fs.existsSync(path.join(dir, "toy_fig.svg"))).toBe(true);
  });

  it("fails with exit 1 on an invalid spec", () => {
    const dir = tmpDir();
    fs.writeFileSync(path.join(dir, "spec.json"), JSON.stringify({ kind: "pie" }));
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["plot", path.join(dir, "spec.json")])).toBe(1);
    expect(err).toHaveBeenCalled();
  });
});

describe("usage errors", () => {
  it("rejects unknown commands with exit 2", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["histogram"])).toBe(2);
    expect(main([])).toBe(2);
    expect(err).toHaveBeenCalled();
  });

  it("rejects extra positional arguments", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["render", "a.csv", "b.csv"])).toBe(2);
    expect(main(["plot", "a.json", "b.json"])).toBe(2);
  });
});
