/**
 * Figure assembly: from a metrics CSV to one of the two figure kinds.
 *
 * q_error_vs_k  : median q error per method over samples, log-log.
 * min_info_vs_k : minimum information count n_k over samples, with a
 *                 companion panel showing the per-sample rate n_k / k.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { aggregate, Series } from "./aggregate.js";
import { methodOrder, MetricsRow, parseMetricsCsv } from "./csv.js";
import { PanelSpec, renderFigure } from "./svg.js";

export const FIGURE_KINDS = ["q_error_vs_k", "min_info_vs_k"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotSpec {
  input: string;
  kind: FigureKind;
  output: string;
  methods?: string[];
}

export function loadPlotSpec(specPath: string): PlotSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(fs.readFileSync(specPath, "utf8"));
  } catch (err) {
    throw new Error(`cannot read plot spec ${specPath}: ${(err as Error).message}`);
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new Error("plot spec must be a JSON object");
  }
  const spec = raw as Record<string, unknown>;
  for (const field of ["input", "kind", "output"]) {
    if (typeof spec[field] !== "string" || spec[field] === "") {
      throw new Error(`plot spec field '${field}' must be a non-empty string`);
    }
  }
  const kind = spec.kind as string;
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new Error(
      `plot spec field 'kind' must be one of ${FIGURE_KINDS.join(", ")}, got '${kind}'`,
    );
  }
  let methods: string[] | undefined;
  if (spec.methods !== undefined) {
    if (
      !Array.isArray(spec.methods) ||
      spec.methods.some((m) => typeof m !== "string")
    ) {
      throw new Error("plot spec field 'methods' must be an array of strings");
    }
    methods = spec.methods as string[];
  }
  if (spec.aggregation !== undefined && spec.aggregation !== "median-iqr") {
    throw new Error(
      "plot spec field 'aggregation' supports only 'median-iqr'",
    );
  }
  // resolve relative data paths against the spec file's own directory
  const base = path.dirname(specPath);
  const resolve = (p: string) => (path.isAbsolute(p) ? p : path.join(base, p));
  return {
    input: resolve(spec.input as string),
    kind: kind as FigureKind,
    output: resolve(spec.output as string),
    methods,
  };
}

function selectMethods(rows: MetricsRow[], filter?: string[]): string[] {
  const present = methodOrder(rows);
  if (filter === undefined) return present;
  const chosen = filter.filter((m) => present.includes(m));
  if (chosen.length === 0) {
    throw new Error(
      `methods filter [${filter.join(", ")}] matches no rows; CSV has [${present.join(", ")}]`,
    );
  }
  return chosen;
}

function buildPanels(
  kind: FigureKind,
  rows: MetricsRow[],
  methods: string[],
): PanelSpec[] {
  if (kind === "q_error_vs_k") {
    const series = aggregate(rows, methods, (r) => r.q_error);
    return [
      {
        title: "q error vs samples",
        xLabel: "samples k",
        yLabel: "sup-norm q error",
        logY: true,
        series,
      },
    ];
  }
  const counts = aggregate(rows, methods, (r) => r.n_k);
  const rates = aggregate(rows, methods, (r) => r.n_k / r.k);
  return [
    {
      title: "minimum information vs samples",
      xLabel: "samples k",
      yLabel: "n_k",
      logY: true,
      series: counts,
    },
    {
      title: "information per sample",
      xLabel: "samples k",
      yLabel: "n_k / k",
      logY: true,
      series: rates,
    },
  ];
}

export function figureSvg(
  kind: FigureKind,
  rows: MetricsRow[],
  filter?: string[],
): string {
  const methods = selectMethods(rows, filter);
  return renderFigure(buildPanels(kind, rows, methods));
}

export function render(spec: PlotSpec): string {
  const rows = parseMetricsCsv(fs.readFileSync(spec.input, "utf8"));
  const svg = figureSvg(spec.kind, rows, spec.methods);
  fs.mkdirSync(path.dirname(spec.output) || ".", { recursive: true });
  fs.writeFileSync(spec.output, svg);
  return spec.output;
}

/** Filenames are fixed by the CSV name, so reruns overwrite in place. */
export function defaultOutputs(csvPath: string, outDir?: string): Record<FigureKind, string> {
  const stem = path.basename(csvPath).replace(/\.csv$/i, "");
  const dir = outDir ?? path.dirname(csvPath);
  return {
    q_error_vs_k: path.join(dir, `${stem}_q_error.svg`),
    min_info_vs_k: path.join(dir, `${stem}_min_info.svg`),
  };
}

export function renderDefaults(csvPath: string, outDir?: string): string[] {
  const rows = parseMetricsCsv(fs.readFileSync(csvPath, "utf8"));
  const outputs = defaultOutputs(csvPath, outDir);
  const written: string[] = [];
  for (const kind of FIGURE_KINDS) {
    const svg = figureSvg(kind, rows);
    fs.mkdirSync(path.dirname(outputs[kind]) || ".", { recursive: true });
    fs.writeFileSync(outputs[kind], svg);
    written.push(outputs[kind]);
  }
  return written;
}
