/**
 * Seed aggregation: median with an interquartile band, per method and
 * checkpoint. Quartiles use linear interpolation between order statistics
 * (the same convention as common spreadsheet QUARTILE functions), so the
 * numbers can be cross-checked by hand in a sheet.
 */

import { MetricsRow } from "./csv.js";

export interface BandPoint {
  k: number;
  median: number;
  q1: number;
  q3: number;
}

export interface Series {
  method: string;
  points: BandPoint[];
}

export function quantile(sorted: number[], p: number): number {
  if (sorted.length === 0) {
    throw new Error("quantile of an empty sample");
  }
  const h = (sorted.length - 1) * p;
  const lo = Math.floor(h);
  const hi = Math.ceil(h);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

/**
 * Collapse rows to one banded series per method, aggregating the given
 * per-row value over seeds at each checkpoint.
 */
export function aggregate(
  rows: MetricsRow[],
  methods: string[],
  value: (row: MetricsRow) => number,
): Series[] {
  const series: Series[] = [];
  for (const method of methods) {
    const byK = new Map<number, number[]>();
    for (const row of rows) {
      if (row.method !== method) continue;
      const bucket = byK.get(row.k);
      if (bucket) bucket.push(value(row));
      else byK.set(row.k, [value(row)]);
    }
    const points: BandPoint[] = [...byK.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([k, values]) => {
        const sorted = [...values].sort((a, b) => a - b);
        return {
          k,
          median: quantile(sorted, 0.5),
          q1: quantile(sorted, 0.25),
          q3: quantile(sorted, 0.75),
        };
      });
    series.push({ method, points });
  }
  return series;
}
