/**
 * Reader for the harness metrics CSV.
 *
 * Schema: method,seed,k,n_k,q_error,wall_time_s with one row per
 * (method, seed, checkpoint). Column order in the file does not matter;
 * extra columns are ignored.
 */

export interface MetricsRow {
  method: string;
  seed: number;
  k: number;
  n_k: number;
  q_error: number;
  wall_time_s: number;
}

export const REQUIRED_COLUMNS = [
  "method",
  "seed",
  "k",
  "n_k",
  "q_error",
  "wall_time_s",
] as const;

function splitLine(line: string): string[] {
  return line.split(",").map((f) => f.trim());
}

function parseNumber(raw: string, column: string, lineNo: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new Error(
      `line ${lineNo}: column ${column} has non-numeric value ${JSON.stringify(raw)}`,
    );
  }
  return value;
}

export function parseMetricsCsv(text: string): MetricsRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim() !== "");
  if (lines.length === 0) {
    throw new Error("CSV is empty");
  }
  const header = splitLine(lines[0]);
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`CSV lacks column(s) ${missing.join(", ")}`);
  }
  const at: Record<string, number> = {};
  for (const column of REQUIRED_COLUMNS) {
    at[column] = header.indexOf(column);
  }

  const rows: MetricsRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = splitLine(lines[i]);
    if (fields.length < header.length) {
      throw new Error(
        `line ${i + 1}: expected ${header.length} fields, got ${fields.length}`,
      );
    }
    rows.push({
      method: fields[at.method],
      seed: parseNumber(fields[at.seed], "seed", i + 1),
      k: parseNumber(fields[at.k], "k", i + 1),
      n_k: parseNumber(fields[at.n_k], "n_k", i + 1),
      q_error: parseNumber(fields[at.q_error], "q_error", i + 1),
      wall_time_s: parseNumber(fields[at.wall_time_s], "wall_time_s", i + 1),
    });
  }
  return rows;
}

/** Methods in first-appearance order, which fixes series colors. */
export function methodOrder(rows: MetricsRow[]): string[] {
  const seen: string[] = [];
  for (const row of rows) {
    if (!seen.includes(row.method)) seen.push(row.method);
  }
  return seen;
}
