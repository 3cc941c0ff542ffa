#!/usr/bin/env node
/**
 * Command line front end.
 *
 *   render <csv> [--out-dir DIR]   write both default figures for a CSV
 *   plot <specfile>                render one figure from a JSON plot spec
 *
 * Exit codes: 0 success, 1 bad input (message on stderr), 2 usage.
 */

import { pathToFileURL } from "node:url";

import { loadPlotSpec, render, renderDefaults } from "./figures.js";

const USAGE = `usage: greybox-plots <command> [args]

commands:
  render <csv> [--out-dir DIR]  write <stem>_q_error.svg and
                                <stem>_min_info.svg next to the CSV
                                (or into DIR)
  plot <specfile>               render one figure from a JSON spec with
                                fields input, kind, output, methods`;

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === "render") {
    let csv: string | undefined;
    let outDir: string | undefined;
    for (let i = 0; i < rest.length; i++) {
      if (rest[i] === "--out-dir") {
        outDir = rest[++i];
        if (outDir === undefined) {
          console.error("--out-dir needs a value");
          return 2;
        }
      } else if (csv === undefined) {
        csv = rest[i];
      } else {
        console.error(USAGE);
        return 2;
      }
    }
    if (csv === undefined) {
      console.error(USAGE);
      return 2;
    }
    try {
      for (const written of renderDefaults(csv, outDir)) {
        console.log(`wrote ${written}`);
      }
      return 0;
    } catch (err) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
  }
  if (command === "plot") {
    if (rest.length !== 1) {
      console.error(USAGE);
      return 2;
    }
    try {
      console.log(`wrote ${render(loadPlotSpec(rest[0]))}`);
      return 0;
    } catch (err) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
  }
  console.error(USAGE);
  return 2;
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
