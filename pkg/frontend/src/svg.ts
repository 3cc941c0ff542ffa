/**
 * Minimal deterministic SVG line charts: log-scaled axes, one median line
 * per series with an interquartile band behind it, and a legend. No
 * timestamps, ids, or randomness, so identical inputs produce identical
 * bytes and re-rendering is idempotent.
 */

import { Series } from "./aggregate.js";

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  series: Series[];
}

export const PALETTE = [
  "#1f6fb2",
  "#d1495b",
  "#3a9e6e",
  "#8a5fbf",
  "#c78a2d",
  "#4a4a4a",
];

const PANEL_W = 560;
const PANEL_H = 420;
const MARGIN = { left: 72, right: 24, top: 48, bottom: 56 };

const log10 = Math.log10;

function fmtPow10(exp: number): string {
  return `1e${exp}`;
}

function fmtValue(v: number): string {
  const abs = Math.abs(v);
  if (abs !== 0 && (abs >= 1e4 || abs < 1e-3)) {
    return v.toExponential(1).replace("e+", "e");
  }
  return String(Number(v.toPrecision(3)));
}

interface Scale {
  lo: number;
  hi: number;
  log: boolean;
  place(v: number): number;
}

function makeScale(
  values: number[],
  log: boolean,
  pixelLo: number,
  pixelHi: number,
): Scale {
  let usable = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  if (usable.length === 0) usable = log ? [1, 10] : [0, 1];
  let lo = Math.min(...usable);
  let hi = Math.max(...usable);
  if (lo === hi) {
    if (log) {
      lo /= 10;
      hi *= 10;
    } else {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  if (log) {
    const llo = log10(lo);
    const lhi = log10(hi);
    const pad = 0.04 * (lhi - llo);
    const a = llo - pad;
    const b = lhi + pad;
    return {
      lo,
      hi,
      log,
      place: (v) => pixelLo + ((log10(v) - a) / (b - a)) * (pixelHi - pixelLo),
    };
  }
  const pad = 0.04 * (hi - lo);
  const a = lo - pad;
  const b = hi + pad;
  return {
    lo,
    hi,
    log,
    place: (v) => pixelLo + ((v - a) / (b - a)) * (pixelHi - pixelLo),
  };
}

function ticks(scale: Scale): { value: number; label: string }[] {
  if (scale.log) {
    const out = [];
    for (let e = Math.ceil(log10(scale.lo)); e <= Math.floor(log10(scale.hi)); e++) {
      out.push({ value: Math.pow(10, e), label: fmtPow10(e) });
    }
    if (out.length >= 2) return out;
    // narrow range: fall back to the extremes
    return [
      { value: scale.lo, label: fmtValue(scale.lo) },
      { value: scale.hi, label: fmtValue(scale.hi) },
    ];
  }
  const out = [];
  const span = scale.hi - scale.lo;
  const step = Math.pow(10, Math.floor(log10(span / 4)));
  const mult = span / 4 / step >= 5 ? 5 : span / 4 / step >= 2 ? 2 : 1;
  const inc = step * mult;
  for (let v = Math.ceil(scale.lo / inc) * inc; v <= scale.hi + 1e-12; v += inc) {
    out.push({ value: v, label: fmtValue(v) });
  }
  return out;
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

function px(v: number): string {
  return String(Math.round(v * 100) / 100);
}

function panelBody(panel: PanelSpec, xOffset: number, colorOf: Map<string, string>): string {
  const left = xOffset + MARGIN.left;
  const right = xOffset + PANEL_W - MARGIN.right;
  const top = MARGIN.top;
  const bottom = PANEL_H - MARGIN.bottom;

  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of panel.series) {
    for (const p of s.points) {
      xs.push(p.k);
      ys.push(p.median, p.q1, p.q3);
    }
  }
  const xScale = makeScale(xs, true, left, right);
  const yScale = makeScale(ys, panel.logY, bottom, top);

  const parts: string[] = [];
  parts.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${px(right - left)}" ` +
      `height="${px(bottom - top)}" fill="none" stroke="#888" stroke-width="1"/>`,
  );

  for (const t of ticks(xScale)) {
    const x = xScale.place(t.value);
    if (x < left - 0.5 || x > right + 0.5) continue;
    parts.push(
      `<line x1="${px(x)}" y1="${px(top)}" x2="${px(x)}" y2="${px(bottom)}" ` +
        `stroke="#ddd" stroke-width="0.7"/>`,
      `<text x="${px(x)}" y="${px(bottom + 18)}" text-anchor="middle" ` +
        `font-size="12">${esc(t.label)}</text>`,
    );
  }
  for (const t of ticks(yScale)) {
    const y = yScale.place(t.value);
    if (y < top - 0.5 || y > bottom + 0.5) continue;
    parts.push(
      `<line x1="${px(left)}" y1="${px(y)}" x2="${px(right)}" y2="${px(y)}" ` +
        `stroke="#ddd" stroke-width="0.7"/>`,
      `<text x="${px(left - 6)}" y="${px(y + 4)}" text-anchor="end" ` +
        `font-size="12">${esc(t.label)}</text>`,
    );
  }

  const floor = panel.logY ? yScale.lo : -Infinity;
  for (const s of panel.series) {
    const color = colorOf.get(s.method) ?? PALETTE[PALETTE.length - 1];
    const visible = s.points.filter(
      (p) => p.k > 0 && (!panel.logY || p.median > 0),
    );
    if (visible.length === 0) continue;
    const clamp = (v: number) => (panel.logY ? Math.max(v, floor) : v);
    const upper = visible.map(
      (p) => `${px(xScale.place(p.k))},${px(yScale.place(clamp(p.q3)))}`,
    );
    const lower = [...visible]
      .reverse()
      .map((p) => `${px(xScale.place(p.k))},${px(yScale.place(clamp(p.q1)))}`);
    parts.push(
      `<polygon points="${upper.join(" ")} ${lower.join(" ")}" ` +
        `fill="${color}" fill-opacity="0.14" stroke="none"/>`,
    );
    const line = visible.map(
      (p) => `${px(xScale.place(p.k))},${px(yScale.place(p.median))}`,
    );
    parts.push(
      `<polyline points="${line.join(" ")}" fill="none" stroke="${color}" ` +
        `stroke-width="1.8"/>`,
    );
    for (const p of visible) {
      parts.push(
        `<circle cx="${px(xScale.place(p.k))}" cy="${px(yScale.place(p.median))}" ` +
          `r="2.4" fill="${color}"/>`,
      );
    }
  }

  let legendY = top + 16;
  for (const s of panel.series) {
    const color = colorOf.get(s.method) ?? PALETTE[PALETTE.length - 1];
    parts.push(
      `<line x1="${px(right - 150)}" y1="${px(legendY - 4)}" x2="${px(right - 126)}" ` +
        `y2="${px(legendY - 4)}" stroke="${color}" stroke-width="1.8"/>`,
      `<text x="${px(right - 120)}" y="${px(legendY)}" font-size="12">` +
        `${esc(s.method)}</text>`,
    );
    legendY += 16;
  }

  parts.push(
    `<text x="${px(xOffset + PANEL_W / 2)}" y="24" text-anchor="middle" ` +
      `font-size="15" font-weight="bold">${esc(panel.title)}</text>`,
    `<text x="${px(xOffset + PANEL_W / 2)}" y="${px(PANEL_H - 14)}" ` +
      `text-anchor="middle" font-size="13">${esc(panel.xLabel)}</text>`,
    `<text x="${px(xOffset + 16)}" y="${px((top + bottom) / 2)}" font-size="13" ` +
      `transform="rotate(-90 ${px(xOffset + 16)} ${px((top + bottom) / 2)})" ` +
      `text-anchor="middle">${esc(panel.yLabel)}</text>`,
  );
  return parts.join("\n");
}

export function renderFigure(panels: PanelSpec[]): string {
  const width = PANEL_W * panels.length;
  const colorOf = new Map<string, string>();
  for (const panel of panels) {
    for (const s of panel.series) {
      if (!colorOf.has(s.method)) {
        colorOf.set(s.method, PALETTE[colorOf.size % PALETTE.length]);
      }
    }
  }
  const body = panels
    .map((panel, i) => panelBody(panel, i * PANEL_W, colorOf))
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${PANEL_H}" viewBox="0 0 ${width} ${PANEL_H}" ` +
    `font-family="monospace">\n` +
    `<rect width="${width}" height="${PANEL_H}" fill="white"/>\n` +
    `${body}\n</svg>\n`
  );
}
