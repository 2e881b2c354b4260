/**
 * Minimal deterministic SVG plotting primitives.  No timestamps, no random
 * ids, fixed number formatting — the same inputs always produce the same
 * bytes.
 */

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

// fixed-precision pixel coordinates keep the output byte-stable
export function px(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(0).replace("e+", "e");
  }
  // strip trailing zeros without locale surprises
  return String(Number(v.toPrecision(6)));
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10;
}

// scales map the data domain onto [0, 1]; renderPanel applies the geometry
export function linearScale(d0: number, d1: number, tickCount = 6): Scale {
  const span = d1 - d0 || 1;
  const f = (v: number) => (v - d0) / span;
  f.ticks = () => {
    const step = niceStep(Math.abs(span), tickCount);
    const out: number[] = [];
    const start = Math.ceil(Math.min(d0, d1) / step) * step;
    for (let v = start; v <= Math.max(d0, d1) + 1e-9 * step; v += step) {
      out.push(Number(v.toPrecision(12)));
    }
    return out;
  };
  return f;
}

export function logScale(d0: number, d1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale needs positive domain endpoints");
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const f = (v: number) => (Math.log10(v) - l0) / span;
  f.ticks = () => {
    const out: number[] = [];
    const lo = Math.ceil(Math.min(l0, l1) - 1e-9);
    const hi = Math.floor(Math.max(l0, l1) + 1e-9);
    const stride = Math.max(1, Math.ceil((hi - lo) / 8));
    for (let e = lo; e <= hi; e += stride) out.push(Math.pow(10, e));
    return out;
  };
  return f;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Curve {
  xs: number[];
  ys: number[];
  color: string;
  dash?: string;
  label?: string;
}

export interface PanelOptions {
  x0: number;
  y0: number;
  width: number;
  height: number;
  xScale: Scale;
  yScale: Scale;
  xLabel: string;
  yLabel: string;
  title?: string;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderPanel(opts: PanelOptions, curves: Curve[]): string {
  const { x0, y0, width, height, xScale, yScale } = opts;
  const left = x0 + 54;
  const right = x0 + width - 12;
  const top = y0 + (opts.title ? 26 : 12);
  const bottom = y0 + height - 40;
  const sx = (v: number) => left + (xScale(v) * (right - left));
  const sy = (v: number) => bottom - (yScale(v) * (bottom - top));

  const parts: string[] = [];
  if (opts.title) {
    parts.push(
      `<text x="${px((left + right) / 2)}" y="${px(y0 + 16)}" text-anchor="middle" class="title">${esc(opts.title)}</text>`
    );
  }
  parts.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${px(right - left)}" height="${px(bottom - top)}" class="frame"/>`
  );

  for (const tv of xScale.ticks()) {
    const X = sx(tv);
    if (X < left - 0.5 || X > right + 0.5) continue;
    parts.push(`<line x1="${px(X)}" y1="${px(bottom)}" x2="${px(X)}" y2="${px(bottom + 5)}" class="tick"/>`);
    parts.push(`<text x="${px(X)}" y="${px(bottom + 17)}" text-anchor="middle" class="lbl">${esc(fmtTick(tv))}</text>`);
  }
  for (const tv of yScale.ticks()) {
    const Y = sy(tv);
    if (Y < top - 0.5 || Y > bottom + 0.5) continue;
    parts.push(`<line x1="${px(left - 5)}" y1="${px(Y)}" x2="${px(left)}" y2="${px(Y)}" class="tick"/>`);
    parts.push(`<text x="${px(left - 8)}" y="${px(Y + 3.5)}" text-anchor="end" class="lbl">${esc(fmtTick(tv))}</text>`);
  }
  parts.push(
    `<text x="${px((left + right) / 2)}" y="${px(bottom + 32)}" text-anchor="middle" class="axis">${esc(opts.xLabel)}</text>`
  );
  parts.push(
    `<text x="${px(x0 + 12)}" y="${px((top + bottom) / 2)}" text-anchor="middle" class="axis" transform="rotate(-90 ${px(x0 + 12)} ${px((top + bottom) / 2)})">${esc(opts.yLabel)}</text>`
  );

  for (const c of curves) {
    const pts: string[] = [];
    for (let i = 0; i < c.xs.length; i++) {
      pts.push(`${px(sx(c.xs[i]))},${px(sy(c.ys[i]))}`);
    }
    const dash = c.dash ? ` stroke-dasharray="${c.dash}"` : "";
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${c.color}"${dash} stroke-width="1.3"/>`
    );
  }

  // legend in the upper-right corner of the frame
  const labelled = curves.filter((c) => c.label !== undefined);
  labelled.forEach((c, i) => {
    const Y = top + 14 + 16 * i;
    const dash = c.dash ? ` stroke-dasharray="${c.dash}"` : "";
    parts.push(`<line x1="${px(right - 96)}" y1="${px(Y - 4)}" x2="${px(right - 72)}" y2="${px(Y - 4)}" stroke="${c.color}"${dash} stroke-width="1.3"/>`);
    parts.push(`<text x="${px(right - 66)}" y="${px(Y)}" class="lbl">${esc(c.label!)}</text>`);
  });

  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<style>`,
    `text { font-family: Helvetica, Arial, sans-serif; fill: #222; }`,
    `.title { font-size: 13px; font-weight: bold; }`,
    `.axis { font-size: 12px; }`,
    `.lbl { font-size: 10px; }`,
    `.frame { fill: none; stroke: #222; stroke-width: 1; }`,
    `.tick { stroke: #222; stroke-width: 1; }`,
    `</style>`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}
