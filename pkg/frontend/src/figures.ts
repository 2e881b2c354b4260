/**
 * The four figure kinds:
 *
 *   profiles        — density (solid) and concentration (dashed) vs x,
 *                     one color per input snapshot
 *   residual_loglog — residual-vs-time curves on log-log axes; zero or
 *                     non-finite residuals are dropped with a warning
 *   log_momentum    — log10|rho*u| vs x from snapshots; exact zeros are
 *                     dropped with a warning
 *   panel_grid      — one profile panel per snapshot, laid out in a grid
 */

import { Snapshot, Series, parseSnapshot, parseSeries } from "./csv.js";
import { FigureSpec, SeriesRef } from "./figspec.js";
import {
  Curve,
  PALETTE,
  Scale,
  linearScale,
  logScale,
  renderPanel,
  svgDocument,
} from "./svg.js";

export type Warn = (message: string) => void;

export interface LoadedInput {
  label: string;
  snapshot?: Snapshot;
  series?: Series;
}

export type ReadFile = (path: string) => string;

const WIDTH = 640;
const HEIGHT = 420;

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    hi = lo + 1;
  }
  return [lo, hi];
}

function padded(lo: number, hi: number): [number, number] {
  const pad = 0.05 * (hi - lo);
  return [lo - pad, hi + pad];
}

function axisOverride(
  spec: FigureSpec,
  axis: "x" | "y",
  fallback: [number, number]
): [number, number] {
  const lo = axis === "x" ? spec.xmin : spec.ymin;
  const hi = axis === "x" ? spec.xmax : spec.ymax;
  return [lo ?? fallback[0], hi ?? fallback[1]];
}

function loadSnapshots(refs: SeriesRef[], readFile: ReadFile): LoadedInput[] {
  return refs.map((r) => ({ label: r.label, snapshot: parseSnapshot(readFile(r.path), r.path) }));
}

function renderProfilePanel(
  inputs: LoadedInput[],
  spec: FigureSpec,
  x0: number,
  y0: number,
  w: number,
  h: number,
  title: string | undefined,
  withLegend: boolean
): string {
  const allX = inputs.flatMap((s) => s.snapshot!.x);
  const allY = inputs.flatMap((s) => [...s.snapshot!.rho, ...s.snapshot!.phi]);
  const [xlo, xhi] = axisOverride(spec, "x", extent(allX));
  const [ylo, yhi] = axisOverride(spec, "y", padded(...extent(allY)));

  const curves: Curve[] = [];
  inputs.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    curves.push({
      xs: s.snapshot!.x,
      ys: s.snapshot!.rho,
      color,
      label: withLegend ? `${s.label} rho` : undefined,
    });
    curves.push({
      xs: s.snapshot!.x,
      ys: s.snapshot!.phi,
      color,
      dash: "5 3",
      label: withLegend ? `${s.label} phi` : undefined,
    });
  });

  return renderPanel(
    {
      x0,
      y0,
      width: w,
      height: h,
      xScale: linearScale(xlo, xhi),
      yScale: linearScale(ylo, yhi),
      xLabel: "x",
      yLabel: "rho, phi",
      title,
    },
    curves
  );
}

export function renderProfiles(spec: FigureSpec, readFile: ReadFile): string {
  const inputs = loadSnapshots(spec.series, readFile);
  const body = renderProfilePanel(
    inputs, spec, 0, 0, WIDTH, HEIGHT, spec.title ?? "profiles", true
  );
  return svgDocument(WIDTH, HEIGHT, body);
}

export function renderResidualLoglog(
  spec: FigureSpec,
  readFile: ReadFile,
  warn: Warn
): string {
  const curves: Curve[] = [];
  const allT: number[] = [];
  const allR: number[] = [];

  spec.series.forEach((ref, i) => {
    const series = parseSeries(readFile(ref.path), ref.path);
    const ts: number[] = [];
    const rs: number[] = [];
    let dropped = 0;
    for (let j = 0; j < series.t.length; j++) {
      const t = series.t[j];
      const r = series.residual[j];
      if (t <= 0 || r <= 0 || !Number.isFinite(r)) {
        dropped++;
        continue;
      }
      ts.push(t);
      rs.push(r);
    }
    if (dropped > 0) {
      warn(
        `${ref.path}: dropped ${dropped} residual sample(s) with zero, ` +
          `negative or non-finite values before the log transform`
      );
    }
    if (ts.length === 0) {
      throw new Error(`${ref.path}: no positive residual samples to plot`);
    }
    allT.push(...ts);
    allR.push(...rs);
    curves.push({ xs: ts, ys: rs, color: PALETTE[i % PALETTE.length], label: ref.label });
  });

  const [tlo, thi] = axisOverride(spec, "x", extent(allT));
  const [rlo, rhi] = axisOverride(spec, "y", extent(allR));
  const body = renderPanel(
    {
      x0: 0,
      y0: 0,
      width: WIDTH,
      height: HEIGHT,
      xScale: logScale(tlo, thi),
      yScale: logScale(rlo, rhi),
      xLabel: "t",
      yLabel: "residual",
      title: spec.title ?? "density residuals",
    },
    curves
  );
  return svgDocument(WIDTH, HEIGHT, body);
}

export function renderLogMomentum(
  spec: FigureSpec,
  readFile: ReadFile,
  warn: Warn
): string {
  const inputs = loadSnapshots(spec.series, readFile);
  const curves: Curve[] = [];
  const allX: number[] = [];
  const allY: number[] = [];

  inputs.forEach((s, i) => {
    const snap = s.snapshot!;
    const xs: number[] = [];
    const ys: number[] = [];
    let dropped = 0;
    for (let j = 0; j < snap.x.length; j++) {
      const mom = Math.abs(snap.rho[j] * snap.u[j]);
      if (mom === 0 || !Number.isFinite(mom)) {
        dropped++;
        continue;
      }
      xs.push(snap.x[j]);
      ys.push(Math.log10(mom));
    }
    if (dropped > 0) {
      warn(`${spec.series[i].path}: dropped ${dropped} cell(s) with zero momentum before the log transform`);
    }
    if (xs.length === 0) {
      throw new Error(`${spec.series[i].path}: momentum is identically zero; nothing to plot`);
    }
    allX.push(...xs);
    allY.push(...ys);
    curves.push({ xs, ys, color: PALETTE[i % PALETTE.length], label: s.label });
  });

  const [xlo, xhi] = axisOverride(spec, "x", extent(allX));
  const [ylo, yhi] = axisOverride(spec, "y", padded(...extent(allY)));
  const body = renderPanel(
    {
      x0: 0,
      y0: 0,
      width: WIDTH,
      height: HEIGHT,
      xScale: linearScale(xlo, xhi),
      yScale: linearScale(ylo, yhi),
      xLabel: "x",
      yLabel: "log10 |rho u|",
      title: spec.title ?? "momentum (log scale)",
    },
    curves
  );
  return svgDocument(WIDTH, HEIGHT, body);
}

export function renderPanelGrid(spec: FigureSpec, readFile: ReadFile): string {
  const inputs = loadSnapshots(spec.series, readFile);
  const cols = Math.ceil(Math.sqrt(inputs.length));
  const rows = Math.ceil(inputs.length / cols);
  const pw = 460;
  const ph = 320;
  const width = cols * pw;
  const height = rows * ph;
  const panels = inputs.map((s, i) => {
    const cx = (i % cols) * pw;
    const cy = Math.floor(i / cols) * ph;
    return renderProfilePanel([s], spec, cx, cy, pw, ph, s.label, false);
  });
  return svgDocument(width, height, panels.join("\n"));
}

export function renderFigure(
  spec: FigureSpec,
  readFile: ReadFile,
  warn: Warn = (m) => console.warn(m)
): string {
  switch (spec.kind) {
    case "profiles":
      return renderProfiles(spec, readFile);
    case "residual_loglog":
      return renderResidualLoglog(spec, readFile, warn);
    case "log_momentum":
      return renderLogMomentum(spec, readFile, warn);
    case "panel_grid":
      return renderPanelGrid(spec, readFile);
  }
}
