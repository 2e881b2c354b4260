import { describe, expect, it } from "vitest";

import { SpecError, parseFigureSpec } from "../src/figspec.js";

const GOOD = [
  "# comparison figure",
  "kind = residual_loglog",
  "out = fig.svg",
  "series = hyp_series.csv : hyperbolic",
  "series = par_series.csv : parabolic",
  "ymin = 1e-14",
  "title = residuals",
].join("\n");

describe("parseFigureSpec", () => {
  it("parses a full spec", () => {
    const s = parseFigureSpec(GOOD);
    expect(s.kind).toBe("residual_loglog");
    expect(s.out).toBe("fig.svg");
    expect(s.series).toEqual([
      { path: "hyp_series.csv", label: "hyperbolic" },
      { path: "par_series.csv", label: "parabolic" },
    ]);
    expect(s.ymin).toBe(1e-14);
    expect(s.title).toBe("residuals");
  });

  it("defaults the label to the path", () => {
    const s = parseFigureSpec("kind = profiles\nout = o.svg\nseries = snap.csv");
    expect(s.series[0]).toEqual({ path: "snap.csv", label: "snap.csv" });
  });

  it("requires at least one series", () => {
    expect(() => parseFigureSpec("kind = profiles\nout = o.svg")).toThrow(
      /at least one 'series'/
    );
  });

  it("requires unique labels", () => {
    const text =
      "kind = profiles\nout = o.svg\nseries = a.csv : run\nseries = b.csv : run";
    expect(() => parseFigureSpec(text)).toThrow(/unique/);
  });

  it("rejects unknown kinds and keys", () => {
    expect(() =>
      parseFigureSpec("kind = pie\nout = o.svg\nseries = a.csv")
    ).toThrow(SpecError);
    expect(() =>
      parseFigureSpec("kind = profiles\nout = o.svg\nseries = a.csv\ncolour = red")
    ).toThrow(/unknown key/);
  });

  it("rejects missing kind or out", () => {
    expect(() => parseFigureSpec("out = o.svg\nseries = a.csv")).toThrow(/kind/);
    expect(() => parseFigureSpec("kind = profiles\nseries = a.csv")).toThrow(/out/);
  });

  it("rejects non-numeric axis values", () => {
    expect(() =>
      parseFigureSpec("kind = profiles\nout = o.svg\nseries = a.csv\nxmin = wide")
    ).toThrow(/not a number/);
  });
});
