import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

function workdir(): string {
  return mkdtempSync(join(tmpdir(), "chemoplot-"));
}

const SNAPSHOT = [
  "x,rho,u,phi",
  "0.25,1,0.001,0.5",
  "0.75,2,-0.001,0.6",
].join("\n");

describe("cli", () => {
  it("renders a figure end to end", () => {
    const dir = workdir();
    writeFileSync(join(dir, "snap.csv"), SNAPSHOT);
    writeFileSync(
      join(dir, "fig.spec"),
      "kind = profiles\nout = fig.svg\nseries = snap.csv : run\n"
    );
    expect(main(["render", "--spec", join(dir, "fig.spec")])).toBe(0);
    const svg = readFileSync(join(dir, "fig.svg"), "utf8");
    expect(svg).toContain("</svg>");
  });

  it("exits 2 on usage errors and missing spec", () => {
    expect(main([])).toBe(2);
    expect(main(["render", "--spec", "/does/not/exist.spec"])).toBe(2);
  });

  it("exits 2 on a bad spec", () => {
    const dir = workdir();
    writeFileSync(join(dir, "bad.spec"), "kind = pie\nout = o.svg\nseries = a.csv\n");
    expect(main(["render", "--spec", join(dir, "bad.spec")])).toBe(2);
  });

  it("exits nonzero on a missing CSV", () => {
    const dir = workdir();
    writeFileSync(
      join(dir, "fig.spec"),
      "kind = profiles\nout = fig.svg\nseries = nothere.csv : run\n"
    );
    expect(main(["render", "--spec", join(dir, "fig.spec")])).not.toBe(0);
  });

  it("exits nonzero on an ill-formed CSV", () => {
    const dir = workdir();
    writeFileSync(join(dir, "snap.csv"), "x,rho\n1,2\n");
    writeFileSync(
      join(dir, "fig.spec"),
      "kind = profiles\nout = fig.svg\nseries = snap.csv : run\n"
    );
    expect(main(["render", "--spec", join(dir, "fig.spec")])).toBe(1);
  });
});
