import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { describe, expect, it } from "vitest";

import { parseTrace, readSummary, SchemaError } from "../src/schema";

const GOOD_CSV = [
  "k,fevals,f,best_f,alpha,h",
  "0,1,2.5,2.5,0.0,0.0",
  "1,3,1.25,1.25,0.05,0.001",
  "2,5,0.7,0.7,0.05,0.001",
].join("\n") + "\n";

describe("parseTrace", () => {
  it("reads the six-column schema", () => {
    const t = parseTrace(GOOD_CSV, "mean.csv");
    expect(t.rows).toBe(3);
    expect(t.columns).toEqual(["k", "fevals", "f", "best_f", "alpha", "h"]);
    expect(t.data.get("f")).toEqual([2.5, 1.25, 0.7]);
    expect(t.data.get("fevals")).toEqual([1, 3, 5]);
  });

  it("accepts the diagnostics columns", () => {
    const text = [
      "k,fevals,f,best_f,alpha,h,pg_norm2,qd_lhs,qd_rhs",
      "0,1,2.5,2.5,0.0,0.0,0.0,0.0,0.0",
      "1,3,1.0,1.0,0.1,0.01,4.0,-1.5,-0.5",
    ].join("\n");
    const t = parseTrace(text, "rep000.csv");
    expect(t.data.get("qd_lhs")).toEqual([0, -1.5]);
  });

  it("names a missing column", () => {
    const text = GOOD_CSV.replace("best_f", "bestf");
    expect(() => parseTrace(text, "mean.csv")).toThrowError(
      'schema mismatch: mean.csv: missing column "best_f"'
    );
  });

  it("rejects unknown columns", () => {
    const text = GOOD_CSV.replace(",h", ",h,extra").replace(/(\n[^\n]+)/g, "$1");
    const withCell = text
      .split("\n")
      .map((l, i) => (i === 0 || l === "" ? l : l + ",0"))
      .join("\n");
    expect(() => parseTrace(withCell, "x.csv")).toThrowError(
      'unknown column "extra"'
    );
  });

  it("rejects ragged rows", () => {
    const text = GOOD_CSV + "3,7,0.5\n";
    expect(() => parseTrace(text, "x.csv")).toThrowError(
      /row 4 has 3 fields, expected 6/
    );
  });

  it("names the column of a non-numeric cell", () => {
    const text = GOOD_CSV.replace("0.7,0.7", "oops,0.7");
    expect(() => parseTrace(text, "x.csv")).toThrowError(
      'non-numeric value "oops" in column "f" at row 3'
    );
  });

  it("rejects an empty file", () => {
    expect(() => parseTrace("k,fevals,f,best_f,alpha,h\n", "x.csv")).toThrowError(
      SchemaError
    );
  });
});

function summaryFixture(overrides: Record<string, unknown> = {}): string {
  const dir = mkdtempSync(path.join(tmpdir(), "ozo-plot-"));
  const base = {
    experiment: "tiny",
    description: "fixture",
    scale: "desk",
    master_seed: 1,
    d: 4,
    n: 4,
    budget: 9,
    problem: { kind: "convex-pl", lambda: 10.0, gamma: 1.0 },
    sampler: "coordinate",
    mode: "fd",
    fevals_convention: "cached",
    x0_policy: "shared",
    diagnostics: false,
    plot_hint: "lines",
    variants: [
      {
        label: "ell1",
        ell: 1,
        alpha: { law: "constant", value: 0.025, s: 0.0 },
        h: { law: "constant", value: 0.001, r: 0.0 },
        replicates: 2,
        seeds: [[1, 1, 0, 0], [1, 1, 0, 1]],
        statuses: ["completed", "completed"],
        constants: { Lambda: 40.0, alpha_bar: 0.025, w: 1.0, C: 200.0,
                     eta: 0.9875, gamma: 1.0 },
        regime: "T2-i'",
        error_region_bound: 4e-4,
        fit: { model: "linear_log", value: 0.98, r2: 0.9, window: [4, 8],
               truncated: false },
        final_mean_f: 0.5,
        final_mean_best_f: 0.5,
        files: { mean: "ell1/mean.csv", replicates: ["ell1/rep000.csv"] },
      },
    ],
    ...overrides,
  };
  const file = path.join(dir, "summary.json");
  writeFileSync(file, JSON.stringify(base));
  return file;
}

describe("readSummary", () => {
  it("maps fields and resolves file paths against its directory", () => {
    const file = summaryFixture();
    const s = readSummary(file);
    expect(s.experiment).toBe("tiny");
    expect(s.plotHint).toBe("lines");
    expect(s.variants).toHaveLength(1);
    const v = s.variants[0];
    expect(v.label).toBe("ell1");
    expect(v.hLaw).toBe("constant");
    expect(v.errorRegionBound).toBeCloseTo(4e-4);
    expect(v.meanFile).toBe(path.join(path.dirname(file), "ell1", "mean.csv"));
    expect(v.replicateFiles).toHaveLength(1);
  });

  it("accepts a null error region bound", () => {
    const file = summaryFixture();
    const raw = JSON.parse(readFileSync(file, "utf-8"));
    raw.variants[0].error_region_bound = null;
    writeFileSync(file, JSON.stringify(raw));
    expect(readSummary(file).variants[0].errorRegionBound).toBeNull();
  });

  it("names a missing top-level field", () => {
    const file = summaryFixture({ plot_hint: undefined });
    expect(() => readSummary(file)).toThrowError('missing field "plot_hint"');
  });

  it("names a missing nested field with its location", () => {
    const file = summaryFixture({
      variants: [{ label: "a", ell: 1 }],
    });
    expect(() => readSummary(file)).toThrowError(
      'summary.json: variants[0]: missing field "alpha"'
    );
  });

  it("rejects unknown plot hints", () => {
    const file = summaryFixture({ plot_hint: "spiral" });
    expect(() => readSummary(file)).toThrowError('unknown plot_hint "spiral"');
  });

  it("rejects invalid JSON", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "ozo-plot-"));
    const file = path.join(dir, "summary.json");
    writeFileSync(file, "{nope");
    expect(() => readSummary(file)).toThrowError(/not valid JSON/);
  });

  it("reports unreadable files", () => {
    expect(() => readSummary("/nonexistent/summary.json")).toThrowError(
      /cannot read summary/
    );
  });
});
