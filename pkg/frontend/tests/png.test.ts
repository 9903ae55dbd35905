import { inflateSync } from "zlib";
import { describe, expect, it } from "vitest";

import { buildFigure } from "../src/figure";
import { renderPNG } from "../src/png";
import { PANEL_H, PANEL_W } from "../src/scene";
import { geometric, writeExperiment } from "./helpers";

function fixture(): string {
  return writeExperiment("lines", [
    { label: "ell1", hLaw: "constant", hValue: 1e-3, r: 0,
      bound: 0.1, reps: [geometric(10, 0.9, 50)] },
  ]);
}

function chunks(buf: Buffer): { type: string; data: Buffer }[] {
  const out: { type: string; data: Buffer }[] = [];
  let off = 8;
  while (off < buf.length) {
    const len = buf.readUInt32BE(off);
    const type = buf.subarray(off + 4, off + 8).toString("ascii");
    out.push({ type, data: buf.subarray(off + 8, off + 8 + len) });
    off += 12 + len;
  }
  return out;
}

describe("renderPNG", () => {
  it("emits a well-formed RGBA image at 2x panel size", () => {
    const png = renderPNG(buildFigure([fixture()]));
    expect([...png.subarray(0, 8)]).toEqual([137, 80, 78, 71, 13, 10, 26, 10]);

    const parts = chunks(png);
    expect(parts.map((c) => c.type)).toEqual(["IHDR", "IDAT", "IEND"]);

    const ihdr = parts[0].data;
    const w = ihdr.readUInt32BE(0);
    const h = ihdr.readUInt32BE(4);
    expect(w).toBe(PANEL_W * 2);
    expect(h).toBe(PANEL_H * 2);
    expect(ihdr[8]).toBe(8);   // bit depth
    expect(ihdr[9]).toBe(6);   // RGBA

    const raw = inflateSync(parts[1].data);
    expect(raw.length).toBe((w * 4 + 1) * h);
    // top-left pixel is background white, fully opaque
    expect([...raw.subarray(1, 5)]).toEqual([255, 255, 255, 255]);
    // something was actually drawn
    expect(raw.some((b, i) => i % (w * 4 + 1) !== 0 && b !== 255)).toBe(true);
  });

  it("is byte-identical across renders", () => {
    const file = fixture();
    const a = renderPNG(buildFigure([file]));
    const b = renderPNG(buildFigure([file]));
    expect(a.equals(b)).toBe(true);
  });

  it("widens with the panel count", () => {
    const f1 = fixture();
    const f2 = fixture();
    const png = renderPNG(buildFigure([f1, f2]));
    expect(chunks(png)[0].data.readUInt32BE(0)).toBe(PANEL_W * 4);
  });
});
