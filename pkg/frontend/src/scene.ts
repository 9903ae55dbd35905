/**
 * Turn a figure into a flat list of drawing primitives on a fixed canvas.
 * Both serializers (SVG text, PNG raster) consume the same scene, so the
 * two formats always show identical geometry.
 *
 * Panels sit side by side, x linear in function evaluations, y log10.
 * Axis ranges come from the data (plus any guide lines), so every point
 * the layout emits already lies inside its panel; no clipping downstream.
 */

import { Figure, Panel } from "./figure";
import { SchemaError } from "./schema";

export type Prim =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number;
      color: string; width: number; dash?: number[] }
  | { kind: "polyline"; pts: [number, number][]; color: string; width: number;
      dash?: number[] }
  | { kind: "polygon"; pts: [number, number][]; color: string; opacity: number }
  | { kind: "text"; x: number; y: number; s: string; size: number; color: string;
      anchor: "start" | "middle" | "end"; bold?: boolean; rotated?: boolean };

export interface Scene {
  width: number;
  height: number;
  prims: Prim[];
}

export const PANEL_W = 360;
export const PANEL_H = 320;
const ML = 56, MR = 14, MT = 40, MB = 44;

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 0.01; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function decadeLabel(n: number): string {
  return n === 0 ? "1" : `1e${n}`;
}

/** Split a point run into maximal in-range segments (log-y drops y <= 0). */
function segments(
  x: number[], y: number[],
  inRange: (xi: number, yi: number) => boolean,
  toPt: (xi: number, yi: number) => [number, number]
): [number, number][][] {
  const out: [number, number][][] = [];
  let cur: [number, number][] = [];
  for (let i = 0; i < x.length; i++) {
    if (inRange(x[i], y[i])) {
      cur.push(toPt(x[i], y[i]));
    } else if (cur.length > 0) {
      out.push(cur);
      cur = [];
    }
  }
  if (cur.length > 0) out.push(cur);
  return out;
}

function layoutPanel(panel: Panel, offsetX: number, prims: Prim[]): void {
  const x0 = offsetX + ML, y0 = MT;
  const pw = PANEL_W - ML - MR, ph = PANEL_H - MT - MB;

  // ranges: x from the curves, y from every positive drawable value
  let xMin = Infinity, xMax = -Infinity;
  let yLo = Infinity, yHi = -Infinity;
  const consider = (v: number) => {
    if (v > 0) {
      const l = Math.log10(v);
      if (l < yLo) yLo = l;
      if (l > yHi) yHi = l;
    }
  };
  for (const c of panel.curves) {
    for (const v of c.x) {
      if (v < xMin) xMin = v;
      if (v > xMax) xMax = v;
    }
    c.y.forEach(consider);
  }
  for (const b of panel.bands) {
    b.lo.forEach(consider);
    b.hi.forEach(consider);
  }
  panel.hGuides.forEach((g) => consider(g.y));
  if (!Number.isFinite(yLo)) {
    throw new SchemaError(
      `panel "${panel.title}": no positive values to draw on a log axis`);
  }
  if (xMax === xMin) xMax = xMin + 1;
  if (yHi - yLo < 1e-9) yHi = yLo + 1;
  const pad = 0.04 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const X = (v: number) => x0 + ((v - xMin) / (xMax - xMin)) * pw;
  const Y = (v: number) => y0 + ph - ((Math.log10(v) - yLo) / (yHi - yLo)) * ph;
  const yVisible = (v: number) =>
    v > 0 && Math.log10(v) >= yLo - 1e-12 && Math.log10(v) <= yHi + 1e-12;
  const xVisible = (v: number) => v >= xMin && v <= xMax;

  // decade grid
  const step = Math.max(1, Math.ceil((yHi - yLo) / 7));
  const decades: number[] = [];
  for (let n = Math.ceil(yLo); n <= Math.floor(yHi); n += step) decades.push(n);
  for (const n of decades) {
    const y = Y(Math.pow(10, n));
    prims.push({ kind: "line", x1: x0, y1: y, x2: x0 + pw, y2: y,
                 color: "#eeeeee", width: 0.5 });
  }

  for (const b of panel.bands) {
    const up: [number, number][] = [];
    const down: [number, number][] = [];
    for (let i = 0; i < b.x.length; i++) {
      if (!xVisible(b.x[i]) || !yVisible(b.hi[i]) || !yVisible(b.lo[i])) continue;
      up.push([X(b.x[i]), Y(b.hi[i])]);
      down.push([X(b.x[i]), Y(b.lo[i])]);
    }
    if (up.length >= 2) {
      prims.push({ kind: "polygon", pts: [...up, ...down.reverse()],
                   color: b.color, opacity: b.opacity });
    }
  }

  for (const g of panel.hGuides) {
    if (!yVisible(g.y)) continue;
    const y = Y(g.y);
    prims.push({ kind: "line", x1: x0, y1: y, x2: x0 + pw, y2: y,
                 color: g.color, width: 0.9, dash: [6, 3] });
    prims.push({ kind: "text", x: x0 + pw - 2, y: y - 3, s: g.label, size: 6,
                 color: g.color, anchor: "end" });
  }

  for (const c of panel.curves) {
    for (const seg of segments(
      c.x, c.y,
      (xi, yi) => xVisible(xi) && yVisible(yi),
      (xi, yi) => [X(xi), Y(yi)]
    )) {
      if (seg.length === 1) {
        // an isolated visible point still deserves a mark
        prims.push({ kind: "line", x1: seg[0][0] - 1, y1: seg[0][1],
                     x2: seg[0][0] + 1, y2: seg[0][1],
                     color: c.color, width: c.width });
      } else {
        prims.push({ kind: "polyline", pts: seg, color: c.color,
                     width: c.width, dash: c.dash });
      }
    }
  }

  // frame
  prims.push({ kind: "line", x1: x0, y1: y0, x2: x0, y2: y0 + ph,
               color: "#333333", width: 0.7 });
  prims.push({ kind: "line", x1: x0, y1: y0 + ph, x2: x0 + pw, y2: y0 + ph,
               color: "#333333", width: 0.7 });

  for (const n of decades) {
    const y = Y(Math.pow(10, n));
    prims.push({ kind: "line", x1: x0 - 3, y1: y, x2: x0, y2: y,
                 color: "#333333", width: 0.5 });
    prims.push({ kind: "text", x: x0 - 5, y: y + 2.5, s: decadeLabel(n),
                 size: 6.5, color: "#666666", anchor: "end" });
  }
  for (const t of niceTicks(xMin, xMax, 5)) {
    const x = X(t);
    prims.push({ kind: "line", x1: x, y1: y0 + ph, x2: x, y2: y0 + ph + 3,
                 color: "#333333", width: 0.5 });
    prims.push({ kind: "text", x, y: y0 + ph + 12, s: String(Math.round(t)),
                 size: 6.5, color: "#666666", anchor: "middle" });
  }

  prims.push({ kind: "text", x: x0 + pw / 2, y: PANEL_H - 8, s: panel.xLabel,
               size: 8, color: "#444444", anchor: "middle" });
  prims.push({ kind: "text", x: offsetX + 14, y: y0 + ph / 2, s: panel.yLabel,
               size: 8, color: "#444444", anchor: "middle", rotated: true });
  prims.push({ kind: "text", x: x0, y: 16, s: panel.title, size: 10,
               color: "#222222", anchor: "start", bold: true });
  prims.push({ kind: "text", x: x0, y: 26, s: panel.subtitle, size: 7,
               color: "#888888", anchor: "start" });

  // legend, top right inside the plot
  const entries = panel.curves.filter((c) => c.label !== undefined);
  if (entries.length > 0) {
    const widest = Math.max(...entries.map((c) => c.label!.length));
    const lw = widest * 4.5 + 26;
    const lx = x0 + pw - lw;
    const ly = y0 + 6;
    prims.push({ kind: "rect", x: lx - 4, y: ly - 5, w: lw + 6,
                 h: entries.length * 10 + 4, fill: "#ffffff" });
    entries.forEach((c, i) => {
      const yy = ly + i * 10;
      prims.push({ kind: "line", x1: lx, y1: yy, x2: lx + 14, y2: yy,
                   color: c.color, width: Math.min(c.width, 1.5), dash: c.dash });
      prims.push({ kind: "text", x: lx + 18, y: yy + 2.5, s: c.label!,
                   size: 6.5, color: "#444444", anchor: "start" });
    });
  }
}

export function layoutFigure(figure: Figure): Scene {
  const width = PANEL_W * figure.panels.length;
  const height = PANEL_H;
  const prims: Prim[] = [
    { kind: "rect", x: 0, y: 0, w: width, h: height, fill: "#ffffff" },
  ];
  figure.panels.forEach((p, i) => layoutPanel(p, i * PANEL_W, prims));
  return { width, height, prims };
}
