/**
 * Rasterize a scene and encode it as a PNG, dependency-free except for
 * zlib's deflate. Drawing is integer pixel work with no anti-aliasing,
 * so output bytes are a pure function of the scene. The canvas is
 * rendered at 2x the scene's logical size.
 */

import { deflateSync } from "zlib";
import { Figure } from "./figure";
import { glyph, GLYPH_W } from "./font";
import { layoutFigure, Prim } from "./scene";

const SS = 2;

type RGB = [number, number, number];

function parseColor(c: string): RGB {
  const h = c.replace("#", "");
  const full = h.length === 3 ? h.split("").map((x) => x + x).join("") : h;
  return [
    parseInt(full.slice(0, 2), 16),
    parseInt(full.slice(2, 4), 16),
    parseInt(full.slice(4, 6), 16),
  ];
}

class Raster {
  readonly w: number;
  readonly h: number;
  readonly px: Uint8Array;

  constructor(w: number, h: number) {
    this.w = w;
    this.h = h;
    this.px = new Uint8Array(w * h * 4).fill(255);
  }

  set(x: number, y: number, [r, g, b]: RGB, alpha = 1): void {
    if (x < 0 || y < 0 || x >= this.w || y >= this.h) return;
    const i = (y * this.w + x) * 4;
    if (alpha >= 1) {
      this.px[i] = r;
      this.px[i + 1] = g;
      this.px[i + 2] = b;
    } else {
      this.px[i] = Math.round(this.px[i] * (1 - alpha) + r * alpha);
      this.px[i + 1] = Math.round(this.px[i + 1] * (1 - alpha) + g * alpha);
      this.px[i + 2] = Math.round(this.px[i + 2] * (1 - alpha) + b * alpha);
    }
    this.px[i + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, c: RGB): void {
    const x0 = Math.max(0, Math.round(x));
    const y0 = Math.max(0, Math.round(y));
    const x1 = Math.min(this.w, Math.round(x + w));
    const y1 = Math.min(this.h, Math.round(y + h));
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) this.set(xx, yy, c);
    }
  }

  /** even-odd scanline fill, sampling at pixel centers */
  fillPoly(pts: [number, number][], c: RGB, alpha = 1): void {
    if (pts.length < 3) return;
    let yMin = Infinity, yMax = -Infinity;
    for (const [, y] of pts) {
      if (y < yMin) yMin = y;
      if (y > yMax) yMax = y;
    }
    const lo = Math.max(0, Math.floor(yMin));
    const hi = Math.min(this.h - 1, Math.ceil(yMax));
    for (let row = lo; row <= hi; row++) {
      const yc = row + 0.5;
      const xs: number[] = [];
      for (let i = 0; i < pts.length; i++) {
        const [x1, y1] = pts[i];
        const [x2, y2] = pts[(i + 1) % pts.length];
        if (y1 === y2) continue;
        if ((y1 <= yc && yc < y2) || (y2 <= yc && yc < y1)) {
          xs.push(x1 + ((yc - y1) * (x2 - x1)) / (y2 - y1));
        }
      }
      xs.sort((a, b) => a - b);
      for (let i = 0; i + 1 < xs.length; i += 2) {
        const a = Math.max(0, Math.ceil(xs[i] - 0.5));
        const b = Math.min(this.w - 1, Math.floor(xs[i + 1] - 0.5));
        for (let xx = a; xx <= b; xx++) this.set(xx, row, c, alpha);
      }
    }
  }

  seg(x1: number, y1: number, x2: number, y2: number, width: number, c: RGB): void {
    const dx = x2 - x1, dy = y2 - y1;
    const len = Math.hypot(dx, dy);
    const hw = Math.max(width, 1) / 2;
    if (len === 0) {
      this.fillRect(x1 - hw, y1 - hw, 2 * hw, 2 * hw, c);
      return;
    }
    const nx = (-dy / len) * hw, ny = (dx / len) * hw;
    this.fillPoly(
      [[x1 + nx, y1 + ny], [x2 + nx, y2 + ny], [x2 - nx, y2 - ny], [x1 - nx, y1 - ny]],
      c
    );
    // square the joints so consecutive segments connect without notches
    this.fillRect(x2 - hw, y2 - hw, 2 * hw, 2 * hw, c);
  }

  dashedSeg(x1: number, y1: number, x2: number, y2: number, width: number,
            c: RGB, dash: number[]): void {
    const len = Math.hypot(x2 - x1, y2 - y1);
    if (len === 0) return;
    const ux = (x2 - x1) / len, uy = (y2 - y1) / len;
    const [on, off] = dash;
    let pos = 0;
    while (pos < len) {
      const end = Math.min(pos + on, len);
      this.seg(x1 + ux * pos, y1 + uy * pos, x1 + ux * end, y1 + uy * end, width, c);
      pos = end + off;
    }
  }
}

function drawText(r: Raster, p: Extract<Prim, { kind: "text" }>): void {
  const s = Math.max(1, Math.round((p.size * SS) / 7));
  const advance = (GLYPH_W + 1) * s;
  const textW = p.s.length * advance - s;
  const c = parseColor(p.color);
  const ox = p.x * SS, oy = p.y * SS;
  let startX = 0;
  if (p.anchor === "middle") startX = -textW / 2;
  if (p.anchor === "end") startX = -textW;

  // glyph cell (gx, gy) relative to the baseline origin; rotation is
  // exactly -90 degrees, so cells stay axis-aligned squares
  const plot = (gx: number, gy: number) => {
    if (p.rotated) r.fillRect(ox + gy, oy - gx - s, s, s, c);
    else r.fillRect(ox + gx, oy + gy, s, s, c);
  };

  for (let i = 0; i < p.s.length; i++) {
    const rows = glyph(p.s[i]);
    const gx0 = startX + i * advance;
    for (let row = 0; row < rows.length; row++) {
      for (let col = 0; col < GLYPH_W; col++) {
        if (rows[row] & (1 << (GLYPH_W - 1 - col))) {
          plot(gx0 + col * s, (row - 6) * s);
        }
      }
    }
  }
}

function rasterize(fig: Figure): Raster {
  const scene = layoutFigure(fig);
  const r = new Raster(scene.width * SS, scene.height * SS);
  for (const p of scene.prims) {
    switch (p.kind) {
      case "rect":
        r.fillRect(p.x * SS, p.y * SS, p.w * SS, p.h * SS, parseColor(p.fill));
        break;
      case "line": {
        const c = parseColor(p.color);
        const w = p.width * SS;
        if (p.dash) {
          r.dashedSeg(p.x1 * SS, p.y1 * SS, p.x2 * SS, p.y2 * SS, w, c,
                      p.dash.map((d) => d * SS));
        } else {
          r.seg(p.x1 * SS, p.y1 * SS, p.x2 * SS, p.y2 * SS, w, c);
        }
        break;
      }
      case "polyline": {
        const c = parseColor(p.color);
        const w = p.width * SS;
        const dash = p.dash?.map((d) => d * SS);
        for (let i = 0; i + 1 < p.pts.length; i++) {
          const [x1, y1] = p.pts[i];
          const [x2, y2] = p.pts[i + 1];
          if (dash) r.dashedSeg(x1 * SS, y1 * SS, x2 * SS, y2 * SS, w, c, dash);
          else r.seg(x1 * SS, y1 * SS, x2 * SS, y2 * SS, w, c);
        }
        break;
      }
      case "polygon":
        r.fillPoly(p.pts.map(([x, y]) => [x * SS, y * SS] as [number, number]),
                   parseColor(p.color), p.opacity);
        break;
      case "text":
        drawText(r, p);
        break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// PNG encoding
// ---------------------------------------------------------------------------

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(4);
  head.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([head, body, crc]);
}

export function renderPNG(figure: Figure): Buffer {
  const r = rasterize(figure);
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(r.w, 0);
  ihdr.writeUInt32BE(r.h, 4);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 6;   // RGBA
  // compression, filter, interlace all 0

  const stride = r.w * 4;
  const raw = Buffer.alloc((stride + 1) * r.h);
  for (let y = 0; y < r.h; y++) {
    raw[y * (stride + 1)] = 0;  // filter: none
    raw.set(r.px.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }

  return Buffer.concat([
    Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}
