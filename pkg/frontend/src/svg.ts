/**
 * Minimal deterministic SVG scene builder: axes, polylines, markers, text.
 * No clock, no randomness; identical input produces identical bytes.
 */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[], padFraction = 0.05): Extent {
  const finite = values.filter((v) => Number.isFinite(v));
  if (finite.length === 0) {
    return { min: 0, max: 1 };
  }
  let min = Math.min(...finite);
  let max = Math.max(...finite);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const pad = (max - min) * padFraction;
  return { min: min - pad, max: max + pad };
}

export interface Frame {
  width: number;
  height: number;
  margin: { left: number; right: number; top: number; bottom: number };
  x: Extent;
  y: Extent;
  xLog: boolean;
  yLog: boolean;
}

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

export function xPixel(f: Frame, v: number): number {
  const t = f.xLog
    ? (Math.log10(v) - Math.log10(f.x.min)) / (Math.log10(f.x.max) - Math.log10(f.x.min))
    : (v - f.x.min) / (f.x.max - f.x.min);
  return f.margin.left + t * (f.width - f.margin.left - f.margin.right);
}

export function yPixel(f: Frame, v: number): number {
  const t = f.yLog
    ? (Math.log10(v) - Math.log10(f.y.min)) / (Math.log10(f.y.max) - Math.log10(f.y.min))
    : (v - f.y.min) / (f.y.max - f.y.min);
  return f.height - f.margin.bottom - t * (f.height - f.margin.top - f.margin.bottom);
}

function logTicks(e: Extent): number[] {
  const ticks: number[] = [];
  const lo = Math.ceil(Math.log10(e.min) - 1e-9);
  const hi = Math.floor(Math.log10(e.max) + 1e-9);
  for (let p = lo; p <= hi; p++) {
    ticks.push(10 ** p);
  }
  return ticks;
}

function linTicks(e: Extent, n = 6): number[] {
  const raw = (e.max - e.min) / n;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? raw;
  const ticks: number[] = [];
  for (let v = Math.ceil(e.min / step) * step; v <= e.max + 1e-12 * step; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export class Scene {
  private parts: string[] = [];

  constructor(public frame: Frame) {}

  axes(xLabel: string, yLabel: string, title: string): void {
    const f = this.frame;
    const x0 = f.margin.left;
    const x1 = f.width - f.margin.right;
    const y0 = f.margin.top;
    const y1 = f.height - f.margin.bottom;
    this.parts.push(
      `<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    const xt = f.xLog ? logTicks(f.x) : linTicks(f.x);
    for (const v of xt) {
      const px = fmt(xPixel(f, v));
      this.parts.push(
        `<line x1="${px}" y1="${y1}" x2="${px}" y2="${y1 + 5}" stroke="#333"/>`,
        `<text x="${px}" y="${y1 + 18}" font-size="11" text-anchor="middle">${fmt(v)}</text>`,
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#ddd" stroke-width="0.5"/>`,
      );
    }
    const yt = f.yLog ? logTicks(f.y) : linTicks(f.y);
    for (const v of yt) {
      const py = fmt(yPixel(f, v));
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`,
        `<text x="${x0 - 8}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle">${v.toExponential(0)}</text>`,
        `<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#ddd" stroke-width="0.5"/>`,
      );
    }
    this.parts.push(
      `<text x="${fmt((x0 + x1) / 2)}" y="${f.height - 8}" font-size="13" text-anchor="middle">${xLabel}</text>`,
      `<text x="14" y="${fmt((y0 + y1) / 2)}" font-size="13" text-anchor="middle" transform="rotate(-90 14 ${fmt((y0 + y1) / 2)})">${yLabel}</text>`,
      `<text x="${fmt((x0 + x1) / 2)}" y="${y0 - 8}" font-size="15" text-anchor="middle" font-weight="bold">${title}</text>`,
    );
  }

  polyline(xs: number[], ys: number[], color: string, width = 1.5, dash = ""): void {
    const f = this.frame;
    const pts = xs
      .map((x, i) => `${fmt(xPixel(f, x))},${fmt(yPixel(f, ys[i]))}`)
      .join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  markers(xs: number[], ys: number[], color: string, r = 3): void {
    const f = this.frame;
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle cx="${fmt(xPixel(f, xs[i]))}" cy="${fmt(yPixel(f, ys[i]))}" r="${r}" fill="${color}"/>`,
      );
    }
  }

  text(x: number, y: number, content: string, color = "#333", size = 12): void {
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" fill="${color}">${content}</text>`);
  }

  banner(message: string): void {
    const f = this.frame;
    this.parts.push(
      `<rect x="${f.margin.left}" y="${f.margin.top + 4}" width="${f.width - f.margin.left - f.margin.right}" height="22" fill="#fdd" stroke="#c00"/>`,
      `<text x="${fmt(f.width / 2)}" y="${f.margin.top + 19}" font-size="12" fill="#c00" text-anchor="middle">${message}</text>`,
    );
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  render(): string {
    const f = this.frame;
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" viewBox="0 0 ${f.width} ${f.height}" font-family="sans-serif">`,
      `<rect width="${f.width}" height="${f.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

export function defaultFrame(x: Extent, y: Extent, xLog: boolean, yLog: boolean): Frame {
  return {
    width: 640,
    height: 440,
    margin: { left: 64, right: 20, top: 40, bottom: 48 },
    x,
    y,
    xLog,
    yLog,
  };
}
