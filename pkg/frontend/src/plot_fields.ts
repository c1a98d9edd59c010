/**
 * Field snapshot panels: one grayscale-to-diverging heatmap per RWL1 dump,
 * laid out side by side with a shared symmetric color scale.
 *
 * Usage: node plot_fields.js --in q_a.rwl q_b.rwl --out figure.svg
 */

import { basename } from "path";
import { FieldDump, readRwl, SchemaError } from "./formats.js";
import { runScript } from "./cli.js";

/** Diverging blue-white-red map on [-1, 1]. */
function color(v: number): string {
  const t = Math.max(-1, Math.min(1, v));
  const r = t > 0 ? 255 : Math.round(255 * (1 + t));
  const b = t < 0 ? 255 : Math.round(255 * (1 - t));
  const g = Math.round(255 * (1 - Math.abs(t)));
  return `rgb(${r},${g},${b})`;
}

export function renderFields(dumps: FieldDump[], names: string[]): string {
  if (dumps.length === 0) {
    throw new SchemaError("no field dumps given");
  }
  for (let i = 0; i < dumps.length; i++) {
    if (dumps[i].dims.length !== 2) {
      throw new SchemaError(
        `${names[i]}: expected a rank-2 horizontal field, got rank ${dumps[i].dims.length}`,
      );
    }
  }
  let scale = 0;
  for (const d of dumps) {
    for (const v of d.samples) {
      scale = Math.max(scale, Math.abs(v));
    }
  }
  if (scale === 0) {
    scale = 1;
  }

  const cell = 4;
  const gap = 24;
  const top = 34;
  const widths = dumps.map((d) => d.dims[0] * cell);
  const height = top + Math.max(...dumps.map((d) => d.dims[1] * cell)) + 16;
  const width = widths.reduce((a, b) => a + b, 0) + gap * (dumps.length + 1);

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];
  let x0 = gap;
  for (let p = 0; p < dumps.length; p++) {
    const { dims, samples } = dumps[p];
    const [nx, ny] = dims;
    parts.push(
      `<text x="${x0 + (nx * cell) / 2}" y="${top - 10}" font-size="12" text-anchor="middle">${basename(names[p])}</text>`,
    );
    for (let i = 0; i < nx; i++) {
      for (let j = 0; j < ny; j++) {
        const v = samples[i * ny + j] / scale;
        parts.push(
          `<rect x="${x0 + i * cell}" y="${top + (ny - 1 - j) * cell}" width="${cell}" height="${cell}" fill="${color(v)}"/>`,
        );
      }
    }
    parts.push(
      `<rect x="${x0}" y="${top}" width="${nx * cell}" height="${ny * cell}" fill="none" stroke="#333"/>`,
    );
    x0 += nx * cell + gap;
  }
  parts.push("</svg>", "");
  return parts.join("\n");
}

const isMain = process.argv[1]?.endsWith("plot_fields.js");
if (isMain) {
  runScript("plot_fields --in dump1.rwl [dump2.rwl ...] --out figure.svg", (args) =>
    renderFields(args.inputs.map((p) => readRwl(p)), args.inputs),
  );
}
