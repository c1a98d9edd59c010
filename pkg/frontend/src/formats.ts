/**
 * Readers for the two documented solver output formats.
 *
 * CSV: header row of column names, comma separated, every cell a finite or
 * non-finite float written with full precision.
 *
 * RWL1 field dump (little endian): magic "RWL1", u32 rank, u32 dims[rank],
 * then float64 samples in row-major order.
 *
 * Both readers fail loudly: a missing column, a non-numeric cell, or a
 * malformed dump raises SchemaError. Nothing is ever silently interpolated.
 */

import { readFileSync } from "fs";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  data: Map<string, number[]>;
  rows: number;
}

export function parseCsv(text: string, source = "<csv>"): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty CSV`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  if (new Set(columns).size !== columns.length) {
    throw new SchemaError(`${source}: duplicate column names`);
  }
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${source}: row ${i} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    for (let j = 0; j < columns.length; j++) {
      const v = Number(cells[j]);
      if (cells[j].trim() === "" || Number.isNaN(v)) {
        throw new SchemaError(
          `${source}: row ${i}, column "${columns[j]}": not a number: "${cells[j]}"`,
        );
      }
      data.get(columns[j])!.push(v);
    }
  }
  return { columns, data, rows: lines.length - 1 };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

/** Pull a required column; SchemaError names the missing column. */
export function requireColumn(table: Table, name: string, source = "<csv>"): number[] {
  const col = table.data.get(name);
  if (!col) {
    throw new SchemaError(
      `${source}: missing required column "${name}" (found: ${table.columns.join(", ")})`,
    );
  }
  return col;
}

export interface FieldDump {
  dims: number[];
  samples: Float64Array;
}

export function parseRwl(buf: Buffer, source = "<rwl>"): FieldDump {
  if (buf.length < 8 || buf.toString("latin1", 0, 4) !== "RWL1") {
    throw new SchemaError(`${source}: bad magic, expected "RWL1"`);
  }
  const rank = buf.readUInt32LE(4);
  if (rank < 1 || rank > 8) {
    throw new SchemaError(`${source}: implausible rank ${rank}`);
  }
  if (buf.length < 8 + 4 * rank) {
    throw new SchemaError(`${source}: truncated header`);
  }
  const dims: number[] = [];
  for (let i = 0; i < rank; i++) {
    dims.push(buf.readUInt32LE(8 + 4 * i));
  }
  const count = dims.reduce((a, b) => a * b, 1);
  const start = 8 + 4 * rank;
  if (buf.length !== start + 8 * count) {
    throw new SchemaError(
      `${source}: payload is ${buf.length - start} bytes, expected ${8 * count}`,
    );
  }
  const samples = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    samples[i] = buf.readDoubleLE(start + 8 * i);
  }
  return { dims, samples };
}

export function readRwl(path: string): FieldDump {
  return parseRwl(readFileSync(path), path);
}

export interface Sidecar {
  [key: string]: unknown;
}

export function readSidecar(path: string): Sidecar {
  const text = readFileSync(path, "utf8");
  try {
    return JSON.parse(text) as Sidecar;
  } catch (e) {
    throw new SchemaError(`${path}: not valid JSON: ${(e as Error).message}`);
  }
}
