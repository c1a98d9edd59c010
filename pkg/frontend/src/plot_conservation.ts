/**
 * Conservation drift plot: relative departure of each invariant from its
 * initial value over the run, on a symmetric log-like scale.
 *
 * Usage: node plot_conservation.js --in conservation.csv --out figure.svg
 */

import { readCsv, requireColumn, SchemaError, Table } from "./formats.js";
import { defaultFrame, extentOf, Scene } from "./svg.js";
import { runScript } from "./cli.js";

const FLOOR = 1e-17;

export function renderConservation(table: Table, source = "conservation.csv"): string {
  const t = requireColumn(table, "t", source);
  const energy = requireColumn(table, "energy", source);
  const pL2 = requireColumn(table, "p_l2", source);
  if (t.length < 2) {
    throw new SchemaError(`${source}: need at least two samples`);
  }

  const drift = (series: number[]): number[] => {
    const ref = series[0];
    if (ref === 0) {
      throw new SchemaError(`${source}: zero initial value, relative drift undefined`);
    }
    return series.map((v) => Math.max(Math.abs(v - ref) / Math.abs(ref), FLOOR));
  };
  const dE = drift(energy);
  const dP = drift(pL2);

  const x = extentOf(t, 0.02);
  x.min = Math.max(x.min, 0);
  const all = [...dE, ...dP];
  const y = { min: Math.min(...all) / 10, max: Math.max(...all) * 10 };

  const scene = new Scene(defaultFrame(x, y, false, true));
  scene.axes("t", "relative drift", "Invariant drift");
  scene.polyline(t, dE, "#1f77b4");
  scene.polyline(t, dP, "#2ca02c");
  scene.text(scene.frame.margin.left + 10, scene.frame.margin.top + 20,
    "blue: energy, green: potential vorticity norm", "#555", 11);
  return scene.render();
}

const isMain = process.argv[1]?.endsWith("plot_conservation.js");
if (isMain) {
  runScript("plot_conservation --in conservation.csv --out figure.svg", (args) => {
    if (args.inputs.length !== 1) {
      throw new SchemaError("expected exactly one input: conservation.csv");
    }
    return renderConservation(readCsv(args.inputs[0]), args.inputs[0]);
  });
}
