/**
 * Log-log decay plot: sup norms against time with the reference slope -1/2,
 * annotated with the fitted slope from the CSV's metadata sidecar.
 *
 * Usage: node plot_decay.js --in decay.csv decay.meta.json --out decay.svg
 */

import { readCsv, readSidecar, requireColumn, SchemaError, Sidecar, Table } from "./formats.js";
import { defaultFrame, extentOf, Scene } from "./svg.js";
import { runScript } from "./cli.js";

export function renderDecay(table: Table, meta: Sidecar, source = "decay.csv"): string {
  const t = requireColumn(table, "t", source);
  const supS = requireColumn(table, "sup_s", source);
  const supV = requireColumn(table, "sup_V", source);
  requireColumn(table, "l2_total", source);

  const pos = t.map((v, i) => i).filter((i) => t[i] > 0);
  if (pos.length < 2) {
    throw new SchemaError(`${source}: need at least two positive times`);
  }
  const tp = pos.map((i) => t[i]);
  const supAll = pos.map((i) => Math.max(supS[i], supV[i]));

  const x = { min: Math.min(...tp) / 1.2, max: Math.max(...tp) * 1.2 };
  const yVals = pos.flatMap((i) => [supS[i], supV[i]]).filter((v) => v > 0);
  const y = { min: Math.min(...yVals) / 2, max: Math.max(...yVals) * 2 };

  const scene = new Scene(defaultFrame(x, y, true, true));
  scene.axes("t", "sup norm", "Dispersive decay");
  scene.polyline(tp, pos.map((i) => supS[i]), "#1f77b4");
  scene.markers(tp, pos.map((i) => supS[i]), "#1f77b4");
  scene.polyline(tp, pos.map((i) => supV[i]), "#2ca02c");
  scene.markers(tp, pos.map((i) => supV[i]), "#2ca02c");

  // the -1/2 reference line, anchored at the first fitted point
  const c = supAll[0] * Math.sqrt(tp[0]);
  scene.polyline(tp, tp.map((v) => c / Math.sqrt(v)), "#d62728", 1.2, "6 4");

  const slope = meta["slope"];
  if (typeof slope !== "number") {
    throw new SchemaError("sidecar: missing numeric \"slope\"");
  }
  scene.text(scene.frame.margin.left + 10, scene.frame.margin.top + 20,
    `fitted slope ${slope.toFixed(3)} (reference -1/2 dashed)`);
  scene.text(scene.frame.margin.left + 10, scene.frame.margin.top + 36,
    "blue: sup|s|, green: sup|V|", "#555", 11);

  if (meta["empty_window"] === true) {
    scene.banner("warning: empty fit window, slope is not meaningful");
  }
  return scene.render();
}

const isMain = process.argv[1]?.endsWith("plot_decay.js");
if (isMain) {
  runScript("plot_decay --in decay.csv decay.meta.json --out figure.svg", (args) => {
    if (args.inputs.length !== 2) {
      throw new SchemaError("expected exactly two inputs: decay.csv decay.meta.json");
    }
    return renderDecay(readCsv(args.inputs[0]), readSidecar(args.inputs[1]), args.inputs[0]);
  });
}
