/**
 * Convergence plot: windowed errors against the Rossby number, log-log,
 * with a first-order reference line.
 *
 * Usage: node plot_convergence.js --in summary.csv --out figure.svg
 */

import { readCsv, requireColumn, SchemaError, Table } from "./formats.js";
import { defaultFrame, Scene } from "./svg.js";
import { runScript } from "./cli.js";

export function renderConvergence(table: Table, source = "summary.csv"): string {
  const eps = requireColumn(table, "eps", source);
  const sigma = requireColumn(table, "sigma_l2", source);
  const vel = requireColumn(table, "velocity_l2", source);
  if (eps.length < 2) {
    throw new SchemaError(`${source}: need at least two sweep points`);
  }
  if (eps.some((e) => e <= 0)) {
    throw new SchemaError(`${source}: eps must be positive`);
  }

  const x = { min: Math.min(...eps) / 1.5, max: Math.max(...eps) * 1.5 };
  const all = [...sigma, ...vel].filter((v) => v > 0);
  const y = { min: Math.min(...all) / 2, max: Math.max(...all) * 2 };

  const scene = new Scene(defaultFrame(x, y, true, true));
  scene.axes("eps", "windowed L2 error", "Convergence to the balanced limit");
  scene.polyline(eps, sigma, "#1f77b4");
  scene.markers(eps, sigma, "#1f77b4");
  scene.polyline(eps, vel, "#2ca02c");
  scene.markers(eps, vel, "#2ca02c");

  // first-order reference anchored at the coarsest point
  const i0 = eps.indexOf(Math.max(...eps));
  const c = Math.max(sigma[i0], vel[i0]) / eps[i0];
  scene.polyline(eps, eps.map((e) => c * e), "#d62728", 1.2, "6 4");

  scene.text(scene.frame.margin.left + 10, scene.frame.margin.top + 20,
    "blue: scalar error, green: velocity error, dashed: O(eps)", "#555", 11);
  return scene.render();
}

const isMain = process.argv[1]?.endsWith("plot_convergence.js");
if (isMain) {
  runScript("plot_convergence --in summary.csv --out figure.svg", (args) => {
    if (args.inputs.length !== 1) {
      throw new SchemaError("expected exactly one input: summary.csv");
    }
    return renderConvergence(readCsv(args.inputs[0]), args.inputs[0]);
  });
}
