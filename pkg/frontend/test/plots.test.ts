import { describe, expect, it } from "vitest";
import { join } from "path";
import { parseCsv, readCsv, readRwl, readSidecar, SchemaError } from "../src/formats.js";
import { renderDecay } from "../src/plot_decay.js";
import { renderConvergence } from "../src/plot_convergence.js";
import { renderConservation } from "../src/plot_conservation.js";
import { renderFields } from "../src/plot_fields.js";

const SAMPLES = join(__dirname, "..", "sample-data");

describe("plot_decay", () => {
  const table = () => readCsv(join(SAMPLES, "decay.csv"));
  const meta = () => readSidecar(join(SAMPLES, "decay.meta.json"));

  it("renders a figure from the bundled sample", () => {
    const svg = renderDecay(table(), meta());
    expect(svg).toContain("<svg");
    expect(svg).toContain("Dispersive decay");
    expect(svg).toContain("fitted slope");
  });

  it("is deterministic", () => {
    expect(renderDecay(table(), meta())).toBe(renderDecay(table(), meta()));
  });

  it("rejects a series without the sup columns", () => {
    const bad = parseCsv("t,l2_total\n1,2\n2,2\n");
    expect(() => renderDecay(bad, meta())).toThrow(SchemaError);
  });

  it("shows a warning banner when the fit window was empty", () => {
    const svg = renderDecay(table(), { ...meta(), empty_window: true });
    expect(svg).toContain("warning");
  });

  it("requires a numeric slope in the sidecar", () => {
    expect(() => renderDecay(table(), { empty_window: false })).toThrow(/slope/);
  });
});

describe("plot_convergence", () => {
  const table = () => readCsv(join(SAMPLES, "summary.csv"));

  it("renders and is deterministic", () => {
    const svg = renderConvergence(table());
    expect(svg).toContain("Convergence");
    expect(svg).toBe(renderConvergence(table()));
  });

  it("rejects a single sweep point", () => {
    const bad = parseCsv("eps,sigma_l2,velocity_l2\n0.4,1,1\n");
    expect(() => renderConvergence(bad)).toThrow(/two sweep points/);
  });

  it("rejects non-positive eps", () => {
    const bad = parseCsv("eps,sigma_l2,velocity_l2\n0.4,1,1\n0,1,1\n");
    expect(() => renderConvergence(bad)).toThrow(/positive/);
  });
});

describe("plot_conservation", () => {
  const table = () => readCsv(join(SAMPLES, "conservation.csv"));

  it("renders and is deterministic", () => {
    const svg = renderConservation(table());
    expect(svg).toContain("Invariant drift");
    expect(svg).toBe(renderConservation(table()));
  });

  it("rejects a missing invariant column", () => {
    const bad = parseCsv("t,energy\n0,1\n1,1\n");
    expect(() => renderConservation(bad)).toThrow(/p_l2/);
  });
});

describe("plot_fields", () => {
  it("renders side-by-side panels from the bundled snapshots", () => {
    const names = ["q_t0000.000.rwl", "q_t0001.000.rwl"];
    const dumps = names.map((n) => readRwl(join(SAMPLES, n)));
    const svg = renderFields(dumps, names);
    expect(svg).toContain("<svg");
    expect(svg).toContain("q_t0001.000.rwl");
    expect(svg).toBe(renderFields(dumps, names));
  });

  it("rejects a rank-3 dump", () => {
    const dump = { dims: [4, 4, 4], samples: new Float64Array(64) };
    expect(() => renderFields([dump], ["x.rwl"])).toThrow(/rank/);
  });

  it("rejects an empty input list", () => {
    expect(() => renderFields([], [])).toThrow(SchemaError);
  });
});
