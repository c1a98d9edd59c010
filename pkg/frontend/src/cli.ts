/** Shared --in/--out argument handling for the figure scripts. */

import { writeFileSync } from "fs";
import { SchemaError } from "./formats.js";

export interface Args {
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[], usage: string): Args {
  const inputs: string[] = [];
  let out = "";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) {
        inputs.push(argv[++i]);
      }
    } else if (argv[i] === "--out") {
      out = argv[++i] ?? "";
    } else {
      throw new Error(`unknown argument ${argv[i]}\nusage: ${usage}`);
    }
  }
  if (inputs.length === 0 || !out) {
    throw new Error(`usage: ${usage}`);
  }
  return { inputs, out };
}

/** Run a renderer as a script: schema errors exit 1, usage errors exit 2. */
export function runScript(usage: string, render: (args: Args) => string): void {
  let args: Args;
  try {
    args = parseArgs(process.argv.slice(2), usage);
  } catch (e) {
    console.error((e as Error).message);
    process.exit(2);
  }
  try {
    writeFileSync(args.out, render(args));
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`schema error: ${e.message}`);
      process.exit(1);
    }
    throw e;
  }
  console.log(`wrote ${args.out}`);
}
