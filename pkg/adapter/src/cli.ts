#!/usr/bin/env node
/** CLI: annotate --in docs.jsonl --out tokens.jsonl [--batch N] */

import * as fs from "fs";

import { annotateDocs, loadPipeline, parseInputLine } from "./annotate";

function usage(): never {
  console.error("Usage: annotate --in <docs.jsonl> --out <tokens.jsonl> [--batch N]");
  process.exit(2);
}

function parseArgs(argv: string[]): { input: string; output: string; batch: number } {
  let input = "";
  let output = "";
  let batch = 64;
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg === "--in") input = argv[++i] ?? "";
    else if (arg === "--out") output = argv[++i] ?? "";
    else if (arg === "--batch") batch = Number(argv[++i] ?? "");
    else if (arg === "--help" || arg === "-h") usage();
    else {
      console.error(`unknown argument: ${arg}`);
      usage();
    }
  }
  if (!input || !output || !Number.isFinite(batch) || batch < 1) usage();
  return { input, output, batch: Math.floor(batch) };
}

function main(): number {
  const { input, output, batch } = parseArgs(process.argv.slice(2));
  try {
    loadPipeline();
  } catch (err) {
    console.error(`error: failed to load annotation pipeline: ${(err as Error).message}`);
    return 1;
  }
  let raw: string;
  try {
    raw = fs.readFileSync(input, "utf-8");
  } catch (err) {
    console.error(`error: cannot read ${input}: ${(err as Error).message}`);
    return 1;
  }
  const docs = raw
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line, i) => parseInputLine(line, i + 1));

  const { lines, failures } = annotateDocs(docs, batch);
  const payload = lines.map((line) => JSON.stringify(line)).join("\n");
  const tmp = output + ".tmp";
  fs.writeFileSync(tmp, payload.length > 0 ? payload + "\n" : "");
  fs.renameSync(tmp, output);
  console.error(`annotated ${lines.length} documents (${failures} failures) -> ${output}`);
  return 0;
}

process.exit(main());
