/** Bridge to the qcmps command line for reference HF/FCI energies. */

import { execFileSync } from "node:child_process";
import { existsSync } from "node:fs";
import { delimiter, dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

export interface PrimaryCli {
  python: string;
  repoRoot: string;
}

/** Locate the repository root relative to this package. */
export function defaultPrimary(python = "python3"): PrimaryCli {
  const here = dirname(fileURLToPath(import.meta.url));
  const repoRoot = resolve(here, "..", "..");
  if (!existsSync(join(repoRoot, "src", "qcmps"))) {
    throw new Error(`cannot locate the qcmps package above ${here}`);
  }
  return { python, repoRoot };
}

function run(cli: PrimaryCli, args: string[]): string {
  const src = join(cli.repoRoot, "src");
  const existing = process.env.PYTHONPATH;
  return execFileSync(cli.python, ["-m", "qcmps.cli", ...args], {
    cwd: cli.repoRoot,
    encoding: "utf8",
    maxBuffer: 64 * 1024 * 1024,
    env: { ...process.env, PYTHONPATH: existing ? `${src}${delimiter}${existing}` : src },
  });
}

/** Energy from the `hf` or `fci` subcommand on one FCIDUMP file. */
export function cliEnergy(cli: PrimaryCli, subcommand: "hf" | "fci", fcidumpPath: string): number {
  const stdout = run(cli, [subcommand, "--fcidump", fcidumpPath]);
  const payload = JSON.parse(stdout) as { energy?: number };
  if (typeof payload.energy !== "number") {
    throw new Error(`${subcommand} output has no energy field`);
  }
  return payload.energy;
}
