/** Command-line entry: regenerate FCIDUMP fixtures and, optionally, references. */

import { mkdirSync, writeFileSync } from "node:fs";
import { join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { FixtureSpec, loadFixtureSpecs } from "./config.js";
import { GeneratedFixture, generateAll } from "./generate.js";
import { PrimaryCli, cliEnergy, defaultPrimary } from "./primary.js";

function sortedKeys(obj: Record<string, unknown>): Record<string, unknown> {
  return Object.fromEntries(Object.entries(obj).sort(([a], [b]) => (a < b ? -1 : 1)));
}

function referencesEntry(
  spec: FixtureSpec,
  nOrb: number,
  hfEnergy: number,
  fciEnergy: number | null,
): Record<string, unknown> {
  const entry: Record<string, unknown> = {
    file: `${spec.name}.fcidump`,
    basis: spec.basis,
    unit: spec.unit,
    geometry: spec.geometry.map((r, i) => [spec.species[i], [r[0], r[1], r[2]]]),
    n_orb: nOrb,
    n_elec: spec.nElec,
    ms2: 0,
    hf_energy: hfEnergy,
    fci_energy: fciEnergy,
  };
  if (spec.orbitals === "loewdin") {
    entry.orbitals = "loewdin";
    entry.rotation_from = spec.rotationFrom;
  }
  return sortedKeys(entry);
}

function writeFixtureFiles(outDir: string, fixture: GeneratedFixture): string[] {
  const written: string[] = [];
  for (const [name, content] of fixture.files) {
    const path = join(outDir, name);
    writeFileSync(path, content, "ascii");
    written.push(path);
  }
  return written;
}

export interface MainOptions {
  config: string;
  out: string;
  references: boolean;
  python: string;
}

export function parseMainArgs(argv: string[]): MainOptions {
  const { values } = parseArgs({
    args: argv,
    options: {
      config: { type: "string", default: "fixtures.toml" },
      out: { type: "string", default: "out" },
      references: { type: "boolean", default: false },
      python: { type: "string", default: "python3" },
    },
  });
  return values as MainOptions;
}

/** Generate all fixtures from the config into the output directory. */
export function main(argv: string[]): void {
  const opts = parseMainArgs(argv);
  const specs = loadFixtureSpecs(opts.config);
  const outDir = resolve(opts.out);
  mkdirSync(outDir, { recursive: true });
  const fixtures = generateAll(specs);
  let cli: PrimaryCli | null = null;
  const references: Record<string, unknown> = {};
  for (const fixture of fixtures) {
    writeFixtureFiles(outDir, fixture);
    const spec = fixture.spec;
    if (!opts.references) {
      console.log(`${spec.name}: SCF ${fixture.scfEnergy.toFixed(10)}`);
      continue;
    }
    cli = cli ?? defaultPrimary(opts.python);
    const dumpPath = join(outDir, `${spec.name}.fcidump`);
    const hf = cliEnergy(cli, "hf", dumpPath);
    if (spec.orbitals === "canonical" && Math.abs(hf - fixture.scfEnergy) > 5e-10) {
      throw new Error(
        `${spec.name}: determinant energy ${hf} disagrees with SCF ${fixture.scfEnergy}`,
      );
    }
    const fci = spec.fci ? cliEnergy(cli, "fci", dumpPath) : null;
    references[spec.name] = referencesEntry(spec, fixture.ints.nOrb, hf, fci);
    const fciText = fci === null ? "(no FCI)" : `FCI ${fci.toFixed(10)}`;
    console.log(`${spec.name}: HF ${hf.toFixed(10)}  ${fciText}`);
  }
  if (opts.references) {
    writeFileSync(join(outDir, "references.json"), JSON.stringify(sortedKeys(references), null, 1) + "\n");
    console.log(`wrote ${join(outDir, "references.json")}`);
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  resolve(process.argv[1]) === fileURLToPath(import.meta.url);

if (invokedDirectly) {
  try {
    main(process.argv.slice(2));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exitCode = 1;
  }
}
