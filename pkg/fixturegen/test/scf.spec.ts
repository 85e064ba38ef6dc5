import { readFileSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { Vec3 } from "../src/basis.js";
import { loadFixtureSpecs } from "../src/config.js";
import { aoIntegrals } from "../src/integrals.js";
import { zeros } from "../src/linalg.js";
import { restrictedHartreeFock } from "../src/scf.js";
import { generateAll } from "../src/generate.js";

const here = dirname(fileURLToPath(import.meta.url));
const repoRoot = resolve(here, "..", "..");
const referencesPath = join(repoRoot, "tests", "fixtures", "references.json");

function solve(coordsBohr: Vec3[], basis: string, nElec: number) {
  const { s, t, v, g, eNuc } = aoIntegrals(coordsBohr, basis);
  const n = s.length;
  const hcore = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) hcore[i][j] = t[i][j] + v[i][j];
  }
  return restrictedHartreeFock(s, hcore, g, nElec, eNuc);
}

describe("restrictedHartreeFock", () => {
  it("reproduces the textbook H2 energy at 1.4 bohr", () => {
    const { energy } = solve(
      [
        [0, 0, 0],
        [0, 0, 1.4],
      ],
      "sto-3g",
      2,
    );
    expect(Math.abs(energy - -1.1167)).toBeLessThan(1e-4);
  });

  it("fixes deterministic column signs", () => {
    const { c } = solve(
      [
        [0, 0, 0],
        [0, 0, 1.4],
      ],
      "sto-3g",
      2,
    );
    for (let col = 0; col < 2; col++) {
      let k = 0;
      for (let i = 1; i < 2; i++) {
        if (Math.abs(c[i][col]) > Math.abs(c[k][col])) k = i;
      }
      expect(c[k][col]).toBeGreaterThan(0);
    }
  });

  it("aborts with a diagnostic when the iteration cap is too small", () => {
    const { s, t, v, g, eNuc } = aoIntegrals(
      [
        [0, 0, 0],
        [0, 0, 1.4],
      ],
      "sto-3g",
    );
    const hcore = [
      [t[0][0] + v[0][0], t[0][1] + v[0][1]],
      [t[1][0] + v[1][0], t[1][1] + v[1][1]],
    ];
    expect(() => restrictedHartreeFock(s, hcore, g, 2, eNuc, 2)).toThrow(/SCF did not converge/);
  });
});

describe("SCF against the recorded fixture energies", () => {
  // canonical fixtures record the aufbau determinant energy, which equals the
  // SCF energy in the canonical orbital basis
  const references = JSON.parse(readFileSync(referencesPath, "utf8")) as Record<
    string,
    { hf_energy: number }
  >;
  const specs = loadFixtureSpecs(join(here, "..", "fixtures.toml"));
  const generated = generateAll(specs);

  it("matches every canonical hf_energy to 1e-9", () => {
    for (const fixture of generated) {
      if (fixture.spec.orbitals !== "canonical") continue;
      const want = references[fixture.spec.name].hf_energy;
      expect(
        Math.abs(fixture.scfEnergy - want),
        `${fixture.spec.name}: got ${fixture.scfEnergy}, want ${want}`,
      ).toBeLessThan(1e-9);
    }
  });
});
