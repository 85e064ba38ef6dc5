/** Fixture pipeline: geometry -> AO integrals -> SCF -> MO FCIDUMP text. */

import { BOHR_PER_ANGSTROM, Vec3 } from "./basis.js";
import { FixtureSpec } from "./config.js";
import { MolecularIntegrals, formatFcidump, formatMatrix } from "./fcidump.js";
import { aoIntegrals } from "./integrals.js";
import { Matrix, matmul, transpose, zeros } from "./linalg.js";
import { restrictedHartreeFock } from "./scf.js";
import { aoToMo, flushMatrix, flushTensor, loewdinOrbitals, orthonormalityResidual } from "./transform.js";

const ZERO_TOL = 1e-12;

export interface GeneratedFixture {
  spec: FixtureSpec;
  ints: MolecularIntegrals;
  /** Converged SCF energy of the canonical solution for this geometry. */
  scfEnergy: number;
  /** Output file name -> text content (.fcidump, and .u for loewdin variants). */
  files: Map<string, string>;
}

interface CanonicalRecord {
  c: Matrix;
  s: Matrix;
}

/** Generate one fixture; canonical results feed later loewdin variants through the cache. */
export function generateFixture(
  spec: FixtureSpec,
  cache: Map<string, CanonicalRecord>,
): GeneratedFixture {
  const coords = spec.geometry.map(
    (r): Vec3 => [r[0] * BOHR_PER_ANGSTROM, r[1] * BOHR_PER_ANGSTROM, r[2] * BOHR_PER_ANGSTROM],
  );
  const { s, t, v, g, eNuc } = aoIntegrals(coords, spec.basis);
  const n = s.length;
  const hcore = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) hcore[i][j] = t[i][j] + v[i][j];
  }
  const { energy: scfEnergy, c } = restrictedHartreeFock(s, hcore, g, spec.nElec, eNuc);
  const files = new Map<string, string>();
  let orbitalFrame = c;
  if (spec.orbitals === "loewdin") {
    const canonical = cache.get(spec.rotationFrom!);
    if (!canonical) {
      throw new Error(`fixture '${spec.name}': canonical run '${spec.rotationFrom}' not generated yet`);
    }
    orbitalFrame = loewdinOrbitals(s);
    const u = matmul(matmul(transpose(canonical.c), s), orbitalFrame);
    const residual = orthonormalityResidual(u);
    if (residual > 1e-10) {
      throw new Error(`fixture '${spec.name}': rotation not orthonormal (residual ${residual.toExponential(2)})`);
    }
    files.set(`${spec.name}.u`, formatMatrix(u));
  } else {
    cache.set(spec.name, { c, s });
  }
  const { h1, g2 } = aoToMo(orbitalFrame, hcore, g);
  flushMatrix(h1, ZERO_TOL);
  flushTensor(g2, ZERO_TOL);
  const ints: MolecularIntegrals = { nOrb: n, nElec: spec.nElec, ms2: 0, eCore: eNuc, h1, g2 };
  files.set(`${spec.name}.fcidump`, formatFcidump(ints));
  return { spec, ints, scfEnergy, files };
}

/** Generate every fixture in order (canonical frames before their variants). */
export function generateAll(specs: FixtureSpec[]): GeneratedFixture[] {
  const cache = new Map<string, CanonicalRecord>();
  return specs.map((spec) => generateFixture(spec, cache));
}
