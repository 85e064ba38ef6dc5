/** Contracted s-type Gaussian basis data for hydrogen. */

export const BOHR_PER_ANGSTROM = 1.0 / 0.52917721092;

export type Vec3 = [number, number, number];

/** (exponent, contraction coefficient) pairs, unnormalized primitives. */
export const BASES: Record<string, ReadonlyArray<readonly [number, number]>> = {
  "sto-3g": [
    [3.42525091, 0.15432897],
    [0.62391373, 0.53532814],
    [0.1688554, 0.44463454],
  ],
  "sto-6g": [
    [35.52322122, 0.00916359628],
    [6.513143725, 0.04936149294],
    [1.822142904, 0.1685383049],
    [0.625955266, 0.3705627997],
    [0.243076747, 0.4164915298],
    [0.100112428, 0.1303340841],
  ],
};

export interface Shell {
  center: Vec3;
  exps: number[];
  coefs: number[];
}

/** Build a contracted s shell at a center, normalized to unit self-overlap. */
export function makeShell(center: Vec3, basisName: string): Shell {
  const primitives = BASES[basisName];
  if (!primitives) throw new Error(`unknown basis '${basisName}'`);
  const exps = primitives.map(([a]) => a);
  const raw = primitives.map(([a, c]) => c * Math.pow((2 * a) / Math.PI, 0.75));
  let selfOverlap = 0;
  for (let i = 0; i < exps.length; i++) {
    for (let j = 0; j < exps.length; j++) {
      selfOverlap += raw[i] * raw[j] * Math.pow(Math.PI / (exps[i] + exps[j]), 1.5);
    }
  }
  const norm = 1 / Math.sqrt(selfOverlap);
  return { center: [...center], exps, coefs: raw.map((c) => c * norm) };
}
