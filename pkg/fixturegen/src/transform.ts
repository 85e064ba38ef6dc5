/** AO to MO integral transformation and orbital constructions. */

import { idx4 } from "./integrals.js";
import { Matrix, matmul, symFunction, transpose } from "./linalg.js";

/** Contract c into the leading axis and cycle it to the back: four calls give the full transform. */
function contractLeading(g: Float64Array, n: number, c: Matrix): Float64Array {
  const out = new Float64Array(g.length);
  for (let q = 0; q < n; q++) {
    for (let r = 0; r < n; r++) {
      for (let s = 0; s < n; s++) {
        for (let i = 0; i < n; i++) {
          let acc = 0;
          for (let p = 0; p < n; p++) acc += c[p][i] * g[idx4(n, p, q, r, s)];
          out[idx4(n, q, r, s, i)] = acc;
        }
      }
    }
  }
  return out;
}

export interface MoIntegrals {
  h1: Matrix;
  /** Full (pq|rs) tensor in the MO basis, flat n^4 layout. */
  g2: Float64Array;
}

/** Transform core Hamiltonian and ERI tensor into the basis of columns of c. */
export function aoToMo(c: Matrix, hcore: Matrix, g: Float64Array): MoIntegrals {
  const n = c.length;
  const h1 = matmul(matmul(transpose(c), hcore), c);
  let gMo = g;
  for (let stage = 0; stage < 4; stage++) gMo = contractLeading(gMo, n, c);
  return { h1, g2: gMo };
}

/** Symmetrically orthogonalized (Loewdin) orbitals: columns of S^(-1/2). */
export function loewdinOrbitals(s: Matrix): Matrix {
  return symFunction(s, (v) => 1 / Math.sqrt(v));
}

/** Flush entries below tol to exact zero, in place. */
export function flushMatrix(a: Matrix, tol: number): void {
  for (const row of a) {
    for (let j = 0; j < row.length; j++) {
      if (Math.abs(row[j]) < tol) row[j] = 0;
    }
  }
}

export function flushTensor(a: Float64Array, tol: number): void {
  for (let i = 0; i < a.length; i++) {
    if (Math.abs(a[i]) < tol) a[i] = 0;
  }
}

export function orthonormalityResidual(u: Matrix): number {
  const utu = matmul(transpose(u), u);
  let worst = 0;
  for (let i = 0; i < utu.length; i++) {
    for (let j = 0; j < utu.length; j++) {
      worst = Math.max(worst, Math.abs(utu[i][j] - (i === j ? 1 : 0)));
    }
  }
  return worst;
}
