/** Restricted Hartree-Fock with DIIS acceleration. */

import { idx4 } from "./integrals.js";
import { Matrix, matmul, solveLinear, symEig, symFunction, transpose, zeros } from "./linalg.js";

export interface ScfResult {
  energy: number;
  /** MO coefficients, columns ordered by orbital energy, signs fixed. */
  c: Matrix;
}

function coulombExchange(g: Float64Array, d: Matrix): { j: Matrix; k: Matrix } {
  const n = d.length;
  const j = zeros(n, n);
  const k = zeros(n, n);
  for (let p = 0; p < n; p++) {
    for (let q = 0; q < n; q++) {
      let jv = 0;
      let kv = 0;
      for (let r = 0; r < n; r++) {
        for (let s = 0; s < n; s++) {
          const drs = d[r][s];
          jv += g[idx4(n, p, q, r, s)] * drs;
          kv += g[idx4(n, p, r, q, s)] * drs;
        }
      }
      j[p][q] = jv;
      k[p][q] = kv;
    }
  }
  return { j, k };
}

function commutator(f: Matrix, d: Matrix, s: Matrix): Matrix {
  const fds = matmul(matmul(f, d), s);
  const sdf = matmul(matmul(s, d), f);
  const n = f.length;
  const out = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) out[i][j] = fds[i][j] - sdf[i][j];
  }
  return out;
}

/**
 * Solve the closed-shell SCF equations.  Convergence requires both the energy
 * change below `conv` and the Fock-density commutator below 1e-9; failure to
 * converge aborts with a diagnostic as the caller cannot use a partial result.
 */
export function restrictedHartreeFock(
  s: Matrix,
  hcore: Matrix,
  g: Float64Array,
  nElec: number,
  eNuc: number,
  maxIter = 200,
  conv = 1e-11,
): ScfResult {
  const n = s.length;
  const nOcc = Math.floor(nElec / 2);
  const x = symFunction(s, (v) => 1 / Math.sqrt(v));
  const xT = transpose(x);
  let d = zeros(n, n);
  let f = hcore.map((row) => row.slice());
  let energy = 0;
  let c: Matrix = zeros(n, n);
  let lastDelta = Infinity;
  const diisF: Matrix[] = [];
  const diisE: number[][] = [];
  let converged = false;
  for (let it = 0; it < maxIter; it++) {
    if (it > 0) {
      const { j, k } = coulombExchange(g, d);
      f = zeros(n, n);
      for (let p = 0; p < n; p++) {
        for (let q = 0; q < n; q++) f[p][q] = hcore[p][q] + j[p][q] - 0.5 * k[p][q];
      }
      const err = matmul(matmul(xT, commutator(f, d, s)), x);
      diisF.push(f.map((row) => row.slice()));
      diisE.push(err.flat());
      if (diisF.length > 8) {
        diisF.shift();
        diisE.shift();
      }
      if (diisF.length > 1) {
        const m = diisF.length;
        const bmat = zeros(m + 1, m + 1);
        for (let a = 0; a <= m; a++) {
          for (let b = 0; b <= m; b++) bmat[a][b] = -1;
        }
        bmat[m][m] = 0;
        for (let a = 0; a < m; a++) {
          for (let b = 0; b < m; b++) {
            let dot = 0;
            for (let i = 0; i < diisE[a].length; i++) dot += diisE[a][i] * diisE[b][i];
            bmat[a][b] = dot;
          }
        }
        const rhs = new Array<number>(m + 1).fill(0);
        rhs[m] = -1;
        try {
          const w = solveLinear(bmat, rhs);
          const mix = zeros(n, n);
          for (let a = 0; a < m; a++) {
            for (let p = 0; p < n; p++) {
              for (let q = 0; q < n; q++) mix[p][q] += w[a] * diisF[a][p][q];
            }
          }
          f = mix;
        } catch {
          // singular DIIS system: keep the plain Fock matrix
        }
      }
    }
    const fp = matmul(matmul(xT, f), x);
    const { vectors: cp } = symEig(fp);
    c = matmul(x, cp);
    d = zeros(n, n);
    for (let p = 0; p < n; p++) {
      for (let q = 0; q < n; q++) {
        let acc = 0;
        for (let o = 0; o < nOcc; o++) acc += c[p][o] * c[q][o];
        d[p][q] = 2 * acc;
      }
    }
    let eNew = eNuc;
    for (let p = 0; p < n; p++) {
      for (let q = 0; q < n; q++) eNew += 0.5 * d[p][q] * (hcore[p][q] + f[p][q]);
    }
    lastDelta = Math.abs(eNew - energy);
    if (it > 1 && lastDelta < conv) {
      let comm = 0;
      const resid = commutator(f, d, s);
      for (const row of resid) {
        for (const v of row) comm = Math.max(comm, Math.abs(v));
      }
      if (comm < 1e-9) {
        energy = eNew;
        converged = true;
        break;
      }
    }
    energy = eNew;
  }
  if (!converged) {
    throw new Error(
      `SCF did not converge in ${maxIter} iterations (last energy change ${lastDelta.toExponential(3)})`,
    );
  }
  for (let col = 0; col < n; col++) {
    let k = 0;
    for (let i = 1; i < n; i++) {
      if (Math.abs(c[i][col]) > Math.abs(c[k][col])) k = i;
    }
    if (c[k][col] < 0) {
      for (let i = 0; i < n; i++) c[i][col] = -c[i][col];
    }
  }
  return { energy, c };
}
