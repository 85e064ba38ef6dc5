/** Dense real linear algebra for small symmetric problems (n of order 10). */

export type Matrix = number[][];

export function zeros(rows: number, cols: number): Matrix {
  const out: Matrix = [];
  for (let i = 0; i < rows; i++) out.push(new Array<number>(cols).fill(0));
  return out;
}

export function identity(n: number): Matrix {
  const out = zeros(n, n);
  for (let i = 0; i < n; i++) out[i][i] = 1;
  return out;
}

export function transpose(a: Matrix): Matrix {
  const out = zeros(a[0].length, a.length);
  for (let i = 0; i < a.length; i++) {
    for (let j = 0; j < a[0].length; j++) out[j][i] = a[i][j];
  }
  return out;
}

export function matmul(a: Matrix, b: Matrix): Matrix {
  const n = a.length;
  const k = b.length;
  const m = b[0].length;
  const out = zeros(n, m);
  for (let i = 0; i < n; i++) {
    for (let p = 0; p < k; p++) {
      const aip = a[i][p];
      if (aip === 0) continue;
      for (let j = 0; j < m; j++) out[i][j] += aip * b[p][j];
    }
  }
  return out;
}

export function addScaled(a: Matrix, b: Matrix, factor: number): Matrix {
  const out = zeros(a.length, a[0].length);
  for (let i = 0; i < a.length; i++) {
    for (let j = 0; j < a[0].length; j++) out[i][j] = a[i][j] + factor * b[i][j];
  }
  return out;
}

export function maxAbs(a: Matrix): number {
  let best = 0;
  for (const row of a) {
    for (const v of row) best = Math.max(best, Math.abs(v));
  }
  return best;
}

export interface EigResult {
  /** Eigenvalues in ascending order. */
  values: number[];
  /** vectors[i][k] is component i of the eigenvector for values[k]. */
  vectors: Matrix;
}

/**
 * Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
 * Converges quadratically; the sweep cap is generous for the sizes used here.
 */
export function symEig(a: Matrix): EigResult {
  const n = a.length;
  const w = a.map((row) => row.slice());
  const v = identity(n);
  const scale = Math.max(maxAbs(a), 1e-300);
  for (let sweep = 0; sweep < 100; sweep++) {
    let off = 0;
    for (let p = 0; p < n; p++) {
      for (let q = p + 1; q < n; q++) off = Math.max(off, Math.abs(w[p][q]));
    }
    if (off <= 1e-15 * scale) break;
    for (let p = 0; p < n; p++) {
      for (let q = p + 1; q < n; q++) {
        const apq = w[p][q];
        if (Math.abs(apq) <= 1e-18 * scale) continue;
        const tau = (w[q][q] - w[p][p]) / (2 * apq);
        const t = Math.sign(tau || 1) / (Math.abs(tau) + Math.sqrt(1 + tau * tau));
        const c = 1 / Math.sqrt(1 + t * t);
        const s = t * c;
        for (let k = 0; k < n; k++) {
          const wkp = w[k][p];
          const wkq = w[k][q];
          w[k][p] = c * wkp - s * wkq;
          w[k][q] = s * wkp + c * wkq;
        }
        for (let k = 0; k < n; k++) {
          const wpk = w[p][k];
          const wqk = w[q][k];
          w[p][k] = c * wpk - s * wqk;
          w[q][k] = s * wpk + c * wqk;
        }
        for (let k = 0; k < n; k++) {
          const vkp = v[k][p];
          const vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  const order = Array.from({ length: n }, (_, i) => i).sort((x, y) => w[x][x] - w[y][y]);
  const values = order.map((k) => w[k][k]);
  const vectors = zeros(n, n);
  for (let col = 0; col < n; col++) {
    for (let i = 0; i < n; i++) vectors[i][col] = v[i][order[col]];
  }
  return { values, vectors };
}

/** Apply f to the eigenvalues of a symmetric matrix: U f(L) U^T. */
export function symFunction(a: Matrix, f: (x: number) => number): Matrix {
  const { values, vectors } = symEig(a);
  const n = a.length;
  const out = zeros(n, n);
  for (let k = 0; k < n; k++) {
    const fk = f(values[k]);
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) out[i][j] += fk * vectors[i][k] * vectors[j][k];
    }
  }
  return out;
}

/** Solve a x = b by Gaussian elimination with partial pivoting. */
export function solveLinear(a: Matrix, b: number[]): number[] {
  const n = a.length;
  const m = a.map((row, i) => [...row, b[i]]);
  for (let col = 0; col < n; col++) {
    let pivot = col;
    for (let r = col + 1; r < n; r++) {
      if (Math.abs(m[r][col]) > Math.abs(m[pivot][col])) pivot = r;
    }
    if (Math.abs(m[pivot][col]) < 1e-14) throw new Error("singular linear system");
    [m[col], m[pivot]] = [m[pivot], m[col]];
    for (let r = col + 1; r < n; r++) {
      const factor = m[r][col] / m[col][col];
      if (factor === 0) continue;
      for (let c = col; c <= n; c++) m[r][c] -= factor * m[col][c];
    }
  }
  const x = new Array<number>(n).fill(0);
  for (let r = n - 1; r >= 0; r--) {
    let acc = m[r][n];
    for (let c = r + 1; c < n; c++) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}
