import { describe, expect, it } from "vitest";

import { Matrix, matmul, maxAbs, solveLinear, symEig, symFunction, transpose, zeros } from "../src/linalg.js";

// deterministic 32-bit generator so failures reproduce exactly
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomSymmetric(n: number, rng: () => number): Matrix {
  const a = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      a[i][j] = a[j][i] = 2 * rng() - 1;
    }
  }
  return a;
}

function residual(a: Matrix, b: Matrix): number {
  let worst = 0;
  for (let i = 0; i < a.length; i++) {
    for (let j = 0; j < a.length; j++) worst = Math.max(worst, Math.abs(a[i][j] - b[i][j]));
  }
  return worst;
}

describe("symEig", () => {
  it("reconstructs random symmetric matrices", () => {
    const rng = mulberry32(7);
    for (let draw = 0; draw < 5; draw++) {
      const n = 2 + (draw % 4) * 2;
      const a = randomSymmetric(n, rng);
      const { values, vectors } = symEig(a);
      const lambda = zeros(n, n);
      for (let k = 0; k < n; k++) lambda[k][k] = values[k];
      const rebuilt = matmul(matmul(vectors, lambda), transpose(vectors));
      expect(residual(rebuilt, a)).toBeLessThan(1e-13);
      const gram = matmul(transpose(vectors), vectors);
      for (let i = 0; i < n; i++) gram[i][i] -= 1;
      expect(maxAbs(gram)).toBeLessThan(1e-13);
      for (let k = 1; k < n; k++) expect(values[k]).toBeGreaterThanOrEqual(values[k - 1]);
    }
  });

  it("handles an already diagonal matrix", () => {
    const { values } = symEig([
      [3, 0],
      [0, -1],
    ]);
    expect(values).toEqual([-1, 3]);
  });
});

describe("symFunction", () => {
  it("builds an inverse square root", () => {
    const rng = mulberry32(21);
    const b = randomSymmetric(4, rng);
    // make it positive definite
    const a = matmul(b, transpose(b));
    for (let i = 0; i < 4; i++) a[i][i] += 1;
    const x = symFunction(a, (v) => 1 / Math.sqrt(v));
    const xax = matmul(matmul(x, a), x);
    for (let i = 0; i < 4; i++) xax[i][i] -= 1;
    expect(maxAbs(xax)).toBeLessThan(1e-13);
  });
});

describe("solveLinear", () => {
  it("solves against a known product", () => {
    const rng = mulberry32(4);
    const a = randomSymmetric(5, rng);
    for (let i = 0; i < 5; i++) a[i][i] += 3;
    const want = [1, -2, 0.5, 4, -0.25];
    const b = a.map((row) => row.reduce((acc, v, j) => acc + v * want[j], 0));
    const got = solveLinear(a, b);
    for (let i = 0; i < 5; i++) expect(Math.abs(got[i] - want[i])).toBeLessThan(1e-12);
  });

  it("rejects singular systems", () => {
    expect(() =>
      solveLinear(
        [
          [1, 2],
          [2, 4],
        ],
        [1, 2],
      ),
    ).toThrow(/singular/);
  });
});
