import { describe, expect, it } from "vitest";

import { BOHR_PER_ANGSTROM, Vec3, makeShell } from "../src/basis.js";
import { aoIntegrals, boysF0, erf, eri, idx4, overlap } from "../src/integrals.js";

describe("erf", () => {
  // anchors are double-precision libm values
  const anchors: Array<[number, number]> = [
    [0.1, 0.1124629160182849],
    [0.5, 0.5204998778130465],
    [1.0, 0.8427007929497149],
    [2.0, 0.9953222650189527],
    [3.5, 0.9999992569016276],
    [5.0, 0.9999999999984626],
  ];

  it("matches libm to 1e-15", () => {
    for (const [x, want] of anchors) {
      expect(Math.abs(erf(x) - want)).toBeLessThan(1e-15);
      expect(Math.abs(erf(-x) + want)).toBeLessThan(1e-15);
    }
  });

  it("saturates at large argument", () => {
    expect(erf(6)).toBe(1);
    expect(erf(120)).toBe(1);
    expect(erf(0)).toBe(0);
  });
});

describe("boysF0", () => {
  it("matches the closed form away from zero", () => {
    expect(Math.abs(boysF0(0.5) - 0.8556243918921488)).toBeLessThan(1e-15);
    expect(Math.abs(boysF0(20) - 0.19816636482997366)).toBeLessThan(1e-15);
  });

  it("uses the stable small-t expansion", () => {
    expect(boysF0(0)).toBe(1);
    expect(Math.abs(boysF0(1e-13) - (1 - 1e-13 / 3))).toBeLessThan(1e-16);
  });
});

describe("shell normalization", () => {
  it("gives unit self-overlap in both bases", () => {
    for (const basis of ["sto-3g", "sto-6g"]) {
      const sh = makeShell([0, 0, 0], basis);
      expect(Math.abs(overlap(sh, sh) - 1)).toBeLessThan(1e-14);
    }
  });
});

describe("H2 at 1.4 bohr", () => {
  // printed values from a standard reference table for STO-3G H2
  const r: Vec3[] = [
    [0, 0, 0],
    [0, 0, 1.4],
  ];
  const { s, t, g, eNuc } = aoIntegrals(r, "sto-3g");

  it("reproduces tabulated overlap and kinetic entries", () => {
    expect(Math.abs(s[0][1] - 0.6593)).toBeLessThan(5e-5);
    expect(Math.abs(t[0][0] - 0.76)).toBeLessThan(5e-5);
    expect(Math.abs(t[0][1] - 0.2365)).toBeLessThan(5e-5);
  });

  it("reproduces tabulated repulsion integrals", () => {
    expect(Math.abs(g[idx4(2, 0, 0, 0, 0)] - 0.7746)).toBeLessThan(5e-5);
    expect(Math.abs(g[idx4(2, 0, 0, 1, 1)] - 0.5697)).toBeLessThan(5e-5);
  });

  it("computes the nuclear repulsion", () => {
    expect(Math.abs(eNuc - 1 / 1.4)).toBeLessThan(1e-15);
  });
});

describe("integral symmetries", () => {
  // scalene triangle so no point-group symmetry hides index mistakes
  const coords: Vec3[] = [
    [0, 0, 0],
    [0, 0, 1.1 * BOHR_PER_ANGSTROM],
    [0, 0.9 * BOHR_PER_ANGSTROM, 0.3 * BOHR_PER_ANGSTROM],
  ];
  const n = 3;
  const { s, g } = aoIntegrals(coords, "sto-3g");

  it("yields a symmetric overlap with unit diagonal", () => {
    for (let i = 0; i < n; i++) {
      expect(Math.abs(s[i][i] - 1)).toBeLessThan(1e-14);
      for (let j = 0; j < n; j++) expect(s[i][j]).toBe(s[j][i]);
    }
  });

  it("fills all eight ERI permutations identically", () => {
    for (let p = 0; p < n; p++) {
      for (let q = 0; q < n; q++) {
        for (let r = 0; r < n; r++) {
          for (let w = 0; w < n; w++) {
            const v = g[idx4(n, p, q, r, w)];
            expect(g[idx4(n, q, p, r, w)]).toBe(v);
            expect(g[idx4(n, p, q, w, r)]).toBe(v);
            expect(g[idx4(n, r, w, p, q)]).toBe(v);
          }
        }
      }
    }
  });

  it("matches a direct shell-quartet evaluation", () => {
    const shells = coords.map((c) => makeShell(c, "sto-3g"));
    const direct = eri(shells[2], shells[0], shells[1], shells[1]);
    expect(Math.abs(g[idx4(n, 2, 0, 1, 1)] - direct)).toBeLessThan(1e-15);
  });
});
