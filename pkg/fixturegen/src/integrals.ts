/** One- and two-electron integrals over contracted s-type Gaussians. */

import { Shell, Vec3, makeShell } from "./basis.js";
import { Matrix, zeros } from "./linalg.js";

const TWO_OVER_SQRT_PI = 2 / Math.sqrt(Math.PI);

/**
 * Error function to double precision: confluent series for small arguments,
 * saturated to +-1 beyond |x| = 6 where erfc underflows the 1e-17 level.
 */
export function erf(x: number): number {
  if (x < 0) return -erf(-x);
  if (x >= 6) return 1;
  const x2 = x * x;
  let term = 1;
  let sum = 1;
  for (let k = 1; k < 200; k++) {
    term *= (2 * x2) / (2 * k + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return TWO_OVER_SQRT_PI * x * Math.exp(-x2) * sum;
}

/** Zeroth Boys function F0(t) with the small-t expansion for stability. */
export function boysF0(t: number): number {
  if (t < 1e-12) return 1 - t / 3;
  return 0.5 * Math.sqrt(Math.PI / t) * erf(Math.sqrt(t));
}

function dist2(a: Vec3, b: Vec3): number {
  const dx = a[0] - b[0];
  const dy = a[1] - b[1];
  const dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

interface PrimitivePair {
  p: number;
  mu: number;
  ab2: number;
  k: number;
  rp: Vec3;
}

function pair(a: number, ra: Vec3, b: number, rb: Vec3): PrimitivePair {
  const p = a + b;
  const mu = (a * b) / p;
  const ab2 = dist2(ra, rb);
  const k = Math.exp(-mu * ab2);
  const rp: Vec3 = [
    (a * ra[0] + b * rb[0]) / p,
    (a * ra[1] + b * rb[1]) / p,
    (a * ra[2] + b * rb[2]) / p,
  ];
  return { p, mu, ab2, k, rp };
}

export function overlap(sh1: Shell, sh2: Shell): number {
  let s = 0;
  for (let i = 0; i < sh1.exps.length; i++) {
    for (let j = 0; j < sh2.exps.length; j++) {
      const { p, k } = pair(sh1.exps[i], sh1.center, sh2.exps[j], sh2.center);
      s += sh1.coefs[i] * sh2.coefs[j] * Math.pow(Math.PI / p, 1.5) * k;
    }
  }
  return s;
}

export function kinetic(sh1: Shell, sh2: Shell): number {
  let t = 0;
  for (let i = 0; i < sh1.exps.length; i++) {
    for (let j = 0; j < sh2.exps.length; j++) {
      const { p, mu, ab2, k } = pair(sh1.exps[i], sh1.center, sh2.exps[j], sh2.center);
      t += sh1.coefs[i] * sh2.coefs[j] * mu * (3 - 2 * mu * ab2) * Math.pow(Math.PI / p, 1.5) * k;
    }
  }
  return t;
}

export function nuclear(sh1: Shell, sh2: Shell, charges: Array<[number, Vec3]>): number {
  let v = 0;
  for (let i = 0; i < sh1.exps.length; i++) {
    for (let j = 0; j < sh2.exps.length; j++) {
      const { p, k, rp } = pair(sh1.exps[i], sh1.center, sh2.exps[j], sh2.center);
      for (const [z, rc] of charges) {
        const t = p * dist2(rp, rc);
        v -= sh1.coefs[i] * sh2.coefs[j] * z * ((2 * Math.PI) / p) * k * boysF0(t);
      }
    }
  }
  return v;
}

/** Two-electron repulsion integral (12|34) in chemists' notation. */
export function eri(sh1: Shell, sh2: Shell, sh3: Shell, sh4: Shell): number {
  let val = 0;
  for (let i = 0; i < sh1.exps.length; i++) {
    for (let j = 0; j < sh2.exps.length; j++) {
      const ab = pair(sh1.exps[i], sh1.center, sh2.exps[j], sh2.center);
      const cab = sh1.coefs[i] * sh2.coefs[j];
      for (let k = 0; k < sh3.exps.length; k++) {
        for (let l = 0; l < sh4.exps.length; l++) {
          const cd = pair(sh3.exps[k], sh3.center, sh4.exps[l], sh4.center);
          const t = ((ab.p * cd.p) / (ab.p + cd.p)) * dist2(ab.rp, cd.rp);
          val +=
            cab *
            sh3.coefs[k] *
            sh4.coefs[l] *
            ((2 * Math.pow(Math.PI, 2.5)) / (ab.p * cd.p * Math.sqrt(ab.p + cd.p))) *
            ab.k *
            cd.k *
            boysF0(t);
        }
      }
    }
  }
  return val;
}

export function idx4(n: number, i: number, j: number, k: number, l: number): number {
  return ((i * n + j) * n + k) * n + l;
}

function tri(p: number, q: number): number {
  return (p * (p + 1)) / 2 + q;
}

export interface AoIntegrals {
  s: Matrix;
  t: Matrix;
  v: Matrix;
  /** Full (pq|rs) tensor, chemists' notation, flat n^4 layout. */
  g: Float64Array;
  eNuc: number;
}

/** All AO integrals for hydrogen atoms at the given positions (bohr). */
export function aoIntegrals(coordsBohr: Vec3[], basisName: string): AoIntegrals {
  const shells = coordsBohr.map((r) => makeShell(r, basisName));
  const n = shells.length;
  const charges: Array<[number, Vec3]> = coordsBohr.map((r) => [1.0, r]);
  const s = zeros(n, n);
  const t = zeros(n, n);
  const v = zeros(n, n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      s[i][j] = s[j][i] = overlap(shells[i], shells[j]);
      t[i][j] = t[j][i] = kinetic(shells[i], shells[j]);
      v[i][j] = v[j][i] = nuclear(shells[i], shells[j], charges);
    }
  }
  const g = new Float64Array(n * n * n * n);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j <= i; j++) {
      for (let k = 0; k < n; k++) {
        for (let l = 0; l <= k; l++) {
          if (tri(i, j) < tri(k, l)) continue;
          const val = eri(shells[i], shells[j], shells[k], shells[l]);
          for (const [p, q] of [
            [i, j],
            [j, i],
          ]) {
            for (const [r, w] of [
              [k, l],
              [l, k],
            ]) {
              g[idx4(n, p, q, r, w)] = val;
              g[idx4(n, r, w, p, q)] = val;
            }
          }
        }
      }
    }
  }
  let eNuc = 0;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      eNuc += 1 / Math.sqrt(dist2(coordsBohr[i], coordsBohr[j]));
    }
  }
  return { s, t, v, g, eNuc };
}
