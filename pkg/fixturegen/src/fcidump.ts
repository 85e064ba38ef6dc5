/** FCIDUMP text emission and a reader for round-trip checks. */

import { idx4 } from "./integrals.js";
import { Matrix, zeros } from "./linalg.js";

export interface MolecularIntegrals {
  nOrb: number;
  nElec: number;
  ms2: number;
  eCore: number;
  /** Symmetric one-electron matrix in the orbital basis. */
  h1: Matrix;
  /** Full (pq|rs) chemists'-notation tensor, flat nOrb^4 layout. */
  g2: Float64Array;
}

/** Fortran-style scientific formatting with 17 significant digits (%.16E). */
export function fmtE(v: number): string {
  const raw = (Object.is(v, -0) ? 0 : v).toExponential(16);
  const m = raw.match(/^(-?\d\.\d+)e([+-])(\d+)$/);
  if (!m) throw new Error(`unformattable value ${v}`);
  return `${m[1]}E${m[2]}${m[3].padStart(2, "0")}`;
}

function record(value: number, i: number, j: number, k: number, l: number): string {
  const pad = (x: number) => String(x).padStart(4, " ");
  return ` ${fmtE(value)} ${pad(i)} ${pad(j)} ${pad(k)} ${pad(l)}`;
}

function tri(p: number, q: number): number {
  return (p * (p + 1)) / 2 + q;
}

/**
 * Serialize integrals to FCIDUMP text: canonical two-electron records first
 * (p >= q, r >= s, (pq) >= (rs)), then the lower triangle of h1, then the
 * mandatory core-energy record.  Exact zeros are suppressed.
 */
export function formatFcidump(ints: MolecularIntegrals): string {
  const n = ints.nOrb;
  const out: string[] = [];
  out.push(` &FCI NORB=${n},NELEC=${ints.nElec},MS2=${ints.ms2},`);
  out.push("  ORBSYM=" + Array(n).fill("1").join(",") + ",");
  out.push("  ISYM=1,");
  out.push(" &END");
  for (let p = 0; p < n; p++) {
    for (let q = 0; q <= p; q++) {
      const pq = tri(p, q);
      for (let r = 0; r < n; r++) {
        for (let s = 0; s <= r; s++) {
          if (tri(r, s) > pq) continue;
          const v = ints.g2[idx4(n, p, q, r, s)];
          if (v !== 0) out.push(record(v, p + 1, q + 1, r + 1, s + 1));
        }
      }
    }
  }
  for (let p = 0; p < n; p++) {
    for (let q = 0; q <= p; q++) {
      if (ints.h1[p][q] !== 0) out.push(record(ints.h1[p][q], p + 1, q + 1, 0, 0));
    }
  }
  out.push(record(ints.eCore, 0, 0, 0, 0));
  return out.join("\n") + "\n";
}

/** Parse FCIDUMP text, expanding the 8-fold ERI symmetry to a full tensor. */
export function parseFcidump(text: string): MolecularIntegrals {
  const lines = text.split(/\r?\n/);
  let header = "";
  let body = 0;
  for (let i = 0; i < lines.length; i++) {
    const trimmed = lines[i].trim();
    header += " " + trimmed;
    if (trimmed === "&END" || trimmed === "/" || trimmed.endsWith("&END")) {
      body = i + 1;
      break;
    }
  }
  const field = (name: string): number => {
    const m = header.match(new RegExp(`${name}\\s*=\\s*(-?\\d+)`, "i"));
    if (!m) throw new Error(`FCIDUMP header missing ${name}`);
    return parseInt(m[1], 10);
  };
  const n = field("NORB");
  const nElec = field("NELEC");
  const ms2 = field("MS2");
  const h1 = zeros(n, n);
  const g2 = new Float64Array(n * n * n * n);
  let eCore = 0;
  for (let ln = body; ln < lines.length; ln++) {
    const parts = lines[ln].trim().split(/\s+/);
    if (parts.length === 1 && parts[0] === "") continue;
    if (parts.length !== 5) throw new Error(`malformed record on line ${ln + 1}`);
    const value = parseFloat(parts[0].replace(/[dD]/, "E"));
    if (Number.isNaN(value)) throw new Error(`non-numeric value on line ${ln + 1}`);
    const [i, j, k, l] = parts.slice(1).map((x) => parseInt(x, 10));
    for (const idx of [i, j, k, l]) {
      if (Number.isNaN(idx) || idx < 0 || idx > n) throw new Error(`index out of range on line ${ln + 1}`);
    }
    if (i === 0 && j === 0 && k === 0 && l === 0) {
      eCore = value;
    } else if (k === 0 && l === 0) {
      h1[i - 1][j - 1] = value;
      h1[j - 1][i - 1] = value;
    } else {
      const p = i - 1;
      const q = j - 1;
      const r = k - 1;
      const s = l - 1;
      for (const [a, b] of [
        [p, q],
        [q, p],
      ]) {
        for (const [c, d] of [
          [r, s],
          [s, r],
        ]) {
          g2[idx4(n, a, b, c, d)] = value;
          g2[idx4(n, c, d, a, b)] = value;
        }
      }
    }
  }
  return { nOrb: n, nElec, ms2, eCore, h1, g2 };
}

/** One row per line, %.16E entries separated by single spaces. */
export function formatMatrix(u: Matrix): string {
  return u.map((row) => row.map(fmtE).join(" ")).join("\n") + "\n";
}

export function parseMatrix(text: string): Matrix {
  return text
    .trim()
    .split(/\r?\n/)
    .map((line) => line.trim().split(/\s+/).map(parseFloat));
}
