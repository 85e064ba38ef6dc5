/** Geometry-spec collection loaded from a TOML file. */

import { readFileSync } from "node:fs";
import { parse } from "smol-toml";

import { BASES, Vec3 } from "./basis.js";

export interface FixtureSpec {
  name: string;
  basis: string;
  unit: "angstrom";
  species: string[];
  /** Coordinates in angstrom, one row per atom. */
  geometry: Vec3[];
  nElec: number;
  /** Whether a full-CI reference should be recorded for this system. */
  fci: boolean;
  orbitals: "canonical" | "loewdin";
  /** Canonical fixture supplying the reference frame for a loewdin variant. */
  rotationFrom?: string;
}

function fail(name: string, message: string): never {
  throw new Error(`fixture '${name}': ${message}`);
}

function asVec3List(name: string, value: unknown): Vec3[] {
  if (!Array.isArray(value) || value.length === 0) fail(name, "geometry must be a non-empty array");
  return value.map((row) => {
    if (!Array.isArray(row) || row.length !== 3 || row.some((x) => typeof x !== "number")) {
      fail(name, "each geometry row must be three numbers");
    }
    return [row[0], row[1], row[2]] as Vec3;
  });
}

export function validateSpec(raw: Record<string, unknown>, seen: Set<string>): FixtureSpec {
  const name = typeof raw.name === "string" ? raw.name : fail("<unnamed>", "missing name");
  if (seen.has(name)) fail(name, "duplicate name");
  const basis = typeof raw.basis === "string" ? raw.basis.toLowerCase() : fail(name, "missing basis");
  if (!BASES[basis]) fail(name, `unknown basis '${basis}'`);
  if (raw.unit !== undefined && raw.unit !== "angstrom") fail(name, "unit must be angstrom");
  const geometry = asVec3List(name, raw.geometry);
  const species = Array.isArray(raw.species) ? raw.species.map(String) : geometry.map(() => "H");
  if (species.length !== geometry.length) fail(name, "species and geometry lengths differ");
  if (species.some((s) => s !== "H")) fail(name, "only hydrogen systems are supported");
  const nElec = typeof raw.n_elec === "number" ? raw.n_elec : fail(name, "missing n_elec");
  if (!Number.isInteger(nElec) || nElec <= 0 || nElec % 2 !== 0 || nElec > 2 * geometry.length) {
    fail(name, "n_elec must be a positive even count within the orbital space");
  }
  const orbitals = raw.orbitals === undefined ? "canonical" : raw.orbitals;
  if (orbitals !== "canonical" && orbitals !== "loewdin") {
    fail(name, "orbitals must be 'canonical' or 'loewdin'");
  }
  const rotationFrom = raw.rotation_from === undefined ? undefined : String(raw.rotation_from);
  if (orbitals === "loewdin" && !rotationFrom) fail(name, "loewdin variant needs rotation_from");
  if (orbitals === "canonical" && rotationFrom) fail(name, "rotation_from requires loewdin orbitals");
  const fci = raw.fci === undefined ? true : raw.fci;
  if (typeof fci !== "boolean") fail(name, "fci must be a boolean");
  return { name, basis, unit: "angstrom", species, geometry, nElec, fci, orbitals, rotationFrom };
}

/** Load and validate all [[fixture]] entries from a TOML file. */
export function loadFixtureSpecs(path: string): FixtureSpec[] {
  const doc = parse(readFileSync(path, "utf8")) as Record<string, unknown>;
  const entries = doc.fixture;
  if (!Array.isArray(entries) || entries.length === 0) {
    throw new Error(`${path}: expected at least one [[fixture]] table`);
  }
  const seen = new Set<string>();
  const specs = entries.map((raw) => {
    const spec = validateSpec(raw as Record<string, unknown>, seen);
    seen.add(spec.name);
    return spec;
  });
  for (const spec of specs) {
    if (spec.rotationFrom && !seen.has(spec.rotationFrom)) {
      throw new Error(`fixture '${spec.name}': rotation_from '${spec.rotationFrom}' is not defined`);
    }
  }
  return specs;
}
