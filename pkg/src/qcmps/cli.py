"""Command-line front end: batch subcommands, machine-readable outputs.

Exit codes: 0 success, 1 usage error, 2 numerical or contract failure.
Diagnostics go to stderr; data goes to --out files or stdout.  Every JSON
document embeds a run manifest (inputs hashed, version, wall time) under
the schema tag "qcmps-result/1".
"""

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import numpy as np

from . import __version__
from .blocks import AnsatzSpec, BlockSpec
from .errors import QcmpsError, ValidationError
from .fcidump import ORDERINGS, SpinOrbitalView, read_fcidump, write_fcidump
from .mps import BOUNDARIES, QcmpsState
from .orbitals import exponentiate_kappa, interaction_matrix, rotate_integrals
from .pauli import build_qubit_hamiltonian, format_polynomial, number_operator, total_spin_operator
from .reference import fci_ground_state, hf_energy
from .vqe import TRACE_COLUMNS, VqeConfig, optimize, scan_layers

SCHEMA = "qcmps-result/1"

_FAMILIES = ("lu", "au", "g2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; route through UsageError -> 1
    def error(self, message):
        raise UsageError(message)


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value


def _read_file(path, purpose):
    try:
        with open(path, "r", encoding="ascii") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {purpose} {path!r}: {exc}") from exc


def _load_matrix(path, purpose):
    text = _read_file(path, purpose)
    try:
        rows = [[float(x) for x in line.split()] for line in text.splitlines() if line.strip()]
        matrix = np.array(rows, dtype=float)
    except ValueError as exc:
        raise ValidationError(f"{purpose} {path!r} is not a numeric matrix: {exc}") from exc
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"{purpose} {path!r} must be square, got shape {matrix.shape}")
    return matrix


def _write_text(path, text):
    with open(path, "w", encoding="ascii") as handle:
        handle.write(text)
        if not text.endswith("\n"):
            handle.write("\n")


def _emit(doc, manifest, out):
    doc = dict(doc)
    doc["schema"] = SCHEMA
    doc["manifest"] = manifest
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True)
    if out:
        _write_text(out, text)
    else:
        print(text)


def _sibling(out, suffix):
    base = out[:-5] if out.endswith(".json") else out
    return base + suffix


def _write_csv(path, header, rows):
    with open(path, "w", encoding="ascii", newline="") as handle:
        writer = csv.writer(handle)
        if header:
            writer.writerow(header)
        writer.writerows(rows)


class _Run:
    """Collects input hashes and output paths for the embedded manifest."""

    def __init__(self, subcommand, config_path=None):
        self.subcommand = subcommand
        self.config_path = config_path
        self.inputs = []
        self.outputs = []
        self.t0 = time.perf_counter()

    def track(self, path):
        if path and path not in self.inputs:
            self.inputs.append(path)

    def manifest(self):
        return {
            "subcommand": self.subcommand,
            "config": self.config_path,
            "inputs": {p: _sha256(p) for p in self.inputs},
            "version": __version__,
            "wall_time_s": round(time.perf_counter() - self.t0, 6),
            "outputs": list(self.outputs),
        }


# config file contract: every VqeConfig field has a key and a default
_CONFIG_KEYS = {
    "system": {"fcidump": str, "ordering": str},
    "ansatz": {"family": str, "n_qubits": int, "n_layers": int},
    "optimizer": {
        "grad_step": float,
        "grad_mode": str,
        "max_iter": int,
        "grad_tol": float,
        "energy_tol": float,
        "restarts": int,
        "rng_seed": int,
        "init_scale": float,
        "boundary": str,
        "threads": int,
    },
    "penalties": {
        "target_n_elec": int,
        "target_s": float,
        "penalty_n": float,
        "penalty_s": float,
    },
}


def _load_config(path):
    text = _read_file(path, "config")
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config {path!r}: {exc}") from exc
    flat = {}
    for section, entries in data.items():
        known = _CONFIG_KEYS.get(section)
        if known is None:
            raise UsageError(f"config {path!r}: unknown section [{section}]")
        if not isinstance(entries, dict):
            raise UsageError(f"config {path!r}: [{section}] must be a table")
        for key, value in entries.items():
            if key not in known:
                raise UsageError(f"config {path!r}: unknown key {key!r} in [{section}]")
            caster = known[key]
            if caster is float and isinstance(value, int):
                value = float(value)
            if not isinstance(value, caster):
                raise UsageError(
                    f"config {path!r}: key {key!r} expects {caster.__name__}, got {type(value).__name__}"
                )
            flat[key] = value
    return flat


def _merge_settings(args):
    settings = _load_config(args.config) if args.config else {}
    overrides = {
        "fcidump": args.fcidump,
        "ordering": args.ordering,
        "family": getattr(args, "block", None),
        "n_qubits": getattr(args, "nq", None),
        "n_layers": getattr(args, "nl", None),
        "rng_seed": getattr(args, "seed", None),
        "restarts": getattr(args, "restarts", None),
        "threads": getattr(args, "threads", None),
        "boundary": getattr(args, "boundary", None),
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    if "fcidump" not in settings:
        raise UsageError("an FCIDUMP is required: pass --fcidump or set [system] fcidump")
    return settings


def _assemble_problem(settings, run):
    path = settings["fcidump"]
    run.track(path)
    try:
        ints = read_fcidump(path)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {path!r}: {exc}") from exc
    view = SpinOrbitalView(ints, ordering=settings.get("ordering", "interleaved"))
    block = BlockSpec(
        settings.get("family", "au"),
        settings.get("n_qubits", 4),
        settings.get("n_layers", 1),
    )
    ansatz = AnsatzSpec(block, 2 * ints.n_orb)
    target_s = settings.get("target_s")
    if target_s is None:
        target_s = 0.5 * ints.ms2
    config = VqeConfig(
        ansatz=ansatz,
        target_n_elec=settings.get("target_n_elec", ints.n_elec),
        target_s=target_s,
        penalty_n=settings.get("penalty_n", 1.0),
        penalty_s=settings.get("penalty_s", 1.0),
        grad_step=settings.get("grad_step", 1e-4),
        grad_mode=settings.get("grad_mode", "blockwise_env"),
        max_iter=settings.get("max_iter", 500),
        grad_tol=settings.get("grad_tol", 1e-5),
        energy_tol=settings.get("energy_tol", 1e-10),
        restarts=settings.get("restarts", 3),
        rng_seed=settings.get("rng_seed", 0),
        init_scale=settings.get("init_scale", 0.1),
        boundary=settings.get("boundary", "trace"),
        threads=settings.get("threads") or os.cpu_count() or 1,
    )
    operators = (
        build_qubit_hamiltonian(view),
        number_operator(view.n_sites),
        total_spin_operator(view),
    )
    return ints, view, config, operators


def _cmd_inspect(args):
    run = _Run("inspect")
    run.track(args.fcidump)
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    g2_values = np.array([abs(rec[-1]) for rec in ints.g2.iter_canonical()] or [0.0])
    doc = {
        "n_orb": ints.n_orb,
        "n_elec": ints.n_elec,
        "ms2": ints.ms2,
        "e_core": ints.e_core,
        "one_electron_nonzero": int(np.count_nonzero(ints.h1)),
        "two_electron_stored": int(np.count_nonzero(g2_values)),
        "max_abs_h1": float(np.max(np.abs(ints.h1))) if ints.n_orb else 0.0,
        "max_abs_g2": float(np.max(g2_values)),
        "records_parsed": ints.parse_report.n_records if ints.parse_report else None,
        "duplicate_records": ints.parse_report.n_duplicates if ints.parse_report else None,
        "source": ints.source_label,
    }
    if args.out:
        run.outputs.append(args.out)
    _emit(doc, run.manifest(), args.out)
    return 0


def _cmd_map(args):
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    view = SpinOrbitalView(ints, ordering=args.ordering or "interleaved")
    text = format_polynomial(build_qubit_hamiltonian(view))
    if args.out:
        _write_text(args.out, text)
    else:
        print(text)
    return 0


def _cmd_hf(args):
    run = _Run("hf")
    run.track(args.fcidump)
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    view = SpinOrbitalView(ints, ordering=args.ordering or "interleaved")
    doc = {
        "energy": hf_energy(view),
        "n_orb": ints.n_orb,
        "n_elec": ints.n_elec,
        "source": ints.source_label,
    }
    if args.out:
        run.outputs.append(args.out)
    _emit(doc, run.manifest(), args.out)
    return 0


def _cmd_fci(args):
    run = _Run("fci")
    run.track(args.fcidump)
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    view = SpinOrbitalView(ints, ordering=args.ordering or "interleaved")
    energy, _, info = fci_ground_state(view, seed=args.seed if args.seed is not None else 0xC0FFEE)
    doc = {
        "energy": energy,
        "n_orb": ints.n_orb,
        "n_elec": ints.n_elec,
        "solver": info,
        "source": ints.source_label,
    }
    if args.out:
        run.outputs.append(args.out)
    _emit(doc, run.manifest(), args.out)
    return 0


def _cmd_vqe(args):
    run = _Run("vqe", config_path=args.config)
    if args.config:
        run.track(args.config)
    settings = _merge_settings(args)
    ints, view, config, operators = _assemble_problem(settings, run)
    hamiltonian, number_op, spin_op = operators
    result = optimize(
        config,
        hamiltonian,
        number_op,
        spin_op,
        metadata={"ordering": view.ordering, "source": settings["fcidump"]},
    )
    doc = result.to_dict()
    if args.out:
        trace_path = _sibling(args.out, ".trace.csv")
        best = result.restarts[result.best_restart]
        _write_csv(trace_path, TRACE_COLUMNS, best["trace"])
        run.outputs.extend([args.out, trace_path])
    _emit(doc, run.manifest(), args.out)
    return 0


def _cmd_layers(args):
    run = _Run("layers", config_path=args.config)
    if args.config:
        run.track(args.config)
    settings = _merge_settings(args)
    ints, view, config, operators = _assemble_problem(settings, run)
    hamiltonian, number_op, spin_op = operators
    scan = scan_layers(
        config,
        hamiltonian,
        number_op,
        spin_op,
        max_layers=args.max_layers,
        threshold=args.threshold,
    )
    doc = {
        "chosen": scan.chosen,
        "layers": scan.layers,
        "energies": scan.energies,
        "saturated": scan.saturated,
        "threshold": scan.threshold,
        "family": config.ansatz.block.family,
        "n_qubits": config.ansatz.block.n_qubits,
    }
    if args.out:
        run.outputs.append(args.out)
    _emit(doc, run.manifest(), args.out)
    return 0


def _state_from_result(path, n_sites):
    try:
        doc = json.loads(_read_file(path, "result file"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"result file {path!r} is not JSON: {exc}") from exc
    try:
        meta = doc["metadata"]
        block = BlockSpec(meta["family"], int(meta["n_qubits"]), int(meta["n_layers"]))
        params = np.asarray(doc["params"], dtype=float)
        boundary = meta.get("boundary", "trace")
    except (KeyError, TypeError) as exc:
        raise UsageError(f"result file {path!r} lacks ansatz metadata or params") from exc
    spec = AnsatzSpec(block, n_sites)
    if params.shape != (spec.n_parameters,):
        raise ValidationError(
            f"result file {path!r} has {params.size} parameters, ansatz needs {spec.n_parameters}"
        )
    return QcmpsState.from_params(spec, params), boundary


def _cmd_entropy(args):
    run = _Run("entropy")
    run.track(args.fcidump)
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    view = SpinOrbitalView(ints, ordering=args.ordering or "interleaved")
    if args.result:
        run.track(args.result)
        state, boundary = _state_from_result(args.result, view.n_sites)
        if args.boundary:
            boundary = args.boundary
        report = interaction_matrix(state, view, boundary=boundary)
    else:
        seed = args.seed if args.seed is not None else 0xC0FFEE
        _, vec, _ = fci_ground_state(view, seed=seed)
        report = interaction_matrix(vec, view, source_label="fci")
    doc = report.to_dict()
    if args.out:
        ipq_path = _sibling(args.out, ".ipq.csv")
        _write_csv(ipq_path, None, [[f"{x:.12e}" for x in row] for row in report.i_pq])
        run.outputs.extend([args.out, ipq_path])
    _emit(doc, run.manifest(), args.out)
    return 0


def _cmd_rotate(args):
    run = _Run("rotate")
    run.track(args.fcidump)
    if (args.u is None) == (args.kappa is None):
        raise UsageError("rotate needs exactly one of --u or --kappa")
    try:
        ints = read_fcidump(args.fcidump)
    except OSError as exc:
        raise UsageError(f"cannot read FCIDUMP {args.fcidump!r}: {exc}") from exc
    if args.kappa:
        run.track(args.kappa)
        u = exponentiate_kappa(_load_matrix(args.kappa, "generator file"))
    else:
        run.track(args.u)
        u = _load_matrix(args.u, "rotation file")
    rotated = rotate_integrals(ints, u)
    if args.out:
        write_fcidump(rotated, args.out)
        run.outputs.append(args.out)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        print(write_fcidump(rotated), end="")
    return 0


def _build_parser():
    parser = _Parser(prog="qcmps", description="Circuit-MPS electronic structure toolkit")
    parser.add_argument("--version", action="version", version=f"qcmps {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, help_text, fcidump_required=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fcidump", required=fcidump_required, help="FCIDUMP input path")
        p.add_argument("--ordering", choices=ORDERINGS, help="spin-orbital to site layout")
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    add("inspect", "summarize an FCIDUMP file")
    add("map", "emit the qubit Hamiltonian as Pauli text")
    add("hf", "single-determinant reference energy")
    p = add("fci", "exact ground-state energy")
    p.add_argument("--seed", type=int, help="iterative-solver start seed")

    for name, help_text in (("vqe", "optimize a circuit-MPS ansatz"), ("layers", "scan layer counts")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML config path")
        p.add_argument("--fcidump", help="FCIDUMP input path (overrides config)")
        p.add_argument("--ordering", choices=ORDERINGS)
        p.add_argument("--block", choices=_FAMILIES, help="block family (overrides config)")
        p.add_argument("--nq", type=int, help="qubits per block")
        p.add_argument("--nl", type=int, help="layers per block")
        p.add_argument("--seed", type=int, help="restart RNG seed")
        p.add_argument("--restarts", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--boundary", choices=BOUNDARIES)
        p.add_argument("--out", help="result JSON path (default: stdout)")
        if name == "layers":
            p.add_argument("--max-layers", type=int, default=8)
            p.add_argument("--threshold", type=float, default=2.0e-5)

    p = add("entropy", "orbital entropies and mutual information")
    p.add_argument("--result", help="vqe result JSON; omit to analyze the exact ground state")
    p.add_argument("--boundary", choices=BOUNDARIES, help="closure for --result states")
    p.add_argument("--seed", type=int, help="iterative-solver start seed")

    p = add("rotate", "transform integrals to a rotated orbital basis")
    p.add_argument("--u", help="orthogonal matrix file, whitespace-separated rows")
    p.add_argument("--kappa", help="antisymmetric generator file; exponentiated to U")
    return parser


def main(argv=None):
    parser = _build_parser()
    handlers = {
        "inspect": _cmd_inspect,
        "map": _cmd_map,
        "hf": _cmd_hf,
        "fci": _cmd_fci,
        "vqe": _cmd_vqe,
        "layers": _cmd_layers,
        "entropy": _cmd_entropy,
        "rotate": _cmd_rotate,
    }
    try:
        args = parser.parse_args(argv)
        return handlers[args.subcommand](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except QcmpsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
