"""Parameterized circuit blocks and their site-tensor extraction.

A block acts on 1 + (Nq - 1) qubits: qubit 0 is the physical qubit, the rest
form the bond register of dimension D = 2^(Nq-1).  Qubit 0 is the most
significant bit of the 2^Nq-dimensional register index, so row i*D + v pairs
physical outcome i with bond state v.

Three families are provided:

  lu  - an initial layer of U3 gates, then per layer CU3 on nearest-neighbor
        ordered pairs followed by a U3 layer;
  au  - like lu but CU3 on every ordered qubit pair;
  g2  - per layer a phased U3 (4 parameters) on every qubit followed by a
        16-parameter two-qubit exponential exp(i sum_m theta_m sigma (x) sigma)
        on every ordered pair.

All-zero parameters give the identity for every family.
"""

import dataclasses
import math

import numpy as np

from .errors import ValidationError
from .pauli import PAULI_MATRICES

FAMILIES = ("lu", "au", "g2")

_PAULI_PAIRS = [
    np.kron(PAULI_MATRICES[a], PAULI_MATRICES[b]) for a in "IXYZ" for b in "IXYZ"
]


def u3_matrix(theta, phi, lam):
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def phased_u3_matrix(alpha, theta, phi, lam):
    return np.exp(1j * alpha) * u3_matrix(theta, phi, lam)


def cu3_matrix(theta, phi, lam):
    """Controlled U3 on (control, target), control being the first qubit."""
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u3_matrix(theta, phi, lam)
    return out


def two_qubit_exp_matrix(params):
    """exp(i sum_m params[m] P_m) over the 16 Pauli pairs in (I,X,Y,Z)^2 order."""
    if len(params) != 16:
        raise ValidationError("generic two-qubit gate takes 16 parameters")
    gen = np.zeros((4, 4), dtype=complex)
    for theta, pair in zip(params, _PAULI_PAIRS):
        gen += theta * pair
    vals, vecs = np.linalg.eigh(gen)
    return (vecs * np.exp(1j * vals)) @ vecs.conj().T


_GATE_BUILDERS = {
    "u3": (1, 3, lambda p: u3_matrix(*p)),
    "pu3": (1, 4, lambda p: phased_u3_matrix(*p)),
    "cu3": (2, 3, lambda p: cu3_matrix(*p)),
    "pp": (2, 16, two_qubit_exp_matrix),
}


@dataclasses.dataclass(frozen=True)
class BlockSpec:
    """One block family instance: family name, qubit count, layer count."""

    family: str
    n_qubits: int
    n_layers: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown block family {self.family!r}, expected one of {FAMILIES}")
        if self.n_qubits < 2:
            raise ValidationError("blocks need at least 2 qubits (1 physical + 1 bond)")
        if self.n_layers < 1:
            raise ValidationError("n_layers must be at least 1")

    @property
    def bond_dim(self):
        return 1 << (self.n_qubits - 1)

    def label(self):
        return f"{self.family.upper()}-{self.n_qubits}({self.n_layers})"


def gate_plan(spec):
    """Ordered (kind, qubits, param offset) triples for one block."""
    nq = spec.n_qubits
    plan = []
    offset = 0

    def add(kind, qubits):
        nonlocal offset
        plan.append((kind, qubits, offset))
        offset += _GATE_BUILDERS[kind][1]

    if spec.family in ("lu", "au"):
        for q in range(nq):
            add("u3", (q,))
        for _ in range(spec.n_layers):
            if spec.family == "lu":
                for q in range(nq - 1):
                    add("cu3", (q, q + 1))
            else:
                for c in range(nq):
                    for t in range(nq):
                        if c != t:
                            add("cu3", (c, t))
            for q in range(nq):
                add("u3", (q,))
    else:
        for _ in range(spec.n_layers):
            for q in range(nq):
                add("pu3", (q,))
            for c in range(nq):
                for t in range(nq):
                    if c != t:
                        add("pp", (c, t))
    return plan


def parameter_count(spec):
    plan = gate_plan(spec)
    last_kind, _, last_offset = plan[-1]
    return last_offset + _GATE_BUILDERS[last_kind][1]


def gate_count(spec):
    """Hardware gates per block; the generic two-qubit gate compiles to 19."""
    total = 0
    for kind, _, _ in gate_plan(spec):
        total += 19 if kind == "pp" else 1
    return total


def estimate_elementary_gates(spec, n_sites):
    """Elementary one- and two-qubit gates for the full chain of blocks."""
    if n_sites < 1:
        raise ValidationError("gate estimate needs at least one site")
    return n_sites * gate_count(spec)


def gate_matrix(kind, params):
    n_qubits, n_params, builder = _GATE_BUILDERS[kind]
    if len(params) != n_params:
        raise ValidationError(f"gate {kind} takes {n_params} parameters, got {len(params)}")
    return builder(params)


def apply_gate(matrix, gate, qubits, n_qubits):
    """Left-multiply an embedded gate: rows are indexed with qubit 0 as MSB."""
    dim = 1 << n_qubits
    m = len(qubits)
    r = matrix.reshape([2] * n_qubits + [matrix.shape[-1]])
    r = np.moveaxis(r, qubits, range(m))
    r = gate @ r.reshape(1 << m, -1)
    r = r.reshape([2] * m + [2] * (n_qubits - m) + [matrix.shape[-1]])
    r = np.moveaxis(r, range(m), qubits)
    return r.reshape(dim, matrix.shape[-1])


def build_block_unitary(spec, params):
    """The 2^Nq x 2^Nq unitary of one block for one parameter slice."""
    params = np.asarray(params, dtype=float)
    need = parameter_count(spec)
    if params.shape != (need,):
        raise ValidationError(f"{spec.label()} takes {need} parameters, got shape {params.shape}")
    dim = 1 << spec.n_qubits
    u = np.eye(dim, dtype=complex)
    for kind, qubits, offset in gate_plan(spec):
        g = gate_matrix(kind, params[offset : offset + _GATE_BUILDERS[kind][1]])
        u = apply_gate(u, g, qubits, spec.n_qubits)
    return u


def block_to_tensor(unitary, n_qubits):
    """Site tensor from a block unitary with the input register at |0...0>.

    T^i[u][v] = <i, v| U |0, u>, i the physical outcome, u/v the bond flow.
    """
    dim = 1 << n_qubits
    if unitary.shape != (dim, dim):
        raise ValidationError("unitary dimension does not match qubit count")
    d = dim // 2
    cols = unitary[:, :d]
    return np.stack([cols[:d].T.copy(), cols[d:].T.copy()])


@dataclasses.dataclass(frozen=True)
class AnsatzSpec:
    """A block replicated across every site of the chain."""

    block: BlockSpec
    n_sites: int

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValidationError("an ansatz needs at least 2 sites")

    @property
    def params_per_block(self):
        return parameter_count(self.block)

    @property
    def n_parameters(self):
        return self.n_sites * self.params_per_block

    def param_slice(self, site):
        if not 0 <= site < self.n_sites:
            raise ValidationError("site index out of range")
        w = self.params_per_block
        return slice(site * w, (site + 1) * w)

    def circuit_gate_count(self):
        return self.n_sites * gate_count(self.block)

    def label(self):
        return f"{self.block.label()} x {self.n_sites} sites"
