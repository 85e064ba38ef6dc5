"""Circuit-built MPS states and transfer-matrix expectation values.

The state is a right-canonical MPS whose site tensors come from block
unitaries acting on a fresh physical qubit plus a recycled bond register.
Expectations contract a D^2 boundary object left to right, one Pauli term at
a time (all terms batched), so cost is O(N * n_terms * D^3) and no D^2 x D^2
matrix is ever formed.
"""

import numpy as np

from .blocks import block_to_tensor, build_block_unitary
from .errors import DiagnosticsError, ValidationError
from .pauli import PAULI_MATRICES

BOUNDARIES = ("trace", "project")

_PAULI_STACK = np.stack([PAULI_MATRICES[c] for c in "IXYZ"])


class QcmpsState:
    """Immutable MPS over n_sites qubits with uniform bond dimension D.

    tensors has shape (n_sites, 2, D, D); tensors[k][i] maps the incoming
    bond to the outgoing bond when the physical qubit at site k reads i.
    The left boundary is the unit vector e0; the right bond is traced out
    (or projected, at expectation time).
    """

    __slots__ = ("tensors", "n_sites", "bond_dim")

    def __init__(self, tensors):
        tensors = np.ascontiguousarray(tensors, dtype=complex)
        if tensors.ndim != 4 or tensors.shape[1] != 2 or tensors.shape[2] != tensors.shape[3]:
            raise ValidationError("tensors must have shape (n_sites, 2, D, D)")
        tensors.setflags(write=False)
        self.tensors = tensors
        self.n_sites = tensors.shape[0]
        self.bond_dim = tensors.shape[2]

    @classmethod
    def from_params(cls, ansatz, params):
        params = np.asarray(params, dtype=float)
        if params.shape != (ansatz.n_parameters,):
            raise ValidationError(
                f"{ansatz.label()} takes {ansatz.n_parameters} parameters, got shape {params.shape}"
            )
        nq = ansatz.block.n_qubits
        tensors = [
            block_to_tensor(build_block_unitary(ansatz.block, params[ansatz.param_slice(k)]), nq)
            for k in range(ansatz.n_sites)
        ]
        return cls(np.stack(tensors))

    @classmethod
    def hartree_fock(cls, n_sites, n_elec):
        """Product determinant occupying the first n_elec sites; D = 1."""
        if not 0 <= n_elec <= n_sites:
            raise ValidationError("n_elec out of range")
        tensors = np.zeros((n_sites, 2, 1, 1), dtype=complex)
        for k in range(n_sites):
            tensors[k, 1 if k < n_elec else 0, 0, 0] = 1.0
        return cls(tensors)


def check_right_canonical(state):
    """Max residual of sum_i T^i T^i-dagger = I over all sites."""
    t = state.tensors
    gram = np.einsum("kiuv,kiwv->kuw", t, t.conj())
    eye = np.eye(state.bond_dim)
    return float(np.abs(gram - eye).max())


def term_values(tensors, codes, boundary="trace"):
    """Contract one batch of Pauli strings; returns per-term complex values.

    codes is (n_terms, n_sites) with 0..3 meaning I, X, Y, Z.
    """
    n_terms = codes.shape[0]
    n_sites, _, d, _ = tensors.shape
    if codes.shape[1] != n_sites:
        raise ValidationError("observable site count does not match the state")
    left = np.zeros((n_terms, d, d), dtype=complex)
    left[:, 0, 0] = 1.0
    for k in range(n_sites):
        t = tensors[k]
        mats = _PAULI_STACK[codes[:, k]]
        # A[t,c,i,b] = sum_a L[t,c,a] T[i,a,b], as one GEMM
        a = (left.reshape(n_terms * d, d) @ t.transpose(1, 0, 2).reshape(d, 2 * d))
        a = np.ascontiguousarray(a.reshape(n_terms, d, 2, d).transpose(0, 2, 1, 3))
        # B[t,j,c,b] = sum_i P[t,j,i] A[t,i,c,b], batched over terms
        b = mats @ a.reshape(n_terms, 2, d * d)
        # L'[t,e,b] = sum_{j,c} conj(T)[j,c,e] B[t,j,c,b]
        left = np.matmul(t.conj().reshape(2 * d, d).T[None], b.reshape(n_terms, 2 * d, d))
    if boundary == "trace":
        return np.trace(left, axis1=1, axis2=2)
    if boundary == "project":
        return left[:, 0, 0]
    raise ValidationError(f"unknown boundary {boundary!r}, expected one of {BOUNDARIES}")


def expectation(state, observable, boundary="trace"):
    """<state| observable |state> under the chosen right-boundary closure.

    trace: the final bond register is discarded, so this is an expectation
    over the (generally mixed) physical state and is unit-normalized by
    right-canonicality.  project: the final bond is projected onto |0...0>
    and the value is the Rayleigh quotient of that pure component.
    """
    if observable.n_sites != state.n_sites:
        raise ValidationError(
            f"observable has {observable.n_sites} sites, state has {state.n_sites}"
        )
    coeffs, codes = observable.to_codes()
    if len(coeffs) == 0:
        return 0.0
    values = term_values(state.tensors, codes, boundary=boundary)
    total = complex(np.sum(coeffs * values))
    if boundary == "project":
        norm = term_values(state.tensors, np.zeros((1, state.n_sites), dtype=np.uint8), "project")
        total /= norm[0].real
    if observable.is_hermitian():
        if abs(total.imag) > 1e-9:
            raise DiagnosticsError(f"imaginary residue {total.imag:.3e} in Hermitian expectation")
        return total.real
    return total


def to_statevector(state):
    """Amplitudes c[b, u] = (e0^T T^{i_1} ... T^{i_N})[u], b encoding site k in bit k."""
    n_bits = state.n_sites + int(np.log2(state.bond_dim))
    if n_bits > 24:
        raise ValidationError(f"statevector needs {n_bits} qubits, limit is 24")
    amps = np.zeros((1, state.bond_dim), dtype=complex)
    amps[0, 0] = 1.0
    for k in range(state.n_sites):
        # new index i*2^k + b: site k becomes bit k
        amps = np.einsum("bu,iuv->ibv", amps, state.tensors[k]).reshape(-1, state.bond_dim)
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > 1e-10:
        raise DiagnosticsError(f"purification norm {norm} deviates from 1")
    return amps
