"""Orbital rotations and entropy-based orbital interaction analysis.

Rotations act on the spatial-orbital basis: U = exp(-kappa) for a real
antisymmetric generator, applied to h and to the two-electron tensor by a
staged O(N^5) transform.  The interaction analysis builds one- and
two-orbital reduced density matrices from fermionic transition operators
(compiled through the same Jordan-Wigner path as the Hamiltonian, so the
phase strings are never hand-written) and reports von Neumann entropies and
the mutual-information matrix I_pq = (s1_p + s1_q - s2_pq)(1 - delta_pq)/2.
"""

import dataclasses

import numpy as np

from .errors import DiagnosticsError, ValidationError
from .fcidump import MolecularIntegrals, TwoElectronIntegrals
from .mps import QcmpsState, expectation
from .pauli import FermionOperator, annihilation, creation, jordan_wigner_sum
from .reference import apply_polynomial

# local orbital basis order: empty, spin-up, spin-down, doubly occupied
_LOCAL_STATES = ("-", "u", "d", "ud")

_STATE_PARITY = (0, 1, 1, 0)

_STATE_OCCUPATION = (0.0, 1.0, 1.0, 2.0)


def exponentiate_kappa(kappa):
    """Orthogonal U = exp(-kappa) for a real antisymmetric generator.

    Uses the eigendecomposition of the Hermitian matrix i*kappa, so the
    result is orthogonal to machine precision for any antisymmetry-clean
    input.
    """
    kappa = np.asarray(kappa, dtype=float)
    if kappa.ndim != 2 or kappa.shape[0] != kappa.shape[1]:
        raise ValidationError("kappa must be square")
    if np.abs(kappa + kappa.T).max() >= 1e-12:
        raise ValidationError("kappa must be antisymmetric")
    w, v = np.linalg.eigh(1j * kappa)
    u = (v * np.exp(1j * w)) @ v.conj().T
    if np.abs(u.imag).max() > 1e-12:
        raise DiagnosticsError("exp(-kappa) has a complex residue")
    u = u.real
    if np.abs(u.T @ u - np.eye(len(u))).max() > 1e-12:
        raise DiagnosticsError("exp(-kappa) lost orthogonality")
    return u


def rotate_integrals(ints, u):
    """Transform integrals to the orbital basis with columns of u.

    h' = u^T h u; the two-electron tensor is contracted one index at a time
    and re-packed into 8-fold symmetric storage by averaging the symmetry
    images, which removes contraction round-off asymmetry.
    """
    u = np.asarray(u, dtype=float)
    n = ints.n_orb
    if u.shape != (n, n):
        raise ValidationError(f"rotation must be {n} x {n}, got {u.shape}")
    if np.abs(u.T @ u - np.eye(n)).max() > 1e-8:
        raise ValidationError("rotation matrix is not orthogonal")
    h_new = u.T @ ints.h1 @ u
    g = ints.g2.dense()
    g = np.einsum("ap,abcd->pbcd", u, g)
    g = np.einsum("bq,pbcd->pqcd", u, g)
    g = np.einsum("cr,pqcd->pqrd", u, g)
    g = np.einsum("ds,pqrd->pqrs", u, g)
    g_new = TwoElectronIntegrals(n)
    for p, q, r, s, _ in g_new.iter_canonical():
        value = (
            g[p, q, r, s]
            + g[q, p, r, s]
            + g[p, q, s, r]
            + g[q, p, s, r]
            + g[r, s, p, q]
            + g[s, r, p, q]
            + g[r, s, q, p]
            + g[s, r, q, p]
        ) / 8.0
        g_new.set(p, q, r, s, value)
    label = ints.source_label + "|rotated" if ints.source_label else "rotated"
    return MolecularIntegrals(
        n_orb=n,
        n_elec=ints.n_elec,
        ms2=ints.ms2,
        e_core=ints.e_core,
        h1=h_new,
        g2=g_new,
        source_label=label,
    )


def _creators(view, p, m):
    """Ladder factors that build local state m of orbital p from its vacuum."""
    up, down = view.site(p, 0), view.site(p, 1)
    if m == 0:
        return []
    if m == 1:
        return [creation(up)]
    if m == 2:
        return [creation(down)]
    return [creation(up), creation(down)]


def _vacuum_projector_terms(view, p):
    """(1 - n_up)(1 - n_down) expanded into four ladder products."""
    up, down = view.site(p, 0), view.site(p, 1)
    one = FermionOperator(1.0, ())
    n_up = creation(up) * annihilation(up)
    n_down = creation(down) * annihilation(down)
    return [one, -1.0 * n_up, -1.0 * n_down, n_up * n_down]


def _adjoint_product(ops):
    out = FermionOperator(1.0, ())
    for op in reversed(ops):
        out = out * op.adjoint()
    return out


def transition_operators(view, p):
    """4x4 array of JW polynomials t[m_new][m_old] = |m_new><m_old| on orbital p."""
    n_sites = 2 * view.ints.n_orb
    ops = np.empty((4, 4), dtype=object)
    for m_new in range(4):
        for m_old in range(4):
            front = FermionOperator(1.0, ())
            for op in _creators(view, p, m_new):
                front = front * op
            back = _adjoint_product(_creators(view, p, m_old))
            products = [front * t * back for t in _vacuum_projector_terms(view, p)]
            ops[m_new, m_old] = jordan_wigner_sum(products, n_sites)
    return ops


def _value(source, poly, boundary):
    if isinstance(source, QcmpsState):
        return complex(expectation(source, poly, boundary=boundary))
    vec = np.asarray(source)
    if vec.ndim != 1:
        raise ValidationError("state source must be a QcmpsState or a 1-D statevector")
    return complex(np.vdot(vec, apply_polynomial(poly, vec)))


def _check_density(rho, label):
    rho = 0.5 * (rho + rho.conj().T)
    trace = float(rho.trace().real)
    if abs(trace - 1.0) > 1e-9:
        raise DiagnosticsError(f"{label} trace {trace} deviates from 1")
    return rho


def one_orbital_rdm(source, view, p, boundary="trace"):
    """4x4 reduced density matrix of orbital p in the |->, |u>, |d>, |ud> basis."""
    ops = transition_operators(view, p)
    rho = np.empty((4, 4), dtype=complex)
    for row in range(4):
        for col in range(row, 4):
            # rho[row, col] = <|row><col|^dagger> = <|col><row|>
            val = _value(source, ops[col, row], boundary)
            rho[row, col] = val
            rho[col, row] = np.conj(val)
    return _check_density(rho, f"one-orbital RDM of orbital {p}")


def two_orbital_rdm(source, view, p, q, boundary="trace"):
    """16x16 RDM of the orbital pair, row index m_p*4 + m_q.

    Pair basis states are the ordered products O_(mp on p) O_(mq on q)
    acting on the joint vacuum.  Written as a product of single-orbital
    transition operators, the pair operator |a1 a2><b1 b2| picks up the
    fermionic reordering sign (-1)^(k(b1) * (k(a2) + k(b2))) from moving
    the b1 annihilators past the q-orbital factor (k = particle parity).
    """
    if p == q:
        raise ValidationError("two-orbital RDM needs two distinct orbitals")
    ops_p = transition_operators(view, p)
    ops_q = transition_operators(view, q)
    rho = np.empty((16, 16), dtype=complex)
    for row in range(16):
        mp_new, mq_new = divmod(row, 4)
        for col in range(row, 16):
            mp_old, mq_old = divmod(col, 4)
            # element is <|col><row|>, i.e. a = col labels, b = row labels
            poly = ops_p[mp_old, mp_new] * ops_q[mq_old, mq_new]
            swap = _STATE_PARITY[mp_new] * ((_STATE_PARITY[mq_old] + _STATE_PARITY[mq_new]) % 2)
            sign = -1.0 if swap else 1.0
            val = sign * _value(source, poly, boundary)
            rho[row, col] = val
            rho[col, row] = np.conj(val)
    return _check_density(rho, f"two-orbital RDM of orbitals ({p}, {q})")


def density_eigenvalues(rho, label="density matrix"):
    """Eigenvalues clamped to [0, 1]; negativity beyond -1e-10 is an error."""
    w = np.linalg.eigvalsh(rho)
    if w.min() < -1e-10:
        raise DiagnosticsError(f"{label} eigenvalue {w.min():.3e} below tolerance")
    if w.max() > 1.0 + 1e-10:
        raise DiagnosticsError(f"{label} eigenvalue {w.max():.10f} above 1")
    return np.clip(w, 0.0, 1.0)


def von_neumann_entropy(rho, label="density matrix"):
    """-sum w ln w in nats, with 0 ln 0 = 0."""
    w = density_eigenvalues(rho, label)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


@dataclasses.dataclass
class EntanglementReport:
    s1: np.ndarray
    s2: np.ndarray
    i_pq: np.ndarray
    source: str

    def to_dict(self):
        return {
            "s1": [float(v) for v in self.s1],
            "s2": [[float(v) for v in row] for row in self.s2],
            "i_pq": [[float(v) for v in row] for row in self.i_pq],
            "source": self.source,
        }


def interaction_matrix(source, view, boundary="trace", source_label=None):
    """Orbital interaction analysis: I_pq = (s1_p + s1_q - s2_pq)(1-delta)/2.

    s2's diagonal is filled with s1 for readability; I's diagonal is exactly
    zero.  Entropies are in nats.
    """
    n_orb = view.ints.n_orb
    if source_label is None:
        source_label = "qcmps" if isinstance(source, QcmpsState) else "statevector"
    s1 = np.zeros(n_orb)
    occupation = 0.0
    for p in range(n_orb):
        rho = one_orbital_rdm(source, view, p, boundary=boundary)
        s1[p] = von_neumann_entropy(rho, f"orbital {p} RDM")
        occupation += float(rho.diagonal().real @ _STATE_OCCUPATION)
    s2 = np.diag(s1.copy())
    i_pq = np.zeros((n_orb, n_orb))
    for p in range(n_orb):
        for q in range(p + 1, n_orb):
            rho = two_orbital_rdm(source, view, p, q, boundary=boundary)
            s2[p, q] = s2[q, p] = von_neumann_entropy(rho, f"orbital pair ({p},{q}) RDM")
            i_pq[p, q] = i_pq[q, p] = 0.5 * (s1[p] + s1[q] - s2[p, q])
    return EntanglementReport(s1=s1, s2=s2, i_pq=i_pq, source=source_label)
