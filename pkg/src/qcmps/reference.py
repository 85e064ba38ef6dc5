"""Exact references: statevector algebra, dense matrices, HF and FCI energies.

Basis convention: computational basis index b encodes site k in bit k, so the
occupation string written with site 0 rightmost is the binary expansion of b
(|0011> with sites 0 and 1 occupied is index 3).
"""

import numpy as np

from .errors import ConvergenceError, DiagnosticsError, ValidationError
from .pauli import identity_polynomial, number_operator, shifted_square, sz_operator

_MAX_SITES = 20


def _compiled_masks(poly):
    """Per-term (effective coeff, X-flip mask, phase mask) arrays.

    On a basis state b the term acts as
        coeff * i^{nY} * (-1)^{popcount(b & (ymask | zmask))} |b ^ xmask>.
    """
    n_t = len(poly.terms)
    coeffs = np.empty(n_t, dtype=complex)
    xmask = np.zeros(n_t, dtype=np.int64)
    pzmask = np.zeros(n_t, dtype=np.int64)
    for row, term in enumerate(poly.terms):
        n_y = 0
        for site, letter in term.factors:
            bit = 1 << site
            if letter in ("X", "Y"):
                xmask[row] |= bit
            if letter in ("Y", "Z"):
                pzmask[row] |= bit
            if letter == "Y":
                n_y += 1
        coeffs[row] = term.coeff * (1j) ** n_y
    return coeffs, xmask, pzmask


def _check_dim(poly, vec):
    if poly.n_sites > _MAX_SITES:
        raise ValidationError(f"statevector path limited to {_MAX_SITES} sites")
    dim = 1 << poly.n_sites
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (dim,):
        raise ValidationError(f"state has {vec.shape} amplitudes, expected ({dim},)")
    return vec


def apply_polynomial(poly, vec):
    """Return poly |vec> without forming a matrix."""
    vec = _check_dim(poly, vec)
    coeffs, xmask, pzmask = _compiled_masks(poly)
    return _apply_masks(coeffs, xmask, pzmask, vec)


def _apply_masks(coeffs, xmask, pzmask, vec):
    idx = np.arange(vec.shape[0], dtype=np.int64)
    out = np.zeros_like(vec)
    for c, xm, pm in zip(coeffs, xmask, pzmask):
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & pm) & 1)
        # idx ^ xm is a permutation, so fancy-indexed += has no collisions
        out[idx ^ xm] += (c * signs) * vec
    return out


def expectation_statevector(poly, vec, normalize=False):
    """<vec| poly |vec>, real part, after an imaginary-residue check."""
    vec = _check_dim(poly, vec)
    value = complex(np.vdot(vec, apply_polynomial(poly, vec)))
    if normalize:
        value /= np.vdot(vec, vec).real
    if poly.is_hermitian() and abs(value.imag) > 1e-9:
        raise DiagnosticsError(f"imaginary residue {value.imag:.3e} in Hermitian expectation")
    return value.real if poly.is_hermitian() else value


def dense_matrix(poly, n_sites=None):
    """Full 2^n x 2^n matrix of the polynomial; small systems only."""
    n = poly.n_sites if n_sites is None else n_sites
    if n > 14:
        raise ValidationError("dense matrix limited to 14 sites")
    if n < poly.n_sites:
        raise ValidationError("n_sites smaller than the polynomial support")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    mat = np.zeros((dim, dim), dtype=complex)
    coeffs, xmask, pzmask = _compiled_masks(poly)
    for c, xm, pm in zip(coeffs, xmask, pzmask):
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & pm) & 1)
        mat[idx ^ xm, idx] += c * signs
    return mat


def hf_determinant_index(n_elec):
    """Basis index of the determinant occupying the first n_elec sites."""
    return (1 << n_elec) - 1


def hf_vector(n_sites, n_elec):
    vec = np.zeros(1 << n_sites, dtype=complex)
    vec[hf_determinant_index(n_elec)] = 1.0
    return vec


def hf_energy(view, n_elec=None):
    """Energy of the determinant filling the first n_elec sites of the ordering.

    E = e_core + sum_occ h(P,P) + 1/2 sum_{P != Q occ} <PQ||PQ>.
    """
    if n_elec is None:
        n_elec = view.ints.n_elec
    occ = range(n_elec)
    energy = view.ints.e_core
    for P in occ:
        energy += view.h(P, P)
    for P in occ:
        for Q in occ:
            if P != Q:
                energy += 0.5 * view.eri_antisym(P, Q, P, Q)
    return energy


def ground_state_dense(poly):
    mat = dense_matrix(poly)
    if np.abs(mat - mat.conj().T).max() > 1e-9:
        raise DiagnosticsError("operator is not Hermitian")
    vals, vecs = np.linalg.eigh(mat)
    return vals[0], vecs[:, 0]


def lowest_eigenpair(matvec, dim, tol=1e-8, max_iter=None, seed=0xC0FFEE, start_mask=None):
    """Smallest eigenpair by Lanczos with full reorthogonalization.

    The starting vector is drawn from a seeded generator so runs are
    reproducible; start_mask restricts it to a symmetry sector, which keeps
    the whole Krylov space there when the operator commutes with the sector
    projector.  Raises ConvergenceError when the residual does not reach tol
    within the iteration budget.
    """
    if max_iter is None:
        max_iter = min(dim, 400)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 0j
    if start_mask is not None:
        v = np.where(start_mask, v, 0.0)
        if not np.any(v):
            raise ValidationError("start_mask leaves no basis states")
    v /= np.linalg.norm(v)
    basis = [v]
    alphas, betas = [], []
    theta, ritz = None, None
    for j in range(max_iter):
        w = matvec(basis[j])
        alphas.append(float(np.vdot(basis[j], w).real))
        w = w - alphas[j] * basis[j]
        if j > 0:
            w = w - betas[j - 1] * basis[j - 1]
        # full reorthogonalization, two classical Gram-Schmidt passes
        vmat = np.column_stack(basis)
        for _ in range(2):
            w = w - vmat @ (vmat.conj().T @ w)
        beta = float(np.linalg.norm(w))

        tri = np.diag(alphas)
        if betas:
            off = np.array(betas)
            tri += np.diag(off, 1) + np.diag(off, -1)
        evals, evecs = np.linalg.eigh(tri)
        theta, s = evals[0], evecs[:, 0]
        if beta * abs(s[-1]) < tol or beta < 1e-13 or j == max_iter - 1:
            ritz = vmat @ s
            ritz /= np.linalg.norm(ritz)
            residual = float(np.linalg.norm(matvec(ritz) - theta * ritz))
            if residual < tol:
                return theta, ritz, {"iterations": j + 1, "residual": residual}
            if beta < 1e-13:
                raise ConvergenceError(f"Krylov breakdown with residual {residual:.3e} above tol {tol:.1e}")
        if j == max_iter - 1:
            break
        betas.append(beta)
        basis.append(w / beta)
    residual = float(np.linalg.norm(matvec(ritz) - theta * ritz)) if ritz is not None else np.inf
    raise ConvergenceError(f"Lanczos did not reach tol {tol:.1e} in {max_iter} iterations (residual {residual:.3e})")


def ground_state(poly, sector=None, view=None, tol=1e-8, max_iter=None, seed=0xC0FFEE, method="auto"):
    """Ground energy and vector of a Hermitian polynomial.

    sector (n_elec, ms2), when given, augments the solved operator with
    +1e3 (N - n_elec)^2 and +1e3 (Sz - ms2/2)^2 shifts so other sectors are
    expelled; the returned energy is always the expectation of the original
    operator, so the shift never moves an in-sector ground state.  The Sz
    shift needs a view to locate spins and is skipped without one.
    """
    if not poly.is_hermitian():
        raise DiagnosticsError("ground_state requires a Hermitian polynomial")
    solved = poly
    start_mask = None
    if sector is not None:
        n_elec, ms2 = sector
        solved = solved + 1e3 * shifted_square(number_operator(poly.n_sites), float(n_elec))
        idx = np.arange(1 << poly.n_sites, dtype=np.int64)
        start_mask = np.bitwise_count(idx) == n_elec
        if view is not None:
            solved = solved + 1e3 * shifted_square(sz_operator(view).with_sites(poly.n_sites), 0.5 * ms2)
            alpha_bits = sum(1 << s for s in range(view.n_sites) if view.orbital(s)[1] == 0)
            ms2_of = np.bitwise_count(idx & alpha_bits).astype(int) - np.bitwise_count(
                idx & ~np.int64(alpha_bits)
            ).astype(int)
            start_mask &= ms2_of == ms2
    if method == "auto":
        method = "dense" if poly.n_sites <= 8 else "lanczos"
    if method == "dense":
        _, vec = ground_state_dense(solved)
        info = {"method": "dense"}
    else:
        coeffs, xmask, pzmask = _compiled_masks(solved)
        energy_shifted, vec, info = lowest_eigenpair(
            lambda x: _apply_masks(coeffs, xmask, pzmask, x),
            1 << poly.n_sites,
            tol=tol,
            max_iter=max_iter,
            seed=seed,
            start_mask=start_mask,
        )
        info["method"] = "lanczos"
        info["shifted_energy"] = energy_shifted
    energy = expectation_statevector(poly, vec)
    return energy, vec, info


def fci_ground_state(view, sector="auto", **kwargs):
    """FCI ground state of the electronic Hamiltonian seen through a view."""
    from .pauli import build_qubit_hamiltonian

    hamiltonian = build_qubit_hamiltonian(view)
    if sector == "auto":
        sector = (view.ints.n_elec, view.ints.ms2)
    return ground_state(hamiltonian, sector=sector, view=view, **kwargs)
