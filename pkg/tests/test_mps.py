"""Site tensors, canonicality, transfer contraction, and boundary closures."""

import numpy as np
import pytest

from qcmps.blocks import AnsatzSpec, BlockSpec
from qcmps.errors import DiagnosticsError, ValidationError
from qcmps.mps import QcmpsState, check_right_canonical, expectation, term_values, to_statevector
from qcmps.pauli import PauliPolynomial, PauliTerm, build_qubit_hamiltonian, identity_polynomial
from qcmps.reference import apply_polynomial, expectation_statevector, hf_energy, hf_vector

from conftest import load_view

FAMILIES = ("lu", "au", "g2")


def _random_state(rng, family="au", nq=3, nl=1, n_sites=6, scale=np.pi):
    spec = AnsatzSpec(BlockSpec(family, nq, nl), n_sites)
    return QcmpsState.from_params(spec, rng.uniform(-scale, scale, spec.n_parameters))


def _random_poly(rng, n_sites, n_terms):
    terms = []
    for _ in range(n_terms):
        weight = int(rng.integers(0, n_sites + 1))
        sites = sorted(rng.choice(n_sites, size=weight, replace=False).tolist())
        factors = [(s, "XYZ"[rng.integers(0, 3)]) for s in sites]
        terms.append(PauliTerm(complex(rng.normal(), rng.normal()), factors))
    return PauliPolynomial(terms, n_sites=n_sites)


def test_right_canonical_for_all_families():
    rng = np.random.default_rng(1)
    for family in FAMILIES:
        for _ in range(3):
            state = _random_state(rng, family=family)
            for k in range(state.n_sites):
                t = state.tensors[k]
                residual = np.abs(
                    t[0] @ t[0].conj().T + t[1] @ t[1].conj().T - np.eye(state.bond_dim)
                ).max()
                assert residual < 1e-10
            check_right_canonical(state)


def test_tensors_are_immutable():
    rng = np.random.default_rng(2)
    state = _random_state(rng)
    with pytest.raises((ValueError, RuntimeError)):
        state.tensors[0, 0, 0, 0] = 1.0


def test_identity_expectation_is_its_coefficient():
    rng = np.random.default_rng(3)
    for family in FAMILIES:
        state = _random_state(rng, family=family)
        ident = identity_polynomial(state.n_sites, coeff=-2.25)
        for boundary in ("trace", "project"):
            assert abs(expectation(state, ident, boundary=boundary) + 2.25) < 1e-10


def test_expectation_matches_purification_oracle():
    rng = np.random.default_rng(4)
    for _ in range(5):
        state = _random_state(rng, nq=3, n_sites=6)
        poly = _random_poly(rng, 6, 8)
        herm = poly + PauliPolynomial(
            [PauliTerm(np.conj(t.coeff), t.factors) for t in poly], n_sites=6
        )
        amps = to_statevector(state)
        val = expectation(state, herm, boundary="trace")
        oracle = sum(
            np.vdot(amps[:, u], apply_polynomial(herm, amps[:, u])) for u in range(amps.shape[1])
        ).real
        assert abs(val - oracle) < 1e-9
        val_p = expectation(state, herm, boundary="project")
        psi0 = amps[:, 0]
        oracle_p = (np.vdot(psi0, apply_polynomial(herm, psi0)) / np.vdot(psi0, psi0)).real
        assert abs(val_p - oracle_p) < 1e-9


def test_purification_is_normalized():
    rng = np.random.default_rng(5)
    amps = to_statevector(_random_state(rng))
    assert abs(np.sum(np.abs(amps) ** 2) - 1.0) < 1e-10


def test_hartree_fock_state_is_the_determinant():
    view = load_view("h4_2.0000")
    state = QcmpsState.hartree_fock(view.n_sites, 4)
    assert state.bond_dim == 1
    amps = to_statevector(state).reshape(-1)
    assert np.abs(amps - hf_vector(view.n_sites, 4)).max() < 1e-12


def test_hartree_fock_energy_closure():
    for name in ("h2_0.7414", "h4_2.0000"):
        view = load_view(name)
        ham = build_qubit_hamiltonian(view)
        state = QcmpsState.hartree_fock(view.n_sites, view.ints.n_elec)
        for boundary in ("trace", "project"):
            val = expectation(state, ham, boundary=boundary)
            assert abs(val - hf_energy(view)) < 1e-9


def test_term_values_validates_inputs():
    rng = np.random.default_rng(6)
    state = _random_state(rng)
    codes = np.zeros((2, state.n_sites + 1), dtype=np.uint8)
    with pytest.raises(ValidationError):
        term_values(state.tensors, codes)
    good = np.zeros((2, state.n_sites), dtype=np.uint8)
    with pytest.raises(ValidationError):
        term_values(state.tensors, good, boundary="reflect")


def test_expectation_site_count_mismatch():
    rng = np.random.default_rng(7)
    state = _random_state(rng, n_sites=6)
    poly = identity_polynomial(5)
    with pytest.raises(ValidationError):
        expectation(state, poly)


def test_from_params_length_check():
    spec = AnsatzSpec(BlockSpec("au", 2, 1), 4)
    with pytest.raises(ValidationError):
        QcmpsState.from_params(spec, np.zeros(spec.n_parameters - 1))


def test_statevector_qubit_guard():
    spec = AnsatzSpec(BlockSpec("au", 4, 1), 24)
    state = QcmpsState.from_params(spec, np.zeros(spec.n_parameters))
    with pytest.raises(ValidationError):
        to_statevector(state)
