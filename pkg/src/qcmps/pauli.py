"""Pauli-string algebra, the fermion-to-qubit mapping, and operator builders.

Qubit site k carries the occupation of spin orbital k under the chosen site
ordering; |0> is unoccupied.  A creation operator maps to

    a^dag_p  ->  Z_0 ... Z_{p-1} (X_p - i Y_p) / 2

so products of ladder operators become polynomials of Pauli strings with at
most 2^n terms before cancellation.
"""

import cmath
import dataclasses
import math

import numpy as np

from .errors import ValidationError

LETTERS = "IXYZ"
_CODE = {"I": 0, "X": 1, "Y": 2, "Z": 3}

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-site products: (a, b) -> (phase, a*b)
_PRODUCT = {}
for _a in LETTERS:
    for _b in LETTERS:
        m = PAULI_MATRICES[_a] @ PAULI_MATRICES[_b]
        for _c in LETTERS:
            ratio = m[np.abs(PAULI_MATRICES[_c]) > 0.5][0] / PAULI_MATRICES[_c][np.abs(PAULI_MATRICES[_c]) > 0.5][0]
            if np.allclose(m, ratio * PAULI_MATRICES[_c]):
                _PRODUCT[_a, _b] = (complex(ratio), _c)
                break


class PauliTerm:
    """One scaled Pauli string: coeff times a product of single-site letters.

    factors is a site -> letter mapping over {X, Y, Z}; identity sites are
    omitted, so the empty mapping is the identity string.
    """

    __slots__ = ("coeff", "factors")

    def __init__(self, coeff, factors=()):
        self.coeff = complex(coeff)
        items = factors.items() if isinstance(factors, dict) else factors
        pairs = []
        for site, letter in items:
            site = int(site)
            if site < 0:
                raise ValidationError("site indices must be non-negative")
            if letter not in ("X", "Y", "Z"):
                raise ValidationError(f"letter must be X, Y or Z, got {letter!r}")
            pairs.append((site, letter))
        pairs.sort()
        if len({s for s, _ in pairs}) != len(pairs):
            raise ValidationError("duplicate site in Pauli term factors")
        self.factors = tuple(pairs)

    @property
    def factor_map(self):
        return dict(self.factors)

    def weight(self):
        return len(self.factors)

    def __repr__(self):
        body = " ".join(f"{s}:{c}" for s, c in self.factors) or "1"
        return f"PauliTerm({self.coeff!r}, {body})"


def multiply_terms(a, b):
    """Product of two Pauli terms, with the accumulated phase in the coeff."""
    phase = 1.0 + 0j
    fa = dict(a.factors)
    out = []
    for site, lb in b.factors:
        la = fa.pop(site, "I")
        p, lc = _PRODUCT[la, lb]
        phase *= p
        if lc != "I":
            out.append((site, lc))
    out.extend(fa.items())
    return PauliTerm(a.coeff * b.coeff * phase, out)


class PauliPolynomial:
    """Canonicalized sum of Pauli terms.

    Terms are merged per string, screened at ``screen_eps`` (dropped absolute
    coefficient mass is recorded in ``screened_mass``), and stored in a fixed
    lexicographic order so equal operators compare equal term by term.
    """

    __slots__ = ("terms", "n_sites", "screen_eps", "screened_mass")

    def __init__(self, terms=(), n_sites=None, screen_eps=1e-12):
        acc = {}
        for t in terms:
            acc[t.factors] = acc.get(t.factors, 0.0) + t.coeff
        dropped = 0.0
        kept = []
        for factors in sorted(acc):
            c = acc[factors]
            if abs(c) >= screen_eps:
                kept.append(PauliTerm(c, factors))
            else:
                dropped += abs(c)
        self.terms = tuple(kept)
        self.screen_eps = screen_eps
        self.screened_mass = dropped
        support = max((f[-1][0] for f in acc if f), default=-1) + 1
        if n_sites is None:
            n_sites = support
        elif n_sites < support:
            raise ValidationError("n_sites smaller than the largest site in the terms")
        self.n_sites = n_sites

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def _binary(self, other, sign):
        if isinstance(other, (int, float, complex)):
            other = PauliPolynomial([PauliTerm(other)], n_sites=0, screen_eps=self.screen_eps)
        terms = list(self.terms) + [PauliTerm(sign * t.coeff, t.factors) for t in other.terms]
        return PauliPolynomial(terms, n_sites=max(self.n_sites, other.n_sites), screen_eps=self.screen_eps)

    def __add__(self, other):
        return self._binary(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return PauliPolynomial(
                [PauliTerm(other * t.coeff, t.factors) for t in self.terms],
                n_sites=self.n_sites,
                screen_eps=self.screen_eps,
            )
        prods = []
        for ta in self.terms:
            for tb in other.terms:
                prods.append(multiply_terms(ta, tb))
        return PauliPolynomial(prods, n_sites=max(self.n_sites, other.n_sites), screen_eps=self.screen_eps)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.__mul__(other)
        return NotImplemented

    def is_hermitian(self, tol=1e-12):
        # every Pauli string is Hermitian, so Hermiticity means real coeffs
        return all(abs(t.coeff.imag) <= tol for t in self.terms)

    def coefficient(self, factors):
        key = PauliTerm(1.0, factors).factors
        for t in self.terms:
            if t.factors == key:
                return t.coeff
        return 0.0

    def with_sites(self, n_sites):
        return PauliPolynomial(self.terms, n_sites=n_sites, screen_eps=self.screen_eps)

    def to_codes(self):
        """Return (coeffs, codes): complex (n_terms,) and uint8 (n_terms, n_sites)."""
        coeffs = np.array([t.coeff for t in self.terms], dtype=complex)
        codes = np.zeros((len(self.terms), self.n_sites), dtype=np.uint8)
        for row, t in enumerate(self.terms):
            for site, letter in t.factors:
                codes[row, site] = _CODE[letter]
        return coeffs, codes

    def __repr__(self):
        return f"PauliPolynomial({len(self.terms)} terms, {self.n_sites} sites)"


def identity_polynomial(n_sites, coeff=1.0):
    return PauliPolynomial([PauliTerm(coeff)], n_sites=n_sites)


def format_polynomial(poly, digits=17):
    """One line per term: coefficient then site:letter factors.

    17 significant digits so format -> parse reproduces coefficients exactly.
    """

    def fmt(c):
        if abs(c.imag) <= 1e-14 * max(1.0, abs(c.real)):
            return f"{c.real:.{digits}g}"
        return f"({c.real:.{digits}g}{c.imag:+.{digits}g}j)"

    lines = []
    for t in poly.terms:
        body = " ".join(f"{s}:{c}" for s, c in t.factors)
        lines.append(fmt(t.coeff) + (" " + body if body else ""))
    return "\n".join(lines) + "\n"


def parse_polynomial(text, n_sites=None, screen_eps=1e-12):
    terms = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        try:
            coeff = complex(tokens[0])
        except ValueError:
            raise ValidationError(f"line {ln}: bad coefficient {tokens[0]!r}") from None
        factors = []
        for tok in tokens[1:]:
            site, _, letter = tok.partition(":")
            factors.append((int(site), letter))
        terms.append(PauliTerm(coeff, factors))
    return PauliPolynomial(terms, n_sites=n_sites, screen_eps=screen_eps)


@dataclasses.dataclass(frozen=True)
class FermionOperator:
    """A scaled product of ladder operators, leftmost applied last.

    ladder is a tuple of (site, dagger) pairs; the empty tuple is the scaled
    identity.
    """

    coeff: complex = 1.0
    ladder: tuple = ()

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator(self.coeff * other, self.ladder)
        return FermionOperator(self.coeff * other.coeff, self.ladder + other.ladder)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator(self.coeff * other, self.ladder)
        return NotImplemented

    def adjoint(self):
        return FermionOperator(
            self.coeff.conjugate(),
            tuple((site, not dag) for site, dag in reversed(self.ladder)),
        )


def creation(site):
    return FermionOperator(1.0, ((site, True),))


def annihilation(site):
    return FermionOperator(1.0, ((site, False),))


def jordan_wigner(op, n_sites=None, screen_eps=1e-12):
    """Map one FermionOperator product to a PauliPolynomial."""
    poly = identity_polynomial(0, op.coeff)
    for site, dag in op.ladder:
        tail = tuple((k, "Z") for k in range(site))
        sign = -0.5j if dag else 0.5j
        factor = PauliPolynomial(
            [PauliTerm(0.5, tail + ((site, "X"),)), PauliTerm(sign, tail + ((site, "Y"),))],
            screen_eps=0.0,
        )
        poly = poly * factor
    if n_sites is not None:
        poly = poly.with_sites(n_sites)
    return PauliPolynomial(poly.terms, n_sites=poly.n_sites, screen_eps=screen_eps)


def jordan_wigner_sum(ops, n_sites=None, screen_eps=1e-12):
    terms = []
    for op in ops:
        terms.extend(jordan_wigner(op, screen_eps=0.0).terms)
    return PauliPolynomial(terms, n_sites=n_sites, screen_eps=screen_eps)


def build_qubit_hamiltonian(view, screen_eps=1e-12):
    """Qubit Hamiltonian of the electronic problem seen through a SpinOrbitalView.

    H = e_core + sum_PQ h(P,Q) a^dag_P a_Q
             + sum_{P<Q, R<S} <PQ||RS> a^dag_P a^dag_Q a_S a_R
    """
    n = view.n_sites
    ops = [FermionOperator(view.ints.e_core)]
    for P in range(n):
        for Q in range(n):
            h = view.h(P, Q)
            if abs(h) > 1e-16:
                ops.append(h * creation(P) * annihilation(Q))
    for P in range(n):
        for Q in range(P + 1, n):
            for R in range(n):
                for S in range(R + 1, n):
                    v = view.eri_antisym(P, Q, R, S)
                    if abs(v) > 1e-16:
                        ops.append(v * creation(P) * creation(Q) * annihilation(S) * annihilation(R))
    return jordan_wigner_sum(ops, n_sites=n, screen_eps=screen_eps)


def number_operator(n_sites, screen_eps=1e-12):
    """Total particle number, sum_P (I - Z_P) / 2."""
    terms = [PauliTerm(0.5 * n_sites)]
    terms += [PauliTerm(-0.5, ((P, "Z"),)) for P in range(n_sites)]
    return PauliPolynomial(terms, n_sites=n_sites, screen_eps=screen_eps)


def sz_operator(view, screen_eps=1e-12):
    ops = []
    for p in range(view.ints.n_orb):
        ops.append(0.5 * creation(view.site(p, 0)) * annihilation(view.site(p, 0)))
        ops.append(-0.5 * creation(view.site(p, 1)) * annihilation(view.site(p, 1)))
    return jordan_wigner_sum(ops, n_sites=view.n_sites, screen_eps=screen_eps)


def total_spin_operator(view, screen_eps=1e-12):
    """S^2 assembled fermionically as S_- S_+ + S_z (S_z + 1), then mapped."""
    n_orb = view.ints.n_orb
    ops = []
    for p in range(n_orb):
        for q in range(n_orb):
            ops.append(
                creation(view.site(p, 1))
                * annihilation(view.site(p, 0))
                * creation(view.site(q, 0))
                * annihilation(view.site(q, 1))
            )
    sz_terms = []
    for p in range(n_orb):
        sz_terms.append(0.5 * creation(view.site(p, 0)) * annihilation(view.site(p, 0)))
        sz_terms.append(-0.5 * creation(view.site(p, 1)) * annihilation(view.site(p, 1)))
    for a in sz_terms:
        ops.append(a)
        for b in sz_terms:
            ops.append(a * b)
    return jordan_wigner_sum(ops, n_sites=view.n_sites, screen_eps=screen_eps)


def shifted_square(poly, shift):
    """(poly - shift)^2, precompiled for penalty expectations."""
    centered = poly - identity_polynomial(poly.n_sites, shift)
    return centered * centered
