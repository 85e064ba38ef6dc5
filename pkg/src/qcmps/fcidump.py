"""FCIDUMP reading/writing and spin-orbital views of molecular integrals.

The on-disk format is the plain-text FCIDUMP convention: a namelist header
carrying NORB/NELEC/MS2 followed by one record per integral, ``value i j k l``
with 1-based indices.  Two-electron values are chemists' notation (ij|kl) and
only one representative of each 8-fold symmetry class needs to be present.
"""

import dataclasses
import re

import numpy as np

from .errors import FcidumpError, ValidationError

_EXP_FIX = re.compile(r"[dD]")
_HEADER_KV = re.compile(r"([A-Za-z][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z][A-Za-z0-9_]*\s*=)|$)")


def _tri(i, j):
    # index into a lower-triangle packed array, requires i >= j
    return i * (i + 1) // 2 + j


@dataclasses.dataclass
class ParseReport:
    """Bookkeeping from one parse: record counts and duplicate overwrites."""

    n_records: int = 0
    n_duplicates: int = 0


class TwoElectronIntegrals:
    """Chemists'-notation (pq|rs) with 8-fold permutational symmetry.

    Only the canonical representative p >= q, r >= s, (pq) >= (rs) is stored;
    lookups resolve any index order to that representative, so the symmetry
    holds by construction.
    """

    def __init__(self, n_orb, packed=None):
        self.n_orb = n_orb
        n_pair = n_orb * (n_orb + 1) // 2
        if packed is None:
            packed = np.zeros(n_pair * (n_pair + 1) // 2)
        self._packed = np.asarray(packed, dtype=float)
        if self._packed.shape != (n_pair * (n_pair + 1) // 2,):
            raise ValidationError("packed two-electron array has wrong length")

    def _index(self, p, q, r, s):
        ij = _tri(p, q) if p >= q else _tri(q, p)
        kl = _tri(r, s) if r >= s else _tri(s, r)
        return _tri(ij, kl) if ij >= kl else _tri(kl, ij)

    def get(self, p, q, r, s):
        return self._packed[self._index(p, q, r, s)]

    def set(self, p, q, r, s, value):
        self._packed[self._index(p, q, r, s)] = value

    def dense(self):
        """Expand to a full (n, n, n, n) array g[p, q, r, s] = (pq|rs)."""
        n = self.n_orb
        g = np.empty((n, n, n, n))
        for p in range(n):
            for q in range(p + 1):
                for r in range(n):
                    for s in range(r + 1):
                        v = self.get(p, q, r, s)
                        g[p, q, r, s] = g[q, p, r, s] = v
                        g[p, q, s, r] = g[q, p, s, r] = v
                        g[r, s, p, q] = g[s, r, p, q] = v
                        g[r, s, q, p] = g[s, r, q, p] = v
        return g

    def iter_canonical(self):
        """Yield (p, q, r, s, value) over canonical representatives, row order."""
        n = self.n_orb
        for p in range(n):
            for q in range(p + 1):
                ij = _tri(p, q)
                for r in range(n):
                    for s in range(r + 1):
                        if _tri(r, s) > ij:
                            continue
                        yield p, q, r, s, self._packed[_tri(ij, _tri(r, s))]

    def copy(self):
        return TwoElectronIntegrals(self.n_orb, self._packed.copy())


@dataclasses.dataclass
class MolecularIntegrals:
    """Second-quantized Hamiltonian data in an orthonormal orbital basis."""

    n_orb: int
    n_elec: int
    ms2: int
    e_core: float
    h1: np.ndarray
    g2: TwoElectronIntegrals
    source_label: str = ""
    parse_report: ParseReport | None = None

    def __post_init__(self):
        self.h1 = np.asarray(self.h1, dtype=float)
        if self.h1.shape != (self.n_orb, self.n_orb):
            raise ValidationError("h1 must be a square n_orb x n_orb matrix")
        if not np.allclose(self.h1, self.h1.T, atol=1e-10):
            raise ValidationError("h1 must be symmetric")
        if self.g2.n_orb != self.n_orb:
            raise ValidationError("g2 orbital count does not match n_orb")
        if not 0 <= self.n_elec <= 2 * self.n_orb:
            raise ValidationError("n_elec out of range for n_orb orbitals")
        self.h1 = 0.5 * (self.h1 + self.h1.T)
        self.h1.setflags(write=False)


def parse_fcidump(text, source_label=""):
    """Parse FCIDUMP text into a MolecularIntegrals.

    Later duplicate records overwrite earlier ones; the overwrite count is
    available as ``result.parse_report.n_duplicates``.  Raises FcidumpError
    with a line number on malformed content.
    """
    lines = text.splitlines()
    header_parts = []
    body_start = None
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        header_parts.append(stripped)
        if "&END" in stripped.upper() or stripped == "/" or stripped.endswith("/"):
            body_start = ln
            break
    if body_start is None:
        raise FcidumpError("header terminator (&END or /) not found")

    header = " ".join(header_parts)
    header = re.sub(r"^\s*&[A-Za-z]+", "", header)
    header = re.sub(r"&END.*$", "", header, flags=re.IGNORECASE)
    header = header.rstrip().rstrip("/")
    fields = {}
    for key, value in _HEADER_KV.findall(header):
        fields[key.upper()] = value.strip().rstrip(",").strip()

    def _int_field(name):
        if name not in fields:
            raise FcidumpError(f"header is missing {name}", line_number=1)
        try:
            return int(fields[name].split(",")[0])
        except ValueError:
            raise FcidumpError(f"header field {name} is not an integer", line_number=1) from None

    n_orb = _int_field("NORB")
    n_elec = _int_field("NELEC")
    ms2 = _int_field("MS2")
    if n_orb <= 0:
        raise FcidumpError("NORB must be positive", line_number=1)

    h1 = np.zeros((n_orb, n_orb))
    g2 = TwoElectronIntegrals(n_orb)
    e_core = 0.0
    seen = set()
    report = ParseReport()

    for ln in range(body_start, len(lines)):
        tokens = lines[ln].split()
        if not tokens:
            continue
        if len(tokens) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {len(tokens)} fields", line_number=ln + 1)
        try:
            value = float(_EXP_FIX.sub("E", tokens[0]))
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError:
            raise FcidumpError("unparseable record", line_number=ln + 1) from None
        for idx in (i, j, k, l):
            if not 0 <= idx <= n_orb:
                raise FcidumpError(f"orbital index {idx} outside [0, {n_orb}]", line_number=ln + 1)

        if i == j == k == l == 0:
            key = ("core",)
        elif k == 0 and l == 0 and i > 0 and j > 0:
            key = ("h1", max(i, j), min(i, j))
        elif i > 0 and j > 0 and k > 0 and l > 0:
            key = ("g2", g2._index(i - 1, j - 1, k - 1, l - 1))
        else:
            raise FcidumpError("record index pattern is neither core, one- nor two-electron", line_number=ln + 1)

        if key in seen:
            report.n_duplicates += 1
        seen.add(key)
        report.n_records += 1

        if key[0] == "core":
            e_core = value
        elif key[0] == "h1":
            h1[i - 1, j - 1] = value
            h1[j - 1, i - 1] = value
        else:
            g2.set(i - 1, j - 1, k - 1, l - 1, value)

    return MolecularIntegrals(
        n_orb=n_orb,
        n_elec=n_elec,
        ms2=ms2,
        e_core=e_core,
        h1=h1,
        g2=g2,
        source_label=source_label,
        parse_report=report,
    )


def read_fcidump(path):
    with open(path, encoding="ascii") as fh:
        return parse_fcidump(fh.read(), source_label=str(path))


def write_fcidump(ints, path=None):
    """Serialize MolecularIntegrals to FCIDUMP text.

    Values are printed with 17 significant digits so a parse -> write -> parse
    round trip is bit-exact.  Exact zeros are suppressed except the mandatory
    core-energy record.  Returns the text; also writes it when path is given.
    """
    out = []
    out.append(f" &FCI NORB={ints.n_orb},NELEC={ints.n_elec},MS2={ints.ms2},")
    out.append("  ORBSYM=" + ",".join(["1"] * ints.n_orb) + ",")
    out.append("  ISYM=1,")
    out.append(" &END")

    def rec(value, i, j, k, l):
        out.append(f" {value:.16E} {i:4d} {j:4d} {k:4d} {l:4d}")

    for p, q, r, s, v in ints.g2.iter_canonical():
        if v != 0.0:
            rec(v, p + 1, q + 1, r + 1, s + 1)
    for p in range(ints.n_orb):
        for q in range(p + 1):
            if ints.h1[p, q] != 0.0:
                rec(ints.h1[p, q], p + 1, q + 1, 0, 0)
    rec(ints.e_core, 0, 0, 0, 0)
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    return text


ORDERINGS = ("interleaved", "blocked")


class SpinOrbitalView:
    """Spin-orbital indexing over spatial integrals under a site ordering.

    interleaved: site 2p is orbital p alpha, site 2p+1 is orbital p beta.
    blocked:     sites [0, n_orb) are alpha, [n_orb, 2 n_orb) are beta.

    Antisymmetrized two-electron values are physicists' notation,
    <PQ||RS> = <PQ|RS> - <PQ|SR> with <PQ|RS> = (pr|qs) delta(sP,sR) delta(sQ,sS).
    """

    def __init__(self, ints, ordering="interleaved"):
        if ordering not in ORDERINGS:
            raise ValidationError(f"unknown ordering {ordering!r}, expected one of {ORDERINGS}")
        self.ints = ints
        self.ordering = ordering
        self.n_sites = 2 * ints.n_orb
        self._g = ints.g2.dense()
        # spatial orbital and spin for every site
        if ordering == "interleaved":
            self._orb = np.arange(self.n_sites) // 2
            self._spin = np.arange(self.n_sites) % 2
        else:
            self._orb = np.arange(self.n_sites) % ints.n_orb
            self._spin = np.arange(self.n_sites) // ints.n_orb

    def site(self, p, spin):
        if not 0 <= p < self.ints.n_orb or spin not in (0, 1):
            raise ValidationError("orbital or spin index out of range")
        if self.ordering == "interleaved":
            return 2 * p + spin
        return p + spin * self.ints.n_orb

    def orbital(self, site):
        return int(self._orb[site]), int(self._spin[site])

    def h(self, P, Q):
        if self._spin[P] != self._spin[Q]:
            return 0.0
        return self.ints.h1[self._orb[P], self._orb[Q]]

    def eri(self, P, Q, R, S):
        """Physicists' <PQ|RS>."""
        if self._spin[P] != self._spin[R] or self._spin[Q] != self._spin[S]:
            return 0.0
        return self._g[self._orb[P], self._orb[R], self._orb[Q], self._orb[S]]

    def eri_antisym(self, P, Q, R, S):
        """Physicists' antisymmetrized <PQ||RS>."""
        return self.eri(P, Q, R, S) - self.eri(P, Q, S, R)
