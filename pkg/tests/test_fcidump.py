"""FCIDUMP parsing, 8-fold symmetric storage, and the spin-orbital view."""

import numpy as np
import pytest

from qcmps.errors import FcidumpError, ValidationError
from qcmps.fcidump import (
    ORDERINGS,
    SpinOrbitalView,
    parse_fcidump,
    read_fcidump,
    write_fcidump,
)

from conftest import fixture_path, load_view

SIMPLE = """ &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
  0.5000000000000000E+00  1  1  1  1
  0.1250000000000000E+00  2  1  1  1
  0.7500000000000000E+00  1  1  0  0
  0.2000000000000000E+00  2  2  0  0
  0.3000000000000000E+00  0  0  0  0
"""


def test_header_fields_h4():
    ints = read_fcidump(fixture_path("h4_2.0000"))
    assert ints.n_orb == 4
    assert ints.n_elec == 4
    assert ints.ms2 == 0
    assert ints.e_core > 0.0


def test_parse_simple_records():
    ints = parse_fcidump(SIMPLE)
    assert ints.n_orb == 2
    assert ints.e_core == 0.3
    assert ints.h1[0, 0] == 0.75
    assert ints.h1[1, 1] == 0.2
    assert ints.g2.get(0, 0, 0, 0) == 0.5
    assert ints.g2.get(1, 0, 0, 0) == 0.125
    assert ints.parse_report.n_records == 5


def test_eight_fold_symmetry_of_storage():
    ints = parse_fcidump(SIMPLE)
    g = ints.g2
    # one stored value serves all eight index images
    images = [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (1, 0, 0, 0),
        (0, 0, 1, 0),
        (0, 0, 0, 1),
    ]
    for p, q, r, s in images:
        assert g.get(p, q, r, s) == 0.125


def test_d_exponent_and_duplicates():
    text = SIMPLE.replace("0.5000000000000000E+00", "0.5000000000000000D+00")
    text += "  0.9000000000000000E+00  1  1  1  1\n"
    ints = parse_fcidump(text)
    assert ints.g2.get(0, 0, 0, 0) == 0.9  # last record wins
    assert ints.parse_report.n_duplicates == 1


def test_malformed_line_raises_with_line_number():
    bad = SIMPLE.replace("  0.2000000000000000E+00  2  2  0  0", "  nonsense  2  2  0  0")
    with pytest.raises(FcidumpError) as err:
        parse_fcidump(bad)
    assert err.value.line_number is not None


def test_missing_header_field_raises():
    with pytest.raises(FcidumpError):
        parse_fcidump(" &FCI NORB=2,MS2=0,\n &END\n  0.1  0  0  0  0\n")


def test_index_out_of_range_raises():
    with pytest.raises(FcidumpError):
        parse_fcidump(SIMPLE + "  0.1  3  1  1  1\n")


def test_write_parse_round_trip_is_exact():
    ints = read_fcidump(fixture_path("h4_2.0000"))
    again = parse_fcidump(write_fcidump(ints))
    assert again.n_orb == ints.n_orb
    assert again.n_elec == ints.n_elec
    assert again.ms2 == ints.ms2
    assert again.e_core == ints.e_core
    assert np.array_equal(again.h1, ints.h1)
    assert np.array_equal(again.g2.dense(), ints.g2.dense())


def test_dense_has_eight_fold_symmetry():
    g = read_fcidump(fixture_path("h4_2.0000")).g2.dense()
    assert np.allclose(g, g.transpose(1, 0, 2, 3))
    assert np.allclose(g, g.transpose(0, 1, 3, 2))
    assert np.allclose(g, g.transpose(2, 3, 0, 1))


def test_view_site_maps_are_inverse_bijections():
    for ordering in ORDERINGS:
        view = load_view("h4_2.0000", ordering)
        seen = set()
        for p in range(4):
            for spin in (0, 1):
                site = view.site(p, spin)
                assert view.orbital(site) == (p, spin)
                seen.add(site)
        assert seen == set(range(8))


def test_interleaved_and_blocked_layouts():
    view_i = load_view("h4_2.0000", "interleaved")
    view_b = load_view("h4_2.0000", "blocked")
    assert [view_i.site(p, s) for p in range(4) for s in (0, 1)] == list(range(8))
    assert [view_b.site(p, 0) for p in range(4)] == [0, 1, 2, 3]
    assert [view_b.site(p, 1) for p in range(4)] == [4, 5, 6, 7]


def test_view_h_spin_selection():
    view = load_view("h4_2.0000")
    ints = view.ints
    for p in range(4):
        for q in range(4):
            assert view.h(view.site(p, 0), view.site(q, 0)) == ints.h1[p, q]
            assert view.h(view.site(p, 1), view.site(q, 1)) == ints.h1[p, q]
            assert view.h(view.site(p, 0), view.site(q, 1)) == 0.0


def test_view_eri_spin_selection():
    view = load_view("h4_2.0000")
    ints = view.ints
    a0, a1 = view.site(0, 0), view.site(1, 0)
    b2, b3 = view.site(2, 1), view.site(3, 1)
    # <PQ|RS> is nonzero only when spin(P)=spin(R) and spin(Q)=spin(S)
    assert view.eri(a0, b2, a1, b3) == ints.g2.get(0, 1, 2, 3)
    assert view.eri(a0, a1, b2, b3) == 0.0
    assert view.eri_antisym(a0, b2, a1, b3) == view.eri(a0, b2, a1, b3) - view.eri(a0, b2, b3, a1)


def test_unknown_ordering_rejected():
    ints = read_fcidump(fixture_path("h2_0.7414"))
    with pytest.raises(ValidationError):
        SpinOrbitalView(ints, ordering="zigzag")
