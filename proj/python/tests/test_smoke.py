import pytest

import fsvqe

H2 = "h2/h2_0.74.fcidump"


def test_h2_hamiltonian_counts():
    n, terms = fsvqe.hamiltonian(H2)
    assert n == 4
    assert len(terms) == 15
    assert fsvqe.group_count(n, terms, "qwc") == 5


def test_folded_operator_counts():
    n, terms = fsvqe.hamiltonian(H2)
    folded = fsvqe.fold(n, terms, 0.0)
    assert len(folded) == 24
    assert fsvqe.group_count(n, folded, "qwc") == 9
    assert fsvqe.group_count(n, folded, "gc") == 2


def test_groups_cover_every_term_once():
    n, terms = fsvqe.hamiltonian(H2)
    members = [label for g in fsvqe.groups(n, terms, "qwc") for label in g]
    assert sorted(members) == sorted(label for label, _ in terms if set(label) != {"I"})


def test_exact_fsvqe_reaches_the_top_state():
    levels = fsvqe.spectrum(H2, electrons=2)
    point = fsvqe.fsvqe(H2, "0101")
    assert point["converged"]
    assert point["energy"] == pytest.approx(levels[-1], abs=1e-6)


def test_bad_reference_raises():
    with pytest.raises(Exception):
        fsvqe.fsvqe(H2, "01x1")
