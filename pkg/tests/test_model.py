from __future__ import annotations

import pytest

from llesym.model import FIRST_ORDER_COMMUTING, FIRST_ORDER_ANTICOMMUTING, SECOND_ORDER, build_lle, levi_civita
from llesym.scalars import I, M, Scalar
from llesym.weyl import DiffOperator, anticommutator, commutator


def test_levi_civita():
    assert levi_civita(1, 2, 3) == 1
    assert levi_civita(2, 1, 3) == -1
    assert levi_civita(1, 1, 3) == 0


def test_catalog_contents(catalog):
    assert catalog.names() == list(FIRST_ORDER_COMMUTING + FIRST_ORDER_ANTICOMMUTING + SECOND_ORDER)
    assert len(SECOND_ORDER) == 39
    assert catalog["Omega"] == catalog.omega


@pytest.mark.parametrize("rep_name", ["dirac", "chiral"])
def test_omega_squared(rep_name, request):
    rep = request.getfixturevalue(rep_name)
    omega = build_lle(rep)
    lap = sum((DiffOperator.derivative(j, 2) for j in (1, 2, 3)), DiffOperator.zero())
    assert omega * omega == DiffOperator.derivative(0).scale(-4 * I * M) + lap


def test_anticommutator_table(catalog):
    c = catalog
    assert anticommutator(c["Q"], c["Q"]) == c["H"].scale(2)
    assert anticommutator(c["S"], c["S"]) == c["K"].scale(2)
    assert anticommutator(c["Q"], c["S"]) == c["D"]
    for j in (1, 2, 3):
        assert anticommutator(c["Q"], c[f"X{j}"]) == c[f"P{j}"]
        assert anticommutator(c["S"], c[f"X{j}"]) == c[f"G{j}"]
        for k in (1, 2, 3):
            expected = c["M"] if j == k else DiffOperator.zero()
            assert anticommutator(c[f"X{j}"], c[f"X{k}"]) == expected


def test_schrodinger_brackets(catalog):
    c = catalog
    for j in (1, 2, 3):
        assert commutator(c[f"P{j}"], c[f"G{j}"]) == c["M"]
        assert commutator(c["D"], c[f"P{j}"]) == -c[f"P{j}"]
    assert commutator(c["D"], c["H"]) == c["H"].scale(-2)
    assert commutator(c["H"], c["K"]) == c["D"]


def test_m_is_scalar(catalog):
    assert catalog["M"].as_scalar() == 2 * I * M


def test_xt_from_fermionic_translations(catalog):
    c = catalog
    assert commutator(c["X2"], c["X3"]) == c["Xt1"]


def test_rendering_is_rep_independent(catalog, chiral_catalog):
    for name in catalog.names():
        assert catalog.render(name) == chiral_catalog.render(name), name
