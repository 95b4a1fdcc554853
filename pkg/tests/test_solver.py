from __future__ import annotations

import pytest

import numeric_oracle as oracle
from llesym.solver import (
    Ansatz,
    _quadratic_step,
    solve_symmetry_ansatz,
    supercharge_uniqueness,
    symmetry_space,
)

# exact dimensions at the default bounds (order 1, degree 2, complete
# multiplier degree 2); confirmed independently by the float oracle below
GOLDEN = {"commutator": 49, "anticommutator": 49}
# a degree-1 multiplier truncates the anticommutator system
GOLDEN_MULTIPLIER_ONE = {"commutator": 49, "anticommutator": 39}


def test_ansatz_slots():
    a = Ansatz()
    assert a.unknowns == 1200
    assert len(a.slots()) == 1200 and len(set(a.slots())) == 1200
    with pytest.raises(ValueError):
        Ansatz(order=-1)


@pytest.fixture(scope="module")
def reports(catalog):
    return {k: solve_symmetry_ansatz(catalog, kind=k) for k in ("commutator", "anticommutator")}


@pytest.mark.parametrize("kind", ["commutator", "anticommutator"])
def test_certificates_and_golden_dimension(reports, kind):
    r = reports[kind]
    assert r.multiplier_degree == 2
    assert r.dimension == GOLDEN[kind]
    assert r.certificates and all(r.certificates.values())


def test_every_low_order_generator_is_recovered(reports, catalog):
    for name in catalog.names():
        op = catalog[name]
        if op.order > 1 or op.coordinate_degree > 2:
            continue
        kind = "anticommutator" if name in ("Q", "S", "X1", "X2", "X3") else "commutator"
        assert reports[kind].contains(op), name


def test_multiplier_degree_truncation(catalog):
    for kind, dim in GOLDEN_MULTIPLIER_ONE.items():
        assert len(symmetry_space(catalog.omega, Ansatz(), kind, 1)) == dim


@pytest.mark.parametrize("kind", ["commutator", "anticommutator"])
def test_dimension_stable(catalog, chiral_catalog, kind):
    assert len(symmetry_space(catalog.omega, Ansatz(), kind, 3)) == GOLDEN[kind]
    assert solve_symmetry_ansatz(chiral_catalog, kind=kind).dimension == GOLDEN[kind]


@pytest.mark.slow
@pytest.mark.parametrize("m", [2.0, 3.0])
@pytest.mark.parametrize("kind", ["commutator", "anticommutator"])
def test_numeric_oracle_dimension(m, kind):
    assert oracle.dimension(m, kind) == GOLDEN[kind]


@pytest.mark.slow
def test_numeric_oracle_truncated_dimension():
    assert oracle.dimension(2.0, "anticommutator", multiplier_degree=1) == GOLDEN_MULTIPLIER_ONE["anticommutator"]


@pytest.fixture(scope="module")
def uniqueness(catalog):
    return supercharge_uniqueness(catalog)


def test_supercharge_chain(uniqueness):
    u = uniqueness
    assert u.dimensions == {"a": 49, "b": 1, "c": 0}
    assert u.contains_q == {"a": True, "b": True, "c": False}
    assert not u.exists and u.conclusive and u.solutions == []
    payload = u.payload()
    assert set(payload) >= {"exists", "solutions", "bounds"}


@pytest.mark.slow
def test_supercharge_chain_numeric_oracle():
    assert oracle.supercharge_dims(3.0) == {"a": 49, "b": 1, "c": 0}


def test_quadratic_step_cases(catalog):
    h2 = catalog["H"].scale(2)
    # {X1, X1} = M is never a multiple of 2H: the linear relaxation is inconsistent
    exists, conclusive, _, _ = _quadratic_step([catalog["X1"]], h2)
    assert not exists and conclusive
    # Q itself solves {c Q, c Q} = 2H with c^2 = 1
    exists, conclusive, sols, _ = _quadratic_step([catalog["Q"]], h2)
    assert exists and sols and "c^2 = 1" in sols[0]
    exists, conclusive, _, _ = _quadratic_step([], h2)
    assert not exists and conclusive


def test_cap_reports_inconclusive(catalog):
    u = supercharge_uniqueness(catalog, cap=-1)
    assert not u.conclusive
