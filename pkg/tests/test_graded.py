from __future__ import annotations

import random
from itertools import product

import pytest

from llesym.graded import (
    antisymmetry_check,
    bracket_table,
    compare_algebras,
    get_spec,
    jacobi_check,
    jacobiator,
    rank_report,
    sub_superalgebras,
    subalgebra_check,
    superalgebra_spec,
    z2z2_spec,
)
from llesym.scalars import ONE, Scalar
from llesym.weyl import bracket_kind


def test_bracket_rule():
    assert bracket_kind((1, 0), (1, 0)) == "anticommutator"
    assert bracket_kind((1, 0), (0, 1)) == "commutator"
    assert bracket_kind((1, 1), (1, 1)) == "commutator"
    assert bracket_kind((1, 1), (0, 1)) == "anticommutator"


def test_spec_sizes():
    s, z = superalgebra_spec(), z2z2_spec()
    assert len(s.generators) == 18 and "M" in s.generators
    assert len(z.generators) == 59 and "M" not in z.generators
    with pytest.raises(ValueError):
        get_spec("lie")


def test_super_table_closes(super_table):
    assert super_table.closed and super_table.graded
    assert super_table.rank == 18


def test_m_is_central(super_table):
    for g in super_table.spec.generators:
        assert super_table[("M", g)].expansion == ()
        assert super_table[(g, "M")].expansion == ()


def test_super_table_values(super_table):
    t = super_table
    assert dict(t[("Q", "Q")].expansion) == {"H": Scalar(2)}
    assert dict(t[("S", "S")].expansion) == {"K": Scalar(2)}
    assert dict(t[("Q", "S")].expansion) == {"D": ONE}
    for j, k in product((1, 2, 3), repeat=2):
        assert dict(t[(f"X{j}", f"X{k}")].expansion) == ({"M": ONE} if j == k else {})
        assert dict(t[(f"P{j}", f"G{k}")].expansion) == ({"M": ONE} if j == k else {})


def test_tilde_x_does_not_join_super_algebra(catalog):
    table = bracket_table(superalgebra_spec(include_xt=True), catalog)
    failing = {(e.left, e.right) for e in table.failures()}
    assert ("Q", "Xt1") in failing
    assert all("Xt" in a or "Xt" in b for a, b in failing)


def test_z2z2_table_closes_in_components(z2z2_table):
    assert z2z2_table.closed and z2z2_table.graded
    assert "M" not in z2z2_table.appearing()


def test_antisymmetry(super_table, z2z2_table, catalog):
    for table in (super_table, z2z2_table):
        assert antisymmetry_check(table.spec, catalog, table=table) == []


def test_antisymmetry_without_table(catalog):
    spec = superalgebra_spec()
    pairs = [("Q", "S"), ("X1", "P1"), ("D", "K")]
    assert antisymmetry_check(spec, catalog, pairs) == []


def test_super_jacobi_all_triples(super_table, catalog):
    assert jacobi_check(super_table.spec, catalog, super_table) == []


def test_z2z2_expansion_jacobi_all_triples(z2z2_table, catalog):
    assert jacobi_check(z2z2_table.spec, catalog, z2z2_table, method="expansion") == []


def test_sampled_direct_jacobi(z2z2_table, catalog):
    spec = z2z2_table.spec
    rng = random.Random(2024)
    names = sorted(spec.generators)
    triples = [tuple(rng.choice(names) for _ in range(3)) for _ in range(300)]
    assert jacobi_check(spec, catalog, z2z2_table, method="direct", triples=triples) == []
    for a, b, c in triples[:40]:
        fast = jacobiator(spec, catalog, a, b, c, z2z2_table, "expansion")
        direct = jacobiator(spec, catalog, a, b, c, z2z2_table, "direct")
        assert fast == direct


def test_jacobi_detects_bad_grading(catalog):
    # with X1 declared even, [Q, X1] replaces {Q, X1} = P1 and leaves the span
    spec = superalgebra_spec()
    degrees = dict(spec.degrees)
    degrees["X1"] = (0, 0)
    bad = type(spec)("bad", spec.generators, degrees, spec.rule)
    table = bracket_table(bad, catalog)
    assert not table.closed or not table.graded


def test_sub_superalgebras(z2z2_table, catalog):
    subs = sub_superalgebras(z2z2_table.spec)
    assert set(subs) == {"g00+g01", "g00+g10"}
    for gens in subs.values():
        assert subalgebra_check(z2z2_table.spec, gens, catalog, z2z2_table)


def test_non_subalgebra(catalog):
    assert not subalgebra_check(superalgebra_spec(), ["Q"], catalog)


def test_compare_divergences(super_table, z2z2_table, catalog):
    div = {(d.left, d.right): d for d in compare_algebras(catalog, super_table, z2z2_table)}
    for j, k in product((1, 2, 3), repeat=2):
        pg = tuple(sorted((f"P{j}", f"G{k}")))
        assert pg in div and div[pg].super_kind == "commutator" and div[pg].z2z2_kind == "anticommutator"
        if j <= k:
            xx = (f"X{j}", f"X{k}")
            assert div[xx].super_kind == "anticommutator" and div[xx].z2z2_kind == "commutator"


def test_rank_relations(catalog):
    report = rank_report(catalog, z2z2_spec().generators)
    assert report["count"] == 59 and report["rank"] == 56
    assert [r["generator"] for r in report["relations"]] == ["W21", "W31", "W32"]


def test_tables_are_rep_independent(z2z2_table, super_table, chiral_catalog, dirac, chiral):
    for spec, table in ((super_table.spec, super_table), (z2z2_table.spec, z2z2_table)):
        other = bracket_table(spec, chiral_catalog)
        assert table.to_json(dirac.render) == other.to_json(chiral.render)
        assert table.to_csv() == other.to_csv()


def test_exports(super_table):
    md = super_table.to_markdown()
    assert "| Q | Q | {,} | (2)*H |" in md
    assert super_table.to_csv().splitlines()[0] == "left,right,kind,expansion,closed"
