from __future__ import annotations

import numpy as np
import pytest

from llesym.clifford import (
    CliffordViolation,
    GammaRep,
    build_rep,
    clifford_relations,
    derived_identities,
    format_rep_file,
    parse_rep_file,
)
from llesym.scalars import I, ONE, ZERO, Scalar
from llesym.weyl import MatrixCoeff


@pytest.mark.parametrize("name", ["dirac", "chiral"])
def test_all_relations_hold(name):
    rep = build_rep(name)
    rel = clifford_relations(rep)
    assert len(rel) == 10 and all(rel.values())
    ids = derived_identities(rep)
    assert all(ids.values()), [k for k, v in ids.items() if not v]


def test_numeric_oracle_dirac(dirac):
    # textbook Dirac matrices built independently with numpy
    s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    z, e = np.zeros((2, 2)), np.eye(2)
    g = [np.block([[e, z], [z, -e]])] + [np.block([[z, sj], [-sj, z]]) for sj in s]
    g4 = g[0] @ g[1] @ g[2] @ g[3]
    for mu in range(5):
        ours = np.array([[x.to_complex(1.0) for x in row] for row in dirac.gamma(mu).to_rows()])
        ref = g4 if mu == 4 else g[mu]
        assert np.allclose(ours, ref)


def test_nilpotent_projectors(chiral):
    a, b = chiral.alpha, chiral.beta
    assert a * a == MatrixCoeff.zero() and b * b == MatrixCoeff.zero()
    assert a * b + b * a == MatrixCoeff.identity()


def test_decompose_reconstructs(dirac):
    m = dirac.alpha * dirac.gamma(2) + dirac.beta.scale(I)
    acc = MatrixCoeff.zero()
    coeffs = dict(dirac.decompose(m))
    for text, mat, _ in dirac.basis():
        if text in coeffs:
            acc = acc + mat.scale(coeffs[text])
    assert acc == m


def test_rep_file_round_trip(tmp_path, chiral):
    path = tmp_path / "chiral_copy.rep"
    path.write_text(format_rep_file(chiral), encoding="utf-8")
    rep = build_rep(path)
    assert rep.gammas == chiral.gammas


def test_similarity_transformed_rep(tmp_path, dirac):
    # U = I + E_01 is invertible with inverse I - E_01
    u = MatrixCoeff.identity() + MatrixCoeff.unit(0, 1)
    u_inv = MatrixCoeff.identity() - MatrixCoeff.unit(0, 1)
    rep = GammaRep("conj", tuple(u * g * u_inv for g in dirac.gammas))
    assert all(clifford_relations(rep).values())
    assert all(derived_identities(rep).values())


def test_violation_reports_pair():
    bad = list(build_rep("dirac").gammas)
    bad[2] = bad[1]
    with pytest.raises(CliffordViolation) as info:
        GammaRep("bad", tuple(bad))
    assert info.value.pair == (1, 2)


def test_malformed_file():
    with pytest.raises(ValueError):
        parse_rep_file("1, 0\n0, 1\n")


def test_unknown_name():
    with pytest.raises(ValueError):
        build_rep("no-such-rep")
