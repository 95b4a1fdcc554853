from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from llesym.scalars import I, ONE, Scalar
from llesym.weyl import (
    DiffOperator,
    MatrixCoeff,
    PlaneWaveState,
    Poly,
    anticommutator,
    apply,
    commutator,
    linear_combination,
    monomial,
)

T, X1, X2, X3 = sympy.symbols("t x1 x2 x3")
VARS = (T, X1, X2, X3)

gauss = st.sampled_from([(1, 0), (-1, 0), (2, 0), (0, 1), (0, -1), (1, 1)])


@st.composite
def operators(draw, max_terms=3, max_exp=2):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        coords = tuple(draw(st.integers(0, max_exp)) for _ in range(4))
        derivs = tuple(draw(st.integers(0, max_exp)) for _ in range(4))
        entries = {}
        for _ in range(draw(st.integers(1, 3))):
            r, c = draw(st.integers(0, 3)), draw(st.integers(0, 3))
            entries[(r, c)] = Scalar(*draw(gauss))
        terms[monomial(coords, derivs)] = MatrixCoeff(entries)
    return DiffOperator(terms)


def _sym(x: Scalar):
    (c,) = x.laurent_terms().values()
    return sympy.Rational(int(c[0].numerator), int(c[0].denominator)) + sympy.I * sympy.Rational(
        int(c[1].numerator), int(c[1].denominator)
    )


def act(op: DiffOperator, f):
    """Independent action of an operator on a 4-vector of sympy expressions."""
    out = [sympy.Integer(0)] * 4
    for mono, mat in op.terms.items():
        coef = sympy.Mul(*[v**e for v, e in zip(VARS, mono[:4])])
        df = []
        for comp in f:
            g = comp
            for v, e in zip(VARS, mono[4:]):
                if e:
                    g = sympy.diff(g, v, e)
            df.append(g)
        for (r, c), x in mat.entries.items():
            out[r] += _sym(x) * coef * df[c]
    return [sympy.expand(o) for o in out]


TEST_SPINOR = [T**2 * X1 + X2**3, X1 * X3 + T, X2 * X2 * X3 + 1, T**3 * X1 * X2 * X3]


def test_canonical_commutator():
    for j in range(4):
        x, d = DiffOperator.coordinate(j), DiffOperator.derivative(j)
        assert d * x - x * d == DiffOperator.identity()
        assert x * d == DiffOperator.term(monomial(tuple(int(k == j) for k in range(4)), tuple(int(k == j) for k in range(4))))


def test_normal_ordering_formula():
    x, d = DiffOperator.coordinate(1), DiffOperator.derivative(1)
    lhs = d * d * x * x
    rhs = x * x * d * d + (x * d).scale(4) + DiffOperator.scalar(2)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(operators(), operators(), operators())
def test_associativity_and_leibniz(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert commutator(a, b * c) == commutator(a, b) * c + b * commutator(a, c)
    assert commutator(a, b) == -commutator(b, a)
    assert anticommutator(a, b) == anticommutator(b, a)


@settings(max_examples=15, deadline=None)
@given(operators(max_terms=2), operators(max_terms=2))
def test_product_matches_composition(a, b):
    lhs = act(a * b, TEST_SPINOR)
    rhs = act(a, act(b, TEST_SPINOR))
    assert all(sympy.expand(p - q) == 0 for p, q in zip(lhs, rhs))


@settings(max_examples=20, deadline=None)
@given(operators(), operators())
def test_term_order_does_not_matter(a, b):
    pairs = [(ma, mb) for ma in a.terms for mb in b.terms]
    rng = random.Random(7)
    totals = []
    for _ in range(2):
        rng.shuffle(pairs)
        acc = DiffOperator.zero()
        for ma, mb in pairs:
            acc = acc + DiffOperator({ma: a.terms[ma]}) * DiffOperator({mb: b.terms[mb]})
        totals.append(acc.terms)
    assert totals[0] == totals[1] == (a * b).terms


@settings(max_examples=20, deadline=None)
@given(operators(max_terms=2, max_exp=1), operators(max_terms=2, max_exp=1))
def test_plane_wave_action_is_compatible(a, b):
    psi = PlaneWaveState([Poly.var("t"), Poly.const(1), Poly.var("x1") * Poly.var("k2"), Poly.const(I)])
    assert apply(a * b, psi) == apply(a, apply(b, psi))


def test_plane_wave_derivative_twist():
    psi = PlaneWaveState([Poly.const(1), Poly(), Poly(), Poly()])
    out = apply(DiffOperator.derivative(0), psi)
    assert out.components[0] == Poly.var("E") * (-I)
    out = apply(DiffOperator.derivative(2), psi)
    assert out.components[0] == Poly.var("k2") * I


def test_matrix_coefficients():
    a = MatrixCoeff.unit(0, 1)
    b = MatrixCoeff.unit(1, 0)
    assert a * b == MatrixCoeff.unit(0, 0)
    assert not (a * a)
    assert (a + b).trace() == 0 * ONE
    assert MatrixCoeff.identity().is_scalar() == ONE


def test_pow_and_inverse_rules():
    d = DiffOperator.derivative(1)
    assert d**3 == d * d * d
    assert d**0 == DiffOperator.identity()
    with pytest.raises(ValueError):
        d ** (-1)
    two = DiffOperator.scalar(2)
    assert two ** (-1) == DiffOperator.scalar(Scalar(1) / 2)


def test_linear_combination_drops_zeros():
    d = DiffOperator.derivative(1)
    assert linear_combination([(ONE, d), (-ONE, d)]).is_zero()
