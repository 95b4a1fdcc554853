"""Normal-ordered 4x4-matrix-valued differential operators in (t, x1, x2, x3).

A monomial is the 8-tuple ``(e_t, e_x1, e_x2, e_x3, d_t, d_x1, d_x2, d_x3)``
standing for ``t^e_t x1^e_x1 ... dt^d_t d1^d_x1 ...`` with every coordinate
to the left of every derivative. A :class:`DiffOperator` maps monomials to
nonzero :class:`MatrixCoeff` values, so operator equality is equality of
term maps.

Composition moves derivatives past coordinates with, per variable z,

    dz^n z^m = sum_k k! C(n,k) C(m,k) z^(m-k) dz^(n-k)

The module also carries the formal plane-wave calculus used to validate
symmetry operators on solutions.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product as _cartesian
from math import comb, factorial
from typing import Callable, Iterable, Mapping

from .scalars import I, ONE, ZERO, Scalar, as_scalar

COORDS = ("t", "x1", "x2", "x3")
DERIVS = ("dt", "d1", "d2", "d3")
N = 4

Monomial = tuple  # 8 ints
ZERO_MONO: Monomial = (0,) * 8


def monomial(coords=(0, 0, 0, 0), derivs=(0, 0, 0, 0)) -> Monomial:
    return tuple(coords) + tuple(derivs)


def mono_order(m: Monomial) -> int:
    """Total derivative order."""
    return m[4] + m[5] + m[6] + m[7]


def mono_degree(m: Monomial) -> int:
    """Total coordinate degree."""
    return m[0] + m[1] + m[2] + m[3]


# --------------------------------------------------------------------------
# Matrix coefficients
# --------------------------------------------------------------------------


class MatrixCoeff:
    """Sparse 4x4 matrix over the Scalar field; missing entries are zero."""

    __slots__ = ("entries", "_rows", "_hash")

    def __init__(self, entries: Mapping | None = None):
        ent = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < N and 0 <= c < N):
                raise IndexError(f"matrix index {(r, c)} out of range")
            v = as_scalar(v)
            if v:
                ent[(r, c)] = v
        self.entries = ent
        self._rows = None
        self._hash = None

    @classmethod
    def _raw(cls, entries: dict) -> MatrixCoeff:
        m = object.__new__(cls)
        m.entries = entries
        m._rows = None
        m._hash = None
        return m

    @classmethod
    def from_rows(cls, rows) -> MatrixCoeff:
        if len(rows) != N or any(len(r) != N for r in rows):
            raise ValueError("MatrixCoeff needs a 4x4 grid")
        return cls({(r, c): rows[r][c] for r in range(N) for c in range(N)})

    @classmethod
    def identity(cls) -> MatrixCoeff:
        return cls._raw({(k, k): ONE for k in range(N)})

    @classmethod
    def zero(cls) -> MatrixCoeff:
        return cls._raw({})

    @classmethod
    def unit(cls, r: int, c: int) -> MatrixCoeff:
        return cls._raw({(r, c): ONE})

    def row_index(self) -> dict:
        if self._rows is None:
            rows: dict = {}
            for (r, c), v in self.entries.items():
                rows.setdefault(r, []).append((c, v))
            self._rows = rows
        return self._rows

    def __getitem__(self, idx) -> Scalar:
        return self.entries.get(idx, ZERO)

    def to_rows(self) -> list[list[Scalar]]:
        return [[self[(r, c)] for c in range(N)] for r in range(N)]

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, MatrixCoeff) and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.entries.items()))
        return self._hash

    def __repr__(self) -> str:
        return "MatrixCoeff(" + repr([[str(x) for x in row] for row in self.to_rows()]) + ")"

    def __add__(self, other: MatrixCoeff) -> MatrixCoeff:
        return MatrixCoeff._raw(_dict_add(self.entries, other.entries))

    def __sub__(self, other: MatrixCoeff) -> MatrixCoeff:
        return self + (-other)

    def __neg__(self) -> MatrixCoeff:
        return MatrixCoeff._raw({k: -v for k, v in self.entries.items()})

    def __mul__(self, other) -> MatrixCoeff:
        if isinstance(other, MatrixCoeff):
            return MatrixCoeff._raw(_matmul(self.entries, other.row_index()))
        return self.scale(other)

    def __rmul__(self, other) -> MatrixCoeff:
        return self.scale(other)

    def __matmul__(self, other: MatrixCoeff) -> MatrixCoeff:
        return self * other

    def __pow__(self, k: int) -> MatrixCoeff:
        out = MatrixCoeff.identity()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, x) -> MatrixCoeff:
        x = x if type(x) is int else as_scalar(x)
        if not x:
            return MatrixCoeff.zero()
        return MatrixCoeff._raw({k: v * x for k, v in self.entries.items()})

    def trace(self) -> Scalar:
        acc = ZERO
        for k in range(N):
            acc = acc + self[(k, k)]
        return acc

    def is_scalar(self) -> Scalar | None:
        """The scalar c if this matrix equals c * identity, else None."""
        if not self.entries:
            return ZERO
        c = self.entries.get((0, 0))
        if c is None or len(self.entries) != N:
            return None
        if all(self.entries.get((k, k)) == c for k in range(N)):
            return c
        return None


def commutator_m(a: MatrixCoeff, b: MatrixCoeff) -> MatrixCoeff:
    return a * b - b * a


def anticommutator_m(a: MatrixCoeff, b: MatrixCoeff) -> MatrixCoeff:
    return a * b + b * a


def _dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        o = out.get(k)
        if o is None:
            out[k] = v
        else:
            t = o + v
            if t:
                out[k] = t
            else:
                del out[k]
    return out


def _matmul(a: dict, b_rows: dict) -> dict:
    out: dict = {}
    for (r, k), x in a.items():
        row = b_rows.get(k)
        if row is None:
            continue
        for c, y in row:
            key = (r, c)
            p = x * y
            o = out.get(key)
            out[key] = p if o is None else o + p
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# Normal ordering
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _reorder_1d(n: int, m: int) -> tuple:
    return tuple(
        (factorial(k) * comb(n, k) * comb(m, k), m - k, n - k) for k in range(min(n, m) + 1)
    )


@lru_cache(maxsize=None)
def _reorder(derivs: tuple, coords: tuple) -> tuple:
    """Normal-ordered expansion of ``d^derivs x^coords`` as (int, coord4, deriv4) triples."""
    per_var = [_reorder_1d(n, m) for n, m in zip(derivs, coords)]
    out = []
    for combo in _cartesian(*per_var):
        coef = 1
        for k, _, _ in combo:
            coef *= k
        out.append((coef, tuple(z for _, z, _ in combo), tuple(d for _, _, d in combo)))
    return tuple(out)


def _op_mul(lt: dict, rt: dict) -> dict:
    out: dict = {}
    right = [(m2[:4], m2[4:], B.row_index()) for m2, B in rt.items()]
    for m1, A in lt.items():
        c1 = m1[:4]
        d1 = m1[4:]
        ae = A.entries
        trivial = d1 == (0, 0, 0, 0)
        for c2, d2, brows in right:
            P = _matmul(ae, brows)
            if not P:
                continue
            if trivial:
                expansion = ((1, c2, (0, 0, 0, 0)),)
            else:
                expansion = _reorder(d1, c2)
            for k, cc, dd in expansion:
                mono = (
                    c1[0] + cc[0], c1[1] + cc[1], c1[2] + cc[2], c1[3] + cc[3],
                    dd[0] + d2[0], dd[1] + d2[1], dd[2] + d2[2], dd[3] + d2[3],
                )
                tgt = out.get(mono)
                if tgt is None:
                    out[mono] = P if k == 1 else {key: v * k for key, v in P.items()}
                    if k == 1:
                        P = dict(P)  # the stored copy may be mutated below
                else:
                    for key, v in P.items():
                        if k != 1:
                            v = v * k
                        o = tgt.get(key)
                        tgt[key] = v if o is None else o + v
    return _compress(out)


def _compress(raw: dict) -> dict:
    terms = {}
    for mono, ent in raw.items():
        ent = {k: v for k, v in ent.items() if v}
        if ent:
            terms[mono] = MatrixCoeff._raw(ent)
    return terms


# --------------------------------------------------------------------------
# Operators
# --------------------------------------------------------------------------


class DiffOperator:
    """Immutable normal-ordered matrix differential operator."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for mono, mat in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != 8 or min(mono) < 0:
                raise ValueError(f"bad monomial {mono}")
            if not isinstance(mat, MatrixCoeff):
                mat = MatrixCoeff(mat)
            if mat:
                clean[mono] = clean[mono] + mat if mono in clean else mat
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> DiffOperator:
        op = object.__new__(cls)
        op.terms = terms
        op._hash = None
        return op

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> DiffOperator:
        return cls._raw({})

    @classmethod
    def identity(cls) -> DiffOperator:
        return cls._raw({ZERO_MONO: MatrixCoeff.identity()})

    @classmethod
    def scalar(cls, x) -> DiffOperator:
        x = as_scalar(x)
        if not x:
            return cls.zero()
        return cls._raw({ZERO_MONO: MatrixCoeff.identity().scale(x)})

    @classmethod
    def matrix(cls, mat: MatrixCoeff) -> DiffOperator:
        return cls._raw({ZERO_MONO: mat} if mat else {})

    @classmethod
    def coordinate(cls, index: int, power: int = 1) -> DiffOperator:
        c = [0, 0, 0, 0]
        c[index] = power
        return cls._raw({monomial(c): MatrixCoeff.identity()})

    @classmethod
    def derivative(cls, index: int, power: int = 1) -> DiffOperator:
        d = [0, 0, 0, 0]
        d[index] = power
        return cls._raw({monomial(derivs=d): MatrixCoeff.identity()})

    @classmethod
    def term(cls, mono: Monomial, mat: MatrixCoeff | None = None) -> DiffOperator:
        mat = MatrixCoeff.identity() if mat is None else mat
        return cls._raw({tuple(mono): mat} if mat else {})

    @classmethod
    def from_vector(cls, vec: Mapping) -> DiffOperator:
        """Inverse of :meth:`vector`."""
        raw: dict = {}
        for (mono, r, c), v in vec.items():
            if v:
                raw.setdefault(mono, {})[(r, c)] = v
        return cls._raw({m: MatrixCoeff._raw(e) for m, e in raw.items()})

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def order(self) -> int:
        """Maximal total derivative order (-1 for the zero operator)."""
        return max((mono_order(m) for m in self.terms), default=-1)

    @property
    def coordinate_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    def coefficient(self, mono: Monomial) -> MatrixCoeff:
        return self.terms.get(tuple(mono), MatrixCoeff.zero())

    def items(self):
        return sorted(self.terms.items())

    def vector(self) -> dict:
        """Flatten to ``{(monomial, row, col): Scalar}`` for linear algebra."""
        return {
            (mono, r, c): v for mono, mat in self.terms.items() for (r, c), v in mat.entries.items()
        }

    def as_scalar(self) -> Scalar | None:
        if not self.terms:
            return ZERO
        if len(self.terms) != 1 or ZERO_MONO not in self.terms:
            return None
        return self.terms[ZERO_MONO].is_scalar()

    def is_multiplication(self) -> bool:
        """True when no derivatives occur (a matrix function of the coordinates)."""
        return all(mono_order(m) == 0 for m in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"DiffOperator({len(self.terms)} terms, order {self.order})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> DiffOperator:
        other = _lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for mono, mat in other.terms.items():
            o = out.get(mono)
            if o is None:
                out[mono] = mat
            else:
                s = o + mat
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return DiffOperator._raw(out)

    __radd__ = __add__

    def __neg__(self) -> DiffOperator:
        return DiffOperator._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> DiffOperator:
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> DiffOperator:
        return (-self) + other

    def scale(self, x) -> DiffOperator:
        x = x if type(x) is int else as_scalar(x)
        if not x:
            return DiffOperator.zero()
        return DiffOperator._raw({m: c.scale(x) for m, c in self.terms.items()})

    def __mul__(self, other) -> DiffOperator:
        if isinstance(other, DiffOperator):
            return DiffOperator._raw(_op_mul(self.terms, other.terms))
        if isinstance(other, MatrixCoeff):
            return DiffOperator._raw(_op_mul(self.terms, {ZERO_MONO: other}))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other) -> DiffOperator:
        if isinstance(other, MatrixCoeff):
            return DiffOperator._raw(_op_mul({ZERO_MONO: other}, self.terms))
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int) -> DiffOperator:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            c = self.as_scalar()
            if c is None or not c:
                raise ValueError("negative powers need an invertible scalar operator")
            return DiffOperator.scalar(c**k)
        out = DiffOperator.identity()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other) -> DiffOperator:
        if isinstance(other, DiffOperator):
            c = other.as_scalar()
            if c is None:
                raise ValueError("division is only defined by scalar operators")
            other = c
        return self.scale(as_scalar(other).inv())

    def __rtruediv__(self, other) -> DiffOperator:
        c = self.as_scalar()
        if c is None:
            raise ValueError("division is only defined by scalar operators")
        return DiffOperator.scalar(as_scalar(other) / c)

    # -- rendering --------------------------------------------------------

    def render(self, decompose: Callable[[MatrixCoeff], list[tuple[str, Scalar]]]) -> str:
        """Canonical text, terms sorted by monomial order.

        ``decompose`` writes a matrix as ``[(matrix_text, coefficient), ...]``;
        matrix_text ``""`` denotes the identity.
        """
        pieces: list[tuple[int, str]] = []
        for mono, mat in self.items():
            mono_text = render_monomial(mono)
            for mtext, coef in decompose(mat):
                factors = [f for f in (mtext, mono_text) if f]
                pieces.append(_signed_product(coef, factors))
        if not pieces:
            return "0"
        out = []
        for idx, (sign, body) in enumerate(pieces):
            if idx == 0:
                out.append(body if sign > 0 else f"-{body}")
            else:
                out.append(f" + {body}" if sign > 0 else f" - {body}")
        return "".join(out)


def render_monomial(mono: Monomial) -> str:
    names = COORDS + DERIVS
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _signed_product(coef: Scalar, factors: list[str]) -> tuple[int, str]:
    text = coef.render()
    sign = 1
    if text.startswith("-") and _is_single_term(text[1:]):
        sign, text = -1, text[1:]
    if not factors:
        return sign, text if _is_single_term(text) else f"({text})"
    if text == "1":
        return sign, "*".join(factors)
    if not _is_single_term(text):
        text = f"({text})"
    return sign, "*".join([text] + factors)


def _is_single_term(text: str) -> bool:
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and k > 0:
            return False
        elif depth == 0 and ch == "/":
            return False
    return True


def _lift(x):
    if isinstance(x, DiffOperator):
        return x
    if isinstance(x, MatrixCoeff):
        return DiffOperator.matrix(x)
    try:
        return DiffOperator.scalar(x)
    except TypeError:
        return NotImplemented


def linear_combination(pairs: Iterable[tuple]) -> DiffOperator:
    """``sum(c * op for c, op in pairs)`` accumulated in one pass."""
    acc: dict = {}
    for c, op in pairs:
        c = c if type(c) is int else as_scalar(c)
        if not c:
            continue
        one = c == 1
        for mono, mat in op.terms.items():
            tgt = acc.get(mono)
            if tgt is None:
                tgt = acc[mono] = {}
            for key, v in mat.entries.items():
                if not one:
                    v = v * c
                o = tgt.get(key)
                tgt[key] = v if o is None else o + v
    return DiffOperator._raw(_compress(acc))


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b - b * a


def anticommutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b + b * a


def degree_dot(a: tuple, b: tuple) -> int:
    return a[0] * b[0] + a[1] * b[1]


def degree_sum(a: tuple, b: tuple) -> tuple:
    return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)


def bracket_kind(deg_a: tuple, deg_b: tuple) -> str:
    """'commutator' for an even degree dot product, else 'anticommutator'."""
    return "anticommutator" if degree_dot(deg_a, deg_b) % 2 else "commutator"


def graded_bracket(a: DiffOperator, deg_a: tuple, b: DiffOperator, deg_b: tuple) -> DiffOperator:
    if bracket_kind(deg_a, deg_b) == "commutator":
        return commutator(a, b)
    return anticommutator(a, b)


def bracket(a: DiffOperator, b: DiffOperator, kind: str) -> DiffOperator:
    if kind in ("commutator", "c"):
        return commutator(a, b)
    if kind in ("anticommutator", "a"):
        return anticommutator(a, b)
    raise ValueError(f"unknown bracket kind {kind!r}")


# --------------------------------------------------------------------------
# Multivariate polynomials and plane waves
# --------------------------------------------------------------------------

PW_VARS = ("t", "x1", "x2", "x3", "E", "k1", "k2", "k3")
_NV = len(PW_VARS)


class Poly:
    """Commutative polynomial in :data:`PW_VARS` with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {tuple(e): as_scalar(v) for e, v in (terms or {}).items() if v}

    @classmethod
    def _raw(cls, terms: dict) -> Poly:
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def var(cls, name: str) -> Poly:
        e = [0] * _NV
        e[PW_VARS.index(name)] = 1
        return cls._raw({tuple(e): ONE})

    @classmethod
    def const(cls, c) -> Poly:
        c = as_scalar(c)
        return cls._raw({(0,) * _NV: c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"Poly({self.render()!r})"

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(PW_VARS, e) if k
            )
            parts.append(_signed_product(self.terms[e], [mono] if mono else []))
        return "".join(
            (b if s > 0 else f"-{b}") if i == 0 else (f" + {b}" if s > 0 else f" - {b}")
            for i, (s, b) in enumerate(parts)
        )

    def __add__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return Poly._raw(_dict_add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({e: -v for e, v in self.terms.items()})

    def __sub__(self, other) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = as_scalar(other)
            if not c:
                return Poly._raw({})
            return Poly._raw({e: v * c for e, v in self.terms.items()})
        out: dict = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = v1 * v2
                o = out.get(e)
                out[e] = p if o is None else o + p
        return Poly._raw({e: v for e, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, exps: tuple) -> Poly:
        """Multiply by the monomial with exponent vector ``exps``."""
        return Poly._raw({tuple(a + b for a, b in zip(e, exps)): v for e, v in self.terms.items()})

    def diff(self, name: str) -> Poly:
        k = PW_VARS.index(name)
        out = {}
        for e, v in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = v * e[k]
        return Poly._raw(out)

    def degree_in(self, name: str) -> int:
        k = PW_VARS.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def coefficients_in(self, name: str) -> dict[int, Poly]:
        """Split as ``sum(name^j * coeff_j)``; coefficients do not involve ``name``."""
        k = PW_VARS.index(name)
        out: dict[int, dict] = {}
        for e, v in self.terms.items():
            ne = list(e)
            ne[k] = 0
            out.setdefault(e[k], {})[tuple(ne)] = v
        return {j: Poly._raw(t) for j, t in out.items()}

    def substitute(self, name: str, value: Poly) -> Poly:
        acc = Poly._raw({})
        for j, coeff in sorted(self.coefficients_in(name).items()):
            acc = acc + coeff * value**j
        return acc

    def constant_value(self) -> Scalar | None:
        if not self.terms:
            return ZERO
        if list(self.terms) == [(0,) * _NV]:
            return self.terms[(0,) * _NV]
        return None


class PlaneWaveState:
    """Spinor ``u(t, x) * exp(i(k.x - E t))`` with polynomial components ``u``.

    ``energy`` is the polynomial substituted for E by the time derivative;
    when None the formal variable E is used.
    """

    __slots__ = ("components", "energy")

    def __init__(self, components: Iterable[Poly], energy: Poly | None = None):
        comps = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in components)
        if len(comps) != N:
            raise ValueError("a plane-wave state has four components")
        self.components = comps
        self.energy = energy

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneWaveState) and self.components == other.components

    def __repr__(self) -> str:
        return f"PlaneWaveState({[c.render() for c in self.components]})"

    def _twist(self, var: int) -> Poly:
        # exp(i(k.x - E t)) turns dz into dz + c_z
        if var == 0:
            e = self.energy if self.energy is not None else Poly.var("E")
            return e * (-I)
        return Poly.var(f"k{var}") * I

    def derivative(self, comp: Poly, derivs: tuple) -> Poly:
        out = comp
        for var, n in enumerate(derivs):
            if not n:
                continue
            twist = self._twist(var)
            name = PW_VARS[var]
            for _ in range(n):
                out = out.diff(name) + twist * out
        return out


def apply(op: DiffOperator, psi: PlaneWaveState) -> PlaneWaveState:
    """Formal action of ``op`` on a plane-wave state (marker preserved)."""
    out = [Poly._raw({}) for _ in range(N)]
    cache: dict = {}
    for mono, mat in op.terms.items():
        derivs = mono[4:]
        if derivs not in cache:
            cache[derivs] = [psi.derivative(c, derivs) for c in psi.components]
        dcomps = cache[derivs]
        shift = tuple(mono[:4]) + (0, 0, 0, 0)
        for (r, c), v in mat.entries.items():
            src = dcomps[c]
            if src:
                out[r] = out[r] + src.shift(shift) * v
    return PlaneWaveState(out, psi.energy)
