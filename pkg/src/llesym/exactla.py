"""Exact linear algebra over the Scalar field.

Dense routines (:func:`rref`, :func:`solve`, :func:`in_span`) follow the
textbook Gauss-Jordan with first-nonzero pivoting. The large systems that
come out of operator identities are sparse; :func:`sparse_rref` and
:class:`SpanBasis` handle those. Every routine returns the unique reduced
form, so pivot order never leaks into results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .scalars import ONE, ZERO, Scalar, as_scalar


class DimensionMismatch(ValueError):
    pass


class KMatrix:
    """Dense rectangular matrix of Scalars (immutable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(as_scalar(x) for x in row) for row in entries]
        if not rows or not rows[0]:
            raise ValueError("KMatrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def zeros(cls, rows: int, cols: int) -> KMatrix:
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> KMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> KMatrix:
        return cls([list(r) for r in zip(*columns)])

    def __getitem__(self, idx):
        r, c = idx
        return self.entries[r][c]

    def __eq__(self, other) -> bool:
        return isinstance(other, KMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"KMatrix({[[str(x) for x in r] for r in self.entries]})"

    def columns(self) -> list[list[Scalar]]:
        return [[self.entries[r][c] for r in range(self.rows)] for c in range(self.cols)]

    def __matmul__(self, other: KMatrix) -> KMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return KMatrix(
            [[_dot(row, col) for col in other.columns()] for row in self.entries]
        )

    def apply(self, v: Sequence[Scalar]) -> list[Scalar]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix has {self.cols} columns, vector has {len(v)} entries")
        return [_dot(row, v) for row in self.entries]

    def to_complex(self, s_value: complex):
        return [[x.to_complex(s_value) for x in row] for row in self.entries]


def _dot(a, b) -> Scalar:
    acc = ZERO
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def rref(A: KMatrix) -> tuple[KMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns.

    The pivot in each column is the first nonzero entry at or below the
    current row, so repeated runs are bit-identical.
    """
    rows = [list(r) for r in A.entries]
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        p = next((k for k in range(r, A.rows) if rows[k][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inv()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for k in range(A.rows):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y if y else x for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    return KMatrix(rows), len(pivots), pivots


def rank(A: KMatrix) -> int:
    return rref(A)[1]


@dataclass
class SolutionSpace:
    """Solution set ``particular + span(nullspace)``; ``particular`` is None when inconsistent."""

    particular: list[Scalar] | None
    nullspace: list[list[Scalar]]
    rank: int

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def dimension(self) -> int:
        return len(self.nullspace) if self.consistent else -1


def solve(A: KMatrix, b: Sequence) -> SolutionSpace:
    b = [as_scalar(x) for x in b]
    if len(b) != A.rows:
        raise DimensionMismatch(f"matrix has {A.rows} rows, right-hand side has {len(b)} entries")
    aug = KMatrix([list(row) + [bi] for row, bi in zip(A.entries, b)])
    R, rk, pivots = rref(aug)
    if pivots and pivots[-1] == A.cols:
        return SolutionSpace(None, _nullspace_from_rref(R, pivots, A.cols), rk - 1)
    particular = [ZERO] * A.cols
    for row, p in enumerate(pivots):
        particular[p] = R[row, A.cols]
    return SolutionSpace(particular, _nullspace_from_rref(R, pivots, A.cols), rk)


def nullspace(A: KMatrix) -> list[list[Scalar]]:
    R, _, pivots = rref(A)
    return _nullspace_from_rref(R, pivots, A.cols)


def _nullspace_from_rref(R: KMatrix, pivots: list[int], ncols: int) -> list[list[Scalar]]:
    pivots = [p for p in pivots if p < ncols]
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for row, p in enumerate(pivots):
            v[p] = -R[row, free]
        basis.append(v)
    return basis


def in_span(v: Sequence, basis: Sequence[Sequence]) -> list[Scalar] | None:
    """Exact coefficients ``c`` with ``sum(c[i] * basis[i]) == v``, or None.

    When the basis is dependent the coefficients of redundant vectors (those
    that are combinations of earlier ones) are zero.
    """
    v = [as_scalar(x) for x in v]
    if any(len(b) != len(v) for b in basis):
        raise DimensionMismatch("basis vectors and target differ in length")
    span = SpanBasis()
    for k, b in enumerate(basis):
        span.add(k, {i: as_scalar(x) for i, x in enumerate(b) if x})
    coeffs, residual = span.expand({i: x for i, x in enumerate(v) if x})
    if residual:
        return None
    return [coeffs.get(k, ZERO) for k in range(len(basis))]


# --------------------------------------------------------------------------
# Sparse routines
# --------------------------------------------------------------------------


def _axpy(target: dict, f: Scalar, src: dict) -> None:
    """target -= f * src, in place, dropping zeros."""
    for k, v in src.items():
        t = target.get(k)
        if t is None:
            target[k] = -(f * v)
        else:
            t = t - f * v
            if t:
                target[k] = t
            else:
                del target[k]


def sparse_rref(rows: Iterable[dict], ncols: int | None = None) -> list[tuple[int, dict]]:
    """Reduced row-echelon form of a sparse matrix given as ``{col: Scalar}`` rows.

    Returns ``[(pivot_col, row), ...]`` sorted by pivot column; each row is
    normalized to 1 at its pivot and zero in every other pivot column.
    Pivot rows are chosen shortest-first to limit fill, which does not
    affect the (unique) result.
    """
    work = [dict(r) for r in rows if r]
    index: dict[int, set[int]] = {}
    for ri, r in enumerate(work):
        for c in r:
            index.setdefault(c, set()).add(ri)
    used: set[int] = set()
    pivot_of: dict[int, int] = {}
    for c in sorted(index):
        holders = index.get(c)
        if not holders:
            continue
        candidates = [ri for ri in holders if ri not in used]
        if not candidates:
            continue
        pr = min(candidates, key=lambda ri: (len(work[ri]), ri))
        prow = work[pr]
        inv = prow[c].inv()
        if inv != ONE:
            for k in prow:
                prow[k] = prow[k] * inv
        for ri in sorted(holders):
            if ri == pr:
                continue
            row = work[ri]
            f = row[c]
            before = set(row)
            _axpy(row, f, prow)
            after = set(row)
            for k in before - after:
                index[k].discard(ri)
            for k in after - before:
                index.setdefault(k, set()).add(ri)
        index[c] = {pr}
        used.add(pr)
        pivot_of[c] = pr
    return [(c, work[pivot_of[c]]) for c in sorted(pivot_of)]


def sparse_nullspace(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : A x = 0}`` as sparse vectors, one per free column (ascending)."""
    reduced = sparse_rref(rows, ncols)
    pivots = {c for c, _ in reduced}
    basis = []
    by_free: dict[int, dict] = {c: {c: ONE} for c in range(ncols) if c not in pivots}
    for p, row in reduced:
        for c, v in row.items():
            if c != p:
                by_free[c][p] = -v
    for c in sorted(by_free):
        basis.append(by_free[c])
    return basis


@dataclass
class SpanBasis:
    """Incrementally built span of labelled sparse vectors, in reduced echelon form.

    Vectors are dicts from orderable keys to Scalars. :meth:`expand` writes
    a vector as a combination of the labelled generators or reports the
    nonzero residual.
    """

    echelon: list[tuple[Hashable, dict, dict]] = field(default_factory=list)
    labels: list[Hashable] = field(default_factory=list)
    dependent: list[tuple[Hashable, dict]] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.echelon)

    def _reduce(self, v: dict) -> tuple[dict, dict]:
        v = dict(v)
        combo: dict = {}
        for pivot, vec, vcombo in self.echelon:
            f = v.get(pivot)
            if f is None:
                continue
            _axpy(v, f, vec)
            for lab, c in vcombo.items():
                t = combo.get(lab, ZERO) + f * c
                if t:
                    combo[lab] = t
                else:
                    combo.pop(lab, None)
        return combo, v

    def add(self, label: Hashable, v: dict) -> bool:
        """Add a generator; returns False (and records the relation) when dependent."""
        self.labels.append(label)
        combo, rem = self._reduce(v)
        if not rem:
            # label = sum(combo) is a linear relation among generators
            self.dependent.append((label, combo))
            return False
        pivot = min(rem)
        inv = rem[pivot].inv()
        rem = {k: x * inv for k, x in rem.items()}
        own = {lab: -c * inv for lab, c in combo.items()}
        own[label] = inv
        for idx, (p, vec, vcombo) in enumerate(self.echelon):
            f = vec.get(pivot)
            if f is None:
                continue
            vec = dict(vec)
            _axpy(vec, f, rem)
            vcombo = dict(vcombo)
            for lab, c in own.items():
                t = vcombo.get(lab, ZERO) - f * c
                if t:
                    vcombo[lab] = t
                else:
                    vcombo.pop(lab, None)
            self.echelon[idx] = (p, vec, vcombo)
        self.echelon.append((pivot, rem, own))
        return True

    def expand(self, v: dict) -> tuple[dict, dict]:
        """Return ``(coefficients by label, residual)``; residual is empty iff v is in the span."""
        combo, rem = self._reduce(v)
        return combo, rem
