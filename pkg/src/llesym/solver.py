"""Ansatz-based rediscovery of symmetry operators and the supercharge chain.

The unknown operator is ``A = sum_slot c_slot E_rc x^mu d^nu`` over all
slots with derivative order <= ``order`` and coordinate degree <=
``degree``. Together with the multiplier unknowns the symmetry condition
is a homogeneous linear system over the scalar field, solved exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .exactla import SpanBasis, sparse_nullspace, sparse_rref
from .model import FIRST_ORDER_COMMUTING, FIRST_ORDER_ANTICOMMUTING, GeneratorCatalog
from .scalars import ZERO
from .symcheck import coordinate_monomials, normalize_kind
from .weyl import DiffOperator, MatrixCoeff, anticommutator, bracket, commutator, monomial


def derivative_monomials(order: int) -> list[tuple]:
    """Derivative exponent 4-tuples of total order <= ``order``."""
    return coordinate_monomials(order)


@dataclass(frozen=True)
class Ansatz:
    order: int = 1
    degree: int = 2

    def __post_init__(self):
        if self.order < 0 or self.degree < 0:
            raise ValueError("ansatz bounds must be nonnegative")

    def monomials(self) -> list[tuple]:
        return [
            monomial(cm, dm)
            for dm in derivative_monomials(self.order)
            for cm in coordinate_monomials(self.degree)
        ]

    def slots(self) -> list[tuple]:
        """Deterministic unknown index: (monomial, row, column)."""
        return [(mono, r, c) for mono in self.monomials() for r in range(4) for c in range(4)]

    @property
    def unknowns(self) -> int:
        return 16 * len(self.monomials())

    def operator(self, coeffs: dict) -> DiffOperator:
        """Operator whose slot ``k`` carries ``coeffs[k]``."""
        slots = self.slots()
        terms: dict = {}
        for k, v in coeffs.items():
            if v:
                mono, r, c = slots[k]
                terms.setdefault(mono, {})[(r, c)] = v
        return DiffOperator({m: MatrixCoeff(e) for m, e in terms.items()})


def _multiplier_bound(ansatz: Ansatz, degree: int | None) -> int:
    if degree is None:
        return ansatz.degree
    if degree < 0:
        raise ValueError("multiplier degree must be nonnegative")
    return degree


def _slot_operator(slot: tuple) -> DiffOperator:
    mono, r, c = slot
    return DiffOperator.term(mono, MatrixCoeff.unit(r, c))


def _system_rows(columns: list[dict]) -> list[dict]:
    """Transpose a list of sparse column vectors into sparse rows."""
    rows: dict = {}
    for j, vec in enumerate(columns):
        for key, v in vec.items():
            rows.setdefault(key, {})[j] = v
    return [rows[k] for k in sorted(rows)]


def _operator_basis(ops: list[DiffOperator]) -> list[DiffOperator]:
    """Canonical basis of ``span(ops)``: reduced echelon over the operator coordinates."""
    rows = [op.vector() for op in ops]
    keys = sorted({k for r in rows for k in r})
    index = {k: n for n, k in enumerate(keys)}
    reduced = sparse_rref([{index[k]: v for k, v in r.items()} for r in rows], len(keys))
    return [DiffOperator.from_vector({keys[c]: v for c, v in row.items()}) for _, row in reduced]


@dataclass
class SolutionReport:
    kind: str
    ansatz: Ansatz
    multiplier_degree: int
    basis: list[DiffOperator]
    certificates: dict[str, bool] = field(default_factory=dict)
    rank_of_projection: int = 0

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, op: DiffOperator) -> bool:
        span = SpanBasis()
        for n, b in enumerate(self.basis):
            span.add(n, b.vector())
        return not span.expand(op.vector())[1]

    def payload(self, rep) -> dict:
        return {
            "kind": self.kind,
            "bounds": {
                "order": self.ansatz.order,
                "degree": self.ansatz.degree,
                "multiplier_degree": self.multiplier_degree,
            },
            "unknowns": self.ansatz.unknowns + 16 * len(coordinate_monomials(self.multiplier_degree)),
            "dimension": self.dimension,
            "certificates": self.certificates,
            "basis": [rep.render(b) for b in self.basis],
        }


def symmetry_space(
    omega: DiffOperator,
    ansatz: Ansatz,
    kind: str,
    multiplier_degree: int | None = None,
) -> list[DiffOperator]:
    """All ansatz operators A with ``[Omega, A]`` (or ``{Omega, A}``) ``= L Omega``.

    ``L Omega`` has coordinate degree exactly deg L (the gamma_j are
    invertible) while the bracket has degree <= ansatz.degree, so the
    default ``multiplier_degree = ansatz.degree`` is already complete.
    """
    kind = normalize_kind(kind)
    multiplier_degree = _multiplier_bound(ansatz, multiplier_degree)
    slots = ansatz.slots()
    columns = [bracket(omega, _slot_operator(s), kind).vector() for s in slots]
    for cm in coordinate_monomials(multiplier_degree):
        for r in range(4):
            for c in range(4):
                unit = DiffOperator.term(monomial(cm), MatrixCoeff.unit(r, c))
                columns.append((-(unit * omega)).vector())
    null = sparse_nullspace(_system_rows(columns), len(columns))
    n_op = len(slots)
    ops = [ansatz.operator({k: v for k, v in vec.items() if k < n_op}) for vec in null]
    return _operator_basis([op for op in ops if op])


def solve_symmetry_ansatz(
    catalog: GeneratorCatalog,
    ansatz: Ansatz | None = None,
    kind: str = "commutator",
    multiplier_degree: int | None = None,
) -> SolutionReport:
    """Solve the joint system and certify the catalog's first-order generators."""
    ansatz = ansatz if ansatz is not None else Ansatz()
    multiplier_degree = _multiplier_bound(ansatz, multiplier_degree)
    kind = normalize_kind(kind)
    basis = symmetry_space(catalog.omega, ansatz, kind, multiplier_degree)
    span = SpanBasis()
    for n, b in enumerate(basis):
        span.add(n, b.vector())
    if kind == "commutator":
        targets = {n: catalog[n] for n in FIRST_ORDER_COMMUTING}
        targets["I4"] = DiffOperator.identity()
    else:
        targets = {n: catalog[n] for n in FIRST_ORDER_ANTICOMMUTING}
    certificates = {n: not span.expand(op.vector())[1] for n, op in targets.items()}
    return SolutionReport(kind, ansatz, multiplier_degree, basis, certificates, span.rank)


# --------------------------------------------------------------------------
# Supercharge uniqueness
# --------------------------------------------------------------------------


def _restrict(basis: list[DiffOperator], maps) -> list[DiffOperator]:
    """Subspace of ``span(basis)`` killed by every linear map in ``maps``."""
    if not basis:
        return []
    columns = []
    for b in basis:
        vec: dict = {}
        for tag, fn in enumerate(maps):
            for key, v in fn(b).vector().items():
                vec[(tag, key)] = v
        columns.append(vec)
    null = sparse_nullspace(_system_rows(columns), len(basis))
    combos = [
        sum((basis[k].scale(v) for k, v in sorted(vec.items())), DiffOperator.zero())
        for vec in null
    ]
    return _operator_basis([c for c in combos if c])


@dataclass
class UniquenessReport:
    exists: bool
    conclusive: bool
    dimensions: dict[str, int]
    contains_q: dict[str, bool]
    solutions: list[str]
    bounds: dict
    note: str = ""

    def payload(self) -> dict:
        return {
            "exists": self.exists,
            "conclusive": self.conclusive,
            "solutions": self.solutions,
            "bounds": self.bounds,
            "dimensions": self.dimensions,
            "contains_Q": self.contains_q,
            "note": self.note,
        }


def _in_span(op: DiffOperator, basis: list[DiffOperator]) -> bool:
    span = SpanBasis()
    for n, b in enumerate(basis):
        span.add(n, b.vector())
    return not span.expand(op.vector())[1]


def _quadratic_step(residual: list[DiffOperator], target: DiffOperator):
    """Solve ``{Qb, Qb} = target`` for ``Qb = sum c_i u_i``.

    With ``y_ij = c_i c_j`` the equation is linear in y. An inconsistent
    linear system rules out every c. When it is consistent the candidate
    y's are those of rank one; only the cases that the residual dimension
    makes decidable here (r <= 1) are resolved, the rest are reported.
    Returns ``(exists, conclusive, solutions, note)``.
    """
    r = len(residual)
    if r == 0:
        return False, True, [], "residual space is zero; {0, 0} = 0 differs from 2H"
    pairs = list(combinations_with_replacement(range(r), 2))
    columns = []
    for i, j in pairs:
        b = anticommutator(residual[i], residual[j])
        columns.append((b if i == j else b.scale(2)).vector())
    columns.append((-target).vector())
    rows = _system_rows(columns)
    rhs = len(pairs)
    reduced = sparse_rref(rows, rhs + 1)
    if any(p == rhs for p, _ in reduced):
        return False, True, [], "linearized quadratic system y_ij = c_i c_j is inconsistent"
    pivots = {p for p, _ in reduced}
    if r == 1 and pivots == {0}:
        # c^2 = y has a root in the field iff y is a square; expose the candidate
        y = next(row.get(rhs, ZERO) for p, row in reduced if p == 0)
        y = -y
        return True, False, [f"c^2 = {y.render()} on {residual[0]!r}"], "single parameter; square root not extracted"
    return True, False, [], "linearized system consistent; rank-one analysis not performed at this size"


def supercharge_uniqueness(
    catalog: GeneratorCatalog,
    ansatz: Ansatz | None = None,
    multiplier_degree: int | None = None,
    cap: int = 6,
) -> UniquenessReport:
    ansatz = ansatz if ansatz is not None else Ansatz()
    multiplier_degree = _multiplier_bound(ansatz, multiplier_degree)
    q, d, h = catalog["Q"], catalog["D"], catalog["H"]
    js = [catalog[n] for n in ("J12", "J13", "J23")]
    dims: dict[str, int] = {}
    has_q: dict[str, bool] = {}

    space = symmetry_space(catalog.omega, ansatz, "anticommutator", multiplier_degree)
    dims["a"] = len(space)
    has_q["a"] = _in_span(q, space)

    maps = [lambda b: commutator(d, b) + b] + [lambda b, j=j: commutator(j, b) for j in js]
    space = _restrict(space, maps)
    dims["b"] = len(space)
    has_q["b"] = _in_span(q, space)

    space = _restrict(space, [lambda b: anticommutator(q, b)])
    dims["c"] = len(space)
    has_q["c"] = _in_span(q, space)

    bounds = {
        "order": ansatz.order,
        "degree": ansatz.degree,
        "multiplier_degree": multiplier_degree,
        "cap": cap,
    }
    if len(space) > cap:
        return UniquenessReport(
            False, False, dims, has_q, [], bounds, "inconclusive at this bound: residual dimension exceeds cap"
        )
    exists, conclusive, sols, note = _quadratic_step(space, h.scale(2))
    return UniquenessReport(exists, conclusive, dims, has_q, sols, bounds, note)
