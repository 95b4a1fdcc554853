"""Sufficient symmetry conditions and plane-wave validation.

An operator A is certified when ``[Omega, A] = L(x) Omega`` or
``{Omega, A} = L(x) Omega`` for a matrix multiplier ``L`` that is a
polynomial in (t, x) of bounded degree. The multiplier is found by an
ansatz with one unknown per (coordinate monomial, matrix entry) and an
exact sparse solve. Division by Omega is not an option: its leading
coefficient alpha is nilpotent.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

from .clifford import GammaRep
from .exactla import KMatrix, rank, sparse_rref
from .model import SECOND_ORDER, GeneratorCatalog, build_lle
from .scalars import I, ZERO, Scalar
from .weyl import (
    DiffOperator,
    MatrixCoeff,
    PlaneWaveState,
    Poly,
    apply,
    bracket,
    monomial,
)

KINDS = ("commutator", "anticommutator")


def coordinate_monomials(max_degree: int) -> list[tuple]:
    """Exponent 4-tuples of total degree <= max_degree, graded then lexicographic."""
    out = []
    for total in range(max_degree + 1):
        for et in range(total, -1, -1):
            for e1 in range(total - et, -1, -1):
                for e2 in range(total - et - e1, -1, -1):
                    out.append((et, e1, e2, total - et - e1 - e2))
    return out


@dataclass
class SymmetryVerdict:
    kind: str
    certified: bool
    multiplier: DiffOperator | None
    residual_zero: bool
    ambiguous: bool = False
    max_multiplier_degree: int = 1
    # residual of the bracket after subtracting the best multiplier term
    residual: DiffOperator | None = None

    def payload(self, name: str, rep: GammaRep) -> dict:
        return {
            "generator": name,
            "kind": self.kind,
            "multiplier": rep.render(self.multiplier) if self.multiplier is not None else None,
            "certified": self.certified,
            "ambiguous": self.ambiguous,
        }


def normalize_kind(kind: str) -> str:
    if kind in ("c", "commutator"):
        return "commutator"
    if kind in ("a", "anticommutator"):
        return "anticommutator"
    raise ValueError(f"unknown kind {kind!r} (use 'c' or 'a')")


def _multiplier_columns(omega: DiffOperator, max_degree: int) -> list[tuple[tuple, dict]]:
    cols = []
    for mono in coordinate_monomials(max_degree):
        for r in range(4):
            for c in range(4):
                unit = DiffOperator.term(monomial(mono), MatrixCoeff.unit(r, c))
                cols.append(((mono, r, c), (unit * omega).vector()))
    return cols


_COLUMN_CACHE: dict = {}


def _cached_columns(omega: DiffOperator, max_degree: int):
    key = (omega, max_degree)
    if key not in _COLUMN_CACHE:
        _COLUMN_CACHE[key] = _multiplier_columns(omega, max_degree)
    return _COLUMN_CACHE[key]


def solve_multiplier(target: DiffOperator, omega: DiffOperator, max_degree: int = 1):
    """Solve ``target = L * omega`` for a polynomial matrix ``L`` of degree <= max_degree.

    Returns ``(L, ambiguous)`` or ``(None, False)`` when no such L exists.
    """
    cols = _cached_columns(omega, max_degree)
    nunk = len(cols)
    # rows of the linear system, one per coordinate of the operator vector
    rows: dict = {}
    for j, (_, vec) in enumerate(cols):
        for key, v in vec.items():
            rows.setdefault(key, {})[j] = v
    rhs = target.vector()
    for key in rhs:
        rows.setdefault(key, {})
    aug = []
    for key in sorted(rows):
        row = dict(rows[key])
        if key in rhs:
            row[nunk] = rhs[key]
        if row:
            aug.append(row)
    reduced = sparse_rref(aug, nunk + 1)
    if any(p == nunk for p, _ in reduced):
        return None, False
    pivots = {p for p, _ in reduced}
    ambiguous = len(pivots) < nunk
    terms: dict = {}
    for p, row in reduced:
        val = row.get(nunk, ZERO)
        if val:
            mono, r, c = cols[p][0]
            terms.setdefault(monomial(mono), {})[(r, c)] = val
    mult = DiffOperator({m: MatrixCoeff(e) for m, e in terms.items()})
    return mult, ambiguous


def check_symmetry(
    omega: DiffOperator,
    op: DiffOperator,
    kind: str = "commutator",
    max_multiplier_degree: int = 1,
) -> SymmetryVerdict:
    """Certify ``op`` under the commutator or anticommutator condition."""
    if max_multiplier_degree < 0:
        raise ValueError("max_multiplier_degree must be >= 0")
    kind = normalize_kind(kind)
    br = bracket(omega, op, kind)
    mult, ambiguous = solve_multiplier(br, omega, max_multiplier_degree)
    if mult is None:
        return SymmetryVerdict(kind, False, None, False, False, max_multiplier_degree, br)
    residual = br - mult * omega
    ok = residual.is_zero()
    return SymmetryVerdict(kind, ok, mult, ok, ambiguous, max_multiplier_degree, residual)


def check_either(omega, op, max_multiplier_degree: int = 1) -> dict[str, SymmetryVerdict]:
    return {k: check_symmetry(omega, op, k, max_multiplier_degree) for k in KINDS}


def check_second_order_set(catalog: GeneratorCatalog, max_multiplier_degree: int = 1) -> dict:
    """Which condition each second-order generator satisfies, and with what multiplier."""
    report = {}
    for name in SECOND_ORDER:
        verdicts = check_either(catalog.omega, catalog[name], max_multiplier_degree)
        holds = [k for k, v in verdicts.items() if v.certified]
        report[name] = {
            "certified": bool(holds),
            "kinds": holds,
            "verdicts": verdicts,
        }
    return report


# --------------------------------------------------------------------------
# Plane waves
# --------------------------------------------------------------------------


def symbol_matrix(omega: DiffOperator) -> list[list[Poly]]:
    """Replace dt -> -iE, d_j -> i k_j in a coordinate-free operator."""
    if any(m[:4] != (0, 0, 0, 0) for m in omega.terms):
        raise ValueError("the symbol is only defined here for coordinate-free operators")
    factor = [Poly.var("E") * (-I)] + [Poly.var(f"k{j}") * I for j in (1, 2, 3)]
    out = [[Poly() for _ in range(4)] for _ in range(4)]
    for mono, mat in omega.terms.items():
        p = Poly.const(1)
        for var, e in enumerate(mono[4:]):
            p = p * factor[var] ** e
        for (r, c), v in mat.entries.items():
            out[r][c] = out[r][c] + p * v
    return out


def _perm_sign(perm) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def poly_det(mat: list[list[Poly]]) -> Poly:
    n = len(mat)
    acc = Poly()
    for perm in permutations(range(n)):
        term = Poly.const(_perm_sign(perm))
        for r in range(n):
            term = term * mat[r][perm[r]]
            if term.is_zero():
                break
        acc = acc + term
    return acc


@dataclass
class KernelFamily:
    """On-shell plane waves: ``E = energy(k)`` and spinors ``u_c(k)`` in the kernel of the symbol."""

    energy: Poly
    spinors: list[list[Poly]]
    determinant: Poly
    rank: int

    def states(self) -> list[PlaneWaveState]:
        return [PlaneWaveState(u, self.energy) for u in self.spinors]


def dispersion(omega: DiffOperator) -> tuple[Poly, Poly]:
    """Solve ``det(symbol) = 0`` for E; returns (energy polynomial, determinant).

    The determinant has a double (or simple) root in E with a constant
    leading coefficient, which keeps the energy polynomial in k.
    """
    sigma = symbol_matrix(omega)
    det = poly_det(sigma)
    coeffs = det.coefficients_in("E")
    deg = max(coeffs)
    lead = coeffs[deg].constant_value()
    if lead is None or not lead:
        raise ValueError("leading E-coefficient of the determinant is not a nonzero constant")
    if deg == 1:
        energy = coeffs.get(0, Poly()) * (-lead.inv())
    elif deg == 2:
        a1 = coeffs.get(1, Poly())
        a0 = coeffs.get(0, Poly())
        disc = a1 * a1 - a0 * lead * 4
        if disc:
            raise ValueError("determinant has two distinct roots in E; no polynomial dispersion")
        energy = a1 * (-(lead * 2).inv())
    else:
        # (E - e)^deg: the root is the negated sub-leading coefficient over deg*lead
        sub = coeffs.get(deg - 1, Poly())
        energy = sub * (-(lead * deg).inv())
        check = Poly.var("E") - energy
        if (check**deg) * lead != det:
            raise ValueError("determinant is not a perfect power in E")
    if det.substitute("E", energy):
        raise ValueError("computed energy is not a root of the determinant")
    return energy, det


def kernel_family(omega: DiffOperator) -> KernelFamily:
    """Polynomial kernel spinors of the on-shell symbol.

    On shell the symbol squares to zero, so its columns lie in its kernel;
    this is verified below rather than assumed, together with the rank
    count that the columns span the whole kernel at a sample momentum.
    """
    energy, det = dispersion(omega)
    sigma = [[p.substitute("E", energy) for p in row] for row in symbol_matrix(omega)]
    columns = [[sigma[r][c] for r in range(4)] for c in range(4)]
    spinors = []
    for col in columns:
        image = [sum((sigma[r][k] * col[k] for k in range(4)), Poly()) for r in range(4)]
        if any(image):
            raise ValueError("on-shell symbol columns are not in its kernel")
        if any(col):
            spinors.append(col)
    sample = {"k1": Scalar(1), "k2": Scalar(2), "k3": Scalar(-3)}
    numeric = KMatrix([[_eval_k(p, sample) for p in row] for row in sigma])
    rk = rank(numeric)
    col_rank = rank(KMatrix([[_eval_k(p, sample) for p in u] for u in spinors]))
    if col_rank != 4 - rk:
        raise ValueError("kernel family does not span the kernel")
    return KernelFamily(energy, spinors, det, rk)


def _eval_k(p: Poly, values: dict) -> Scalar:
    acc = ZERO
    for e, v in p.terms.items():
        term = v
        for name, k in zip(("k1", "k2", "k3"), e[5:]):
            term = term * values[name] ** k
        if any(e[:5]):
            raise ValueError("expected a polynomial in k only")
        acc = acc + term
    return acc


_FAMILY_CACHE: dict = {}


def plane_wave_validate(rep: GammaRep, op: DiffOperator, omega: DiffOperator | None = None) -> bool:
    """True iff ``Omega(op psi) = 0`` for every state of the symbolic kernel family."""
    omega = omega if omega is not None else build_lle(rep)
    if omega not in _FAMILY_CACHE:
        _FAMILY_CACHE[omega] = kernel_family(omega)
    family = _FAMILY_CACHE[omega]
    for psi in family.states():
        if not apply(omega, apply(op, psi)).is_zero():
            return False
    return True


def verdict_report(entries: list[tuple[str, SymmetryVerdict]], rep: GammaRep) -> str:
    return json.dumps([v.payload(n, rep) for n, v in entries], indent=2) + "\n"
