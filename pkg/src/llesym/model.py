"""The Levy-Leblond operator and its catalog of named symmetry generators.

Index conventions: spatial indices run over 1..3; ``J_jk`` is stored for
j < k, ``Pt_jk`` and ``Gt_jk`` for j <= k, ``W``, ``Y``, ``Z`` for all
nine pairs. Names are ASCII: ``Xt1`` is the tilde-X generator, ``Pt12``
the tilde-P one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .clifford import GammaRep, build_rep
from .scalars import I, M, S, Scalar
from .weyl import DiffOperator, MatrixCoeff, anticommutator, commutator_m

SPATIAL = (1, 2, 3)


def levi_civita(j: int, k: int, n: int) -> int:
    return (j - k) * (k - n) * (n - j) // 2


def _mat(m: MatrixCoeff) -> DiffOperator:
    return DiffOperator.matrix(m)


def build_lle(rep: GammaRep) -> DiffOperator:
    """``-2i alpha dt + i gamma_j d_j + 2 m beta``."""
    dt = DiffOperator.derivative(0)
    omega = (_mat(rep.alpha) * dt).scale(-2 * I)
    for j in SPATIAL:
        omega = omega + (_mat(rep.gamma(j)) * DiffOperator.derivative(j)).scale(I)
    return omega + _mat(rep.beta).scale(2 * M)


FIRST_ORDER_COMMUTING = (
    "P1", "P2", "P3", "G1", "G2", "G3", "M", "H", "D", "K",
    "J12", "J13", "J23", "Xt1", "Xt2", "Xt3",
)
FIRST_ORDER_ANTICOMMUTING = ("Q", "S", "X1", "X2", "X3")
SECOND_ORDER = (
    tuple(f"Pt{j}{k}" for j in SPATIAL for k in SPATIAL if j <= k)
    + tuple(f"Gt{j}{k}" for j in SPATIAL for k in SPATIAL if j <= k)
    + tuple(f"W{j}{k}" for j, k in product(SPATIAL, SPATIAL))
    + tuple(f"Y{j}{k}" for j, k in product(SPATIAL, SPATIAL))
    + tuple(f"Z{j}{k}" for j, k in product(SPATIAL, SPATIAL))
)


@dataclass
class GeneratorCatalog:
    rep: GammaRep
    omega: DiffOperator
    operators: dict[str, DiffOperator] = field(default_factory=dict)

    def __getitem__(self, name: str) -> DiffOperator:
        if name == "Omega":
            return self.omega
        return self.operators[name]

    def __contains__(self, name: str) -> bool:
        return name == "Omega" or name in self.operators

    def names(self) -> list[str]:
        return list(self.operators)

    def render(self, name: str) -> str:
        return self.rep.render(self[name])


def build_catalog(rep: GammaRep | None = None) -> GeneratorCatalog:
    rep = rep if rep is not None else build_rep("dirac")
    half = Scalar(1) / 2
    inv_s = S.inv()
    ident = DiffOperator.identity()
    t = DiffOperator.coordinate(0)
    dt = DiffOperator.derivative(0)
    x = {j: DiffOperator.coordinate(j) for j in SPATIAL}
    d = {j: DiffOperator.derivative(j) for j in SPATIAL}
    g = {mu: _mat(rep.gamma(mu)) for mu in range(5)}
    alpha, beta = _mat(rep.alpha), _mat(rep.beta)
    euler = sum((x[j] * d[j] for j in SPATIAL), DiffOperator.zero())  # x_j d_j

    ops: dict[str, DiffOperator] = {}
    for j in SPATIAL:
        ops[f"P{j}"] = d[j]
    for j in SPATIAL:
        ops[f"G{j}"] = t * d[j] + x[j].scale(2 * I * M) + alpha * g[j]
    ops["M"] = ident.scale(2 * I * M)
    ops["H"] = dt
    D = (t * dt).scale(2) + euler + ident.scale(2) - (g[0] * g[4]).scale(half)
    ops["D"] = D
    ops["K"] = (
        t * D
        - t * t * dt
        + sum((x[j] * x[j] for j in SPATIAL), DiffOperator.zero()).scale(I * M)
        + alpha * sum((x[j] * g[j] for j in SPATIAL), DiffOperator.zero())
    )
    for j, k in ((1, 2), (1, 3), (2, 3)):
        ops[f"J{j}{k}"] = x[j] * d[k] - x[k] * d[j] - (g[j] * g[k]).scale(half)
    for j in SPATIAL:
        acc = DiffOperator.zero()
        for k, n in product(SPATIAL, SPATIAL):
            eps = levi_civita(j, k, n)
            if not eps:
                continue
            term = _mat(commutator_m(rep.alpha, rep.gamma(k))) * d[n] + _mat(
                commutator_m(rep.gamma(k), rep.gamma(n))
            ).scale(I * M * half)
            acc = acc - term.scale(eps)
        ops[f"Xt{j}"] = acc

    ops["Q"] = (alpha * dt).scale(inv_s) + beta.scale(S)
    ops["S"] = (alpha * (t * dt + euler + ident.scale(Scalar(3) / 2))).scale(inv_s) + (
        t * beta + sum((x[j] * g[j] for j in SPATIAL), DiffOperator.zero())
    ).scale(S)
    for j in SPATIAL:
        ops[f"X{j}"] = (alpha * d[j]).scale(inv_s) + g[j].scale(S)

    for j, k in product(SPATIAL, SPATIAL):
        if j <= k:
            ops[f"Pt{j}{k}"] = anticommutator(ops[f"P{j}"], ops[f"P{k}"])
    for j, k in product(SPATIAL, SPATIAL):
        if j <= k:
            ops[f"Gt{j}{k}"] = anticommutator(ops[f"G{j}"], ops[f"G{k}"])
    for prefix, left, right in (("W", "P", "G"), ("Y", "P", "X"), ("Z", "G", "X")):
        for j, k in product(SPATIAL, SPATIAL):
            ops[f"{prefix}{j}{k}"] = anticommutator(ops[f"{left}{j}"], ops[f"{right}{k}"])

    ordered = {name: ops[name] for name in FIRST_ORDER_COMMUTING + FIRST_ORDER_ANTICOMMUTING + SECOND_ORDER}
    return GeneratorCatalog(rep, build_lle(rep), ordered)
