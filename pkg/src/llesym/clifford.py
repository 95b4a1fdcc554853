"""Concrete 4x4 gamma-matrix representations with signature (+, -, -, -).

``gamma4`` is the plain product ``g0 g1 g2 g3`` (so it squares to -1), and
``alpha = (g0 + g4)/2``, ``beta = (g0 - g4)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .scalars import I, ONE, ZERO, Scalar
from .weyl import DiffOperator, MatrixCoeff, anticommutator_m

METRIC = (1, -1, -1, -1)

_PAULI = (
    ((0, 1), (1, 0)),
    ((0, -I), (I, 0)),
    ((1, 0), (0, -1)),
)


class CliffordViolation(ValueError):
    """Raised when supplied matrices break ``{g_mu, g_nu} = 2 g_{mu nu}``."""

    def __init__(self, mu: int, nu: int):
        super().__init__(f"Clifford relation fails for (mu, nu) = ({mu}, {nu})")
        self.pair = (mu, nu)


def _block(a, b, c, d) -> MatrixCoeff:
    """4x4 matrix from 2x2 blocks [[a, b], [c, d]]."""
    rows = [[ZERO] * 4 for _ in range(4)]
    for bi, blk in enumerate((a, b, c, d)):
        r0, c0 = 2 * (bi // 2), 2 * (bi % 2)
        for r in range(2):
            for c in range(2):
                rows[r0 + r][c0 + c] = Scalar(blk[r][c]) if isinstance(blk[r][c], int) else blk[r][c]
    return MatrixCoeff.from_rows(rows)


_Z2 = ((0, 0), (0, 0))
_I2 = ((1, 0), (0, 1))
_MI2 = ((-1, 0), (0, -1))


def _neg2(m):
    return tuple(tuple(-x for x in row) for row in m)


def _dirac() -> tuple[MatrixCoeff, ...]:
    g0 = _block(_I2, _Z2, _Z2, _MI2)
    return (g0,) + tuple(_block(_Z2, s, _neg2(s), _Z2) for s in _PAULI)


def _chiral() -> tuple[MatrixCoeff, ...]:
    g0 = _block(_Z2, _I2, _I2, _Z2)
    return (g0,) + tuple(_block(_Z2, s, _neg2(s), _Z2) for s in _PAULI)


@dataclass(frozen=True)
class GammaRep:
    name: str
    gammas: tuple[MatrixCoeff, ...]
    gamma4: MatrixCoeff = field(init=False)
    alpha: MatrixCoeff = field(init=False)
    beta: MatrixCoeff = field(init=False)
    metric: tuple[int, ...] = METRIC

    def __post_init__(self):
        if len(self.gammas) != 4:
            raise ValueError("a representation needs exactly four gamma matrices")
        check_clifford(self.gammas)
        g0, g1, g2, g3 = self.gammas
        g4 = g0 * g1 * g2 * g3
        half = Scalar(1) / 2
        object.__setattr__(self, "gamma4", g4)
        object.__setattr__(self, "alpha", (g0 + g4).scale(half))
        object.__setattr__(self, "beta", (g0 - g4).scale(half))

    def gamma(self, mu: int) -> MatrixCoeff:
        """``gamma_mu`` for mu in 0..4 (4 gives ``gamma4``)."""
        return self.gamma4 if mu == 4 else self.gammas[mu]

    def symbols(self) -> dict[str, MatrixCoeff]:
        out = {f"g{k}": self.gamma(k) for k in range(5)}
        out.update(alpha=self.alpha, beta=self.beta, I4=MatrixCoeff.identity())
        return out

    # -- Clifford basis ---------------------------------------------------

    def basis(self) -> list[tuple[str, MatrixCoeff, MatrixCoeff]]:
        """The 16 products ``g_A`` as (text, matrix, inverse), ordered by (size, indices)."""
        if "_basis" not in self.__dict__:
            out = []
            for size in range(5):
                for idx in combinations(range(4), size):
                    mat = MatrixCoeff.identity()
                    inv = MatrixCoeff.identity()
                    for mu in idx:
                        mat = mat * self.gammas[mu]
                        # g_mu^-1 = g_{mu mu} g_mu
                        inv = self.gammas[mu].scale(METRIC[mu]) * inv
                    out.append(("*".join(f"g{mu}" for mu in idx), mat, inv))
            object.__setattr__(self, "_basis", out)
        return self.__dict__["_basis"]

    def decompose(self, mat: MatrixCoeff) -> list[tuple[str, Scalar]]:
        """Coefficients of ``mat`` in the Clifford basis (nonzero ones only)."""
        quarter = Scalar(1) / 4
        out = []
        for text, _, inv in self.basis():
            c = (inv * mat).trace() * quarter
            if c:
                out.append((text, c))
        return out

    def render(self, op: DiffOperator) -> str:
        """Representation-independent text of an operator (Clifford-basis coefficients)."""
        return op.render(self.decompose)


def check_clifford(gammas) -> None:
    two_i = MatrixCoeff.identity().scale(2)
    for mu in range(4):
        for nu in range(mu, 4):
            expected = two_i.scale(METRIC[mu]) if mu == nu else MatrixCoeff.zero()
            if anticommutator_m(gammas[mu], gammas[nu]) != expected:
                raise CliffordViolation(mu, nu)


def build_rep(name: str | Path = "dirac") -> GammaRep:
    """``dirac``, ``chiral``, or the path of a custom representation file."""
    key = str(name).lower()
    if key == "dirac":
        return GammaRep("dirac", _dirac())
    if key in ("chiral", "weyl"):
        return GammaRep("chiral", _chiral())
    path = Path(name)
    if not path.exists():
        raise ValueError(f"unknown representation {name!r}")
    return GammaRep(path.stem, parse_rep_file(path.read_text(encoding="utf-8")))


def parse_rep_file(text: str) -> tuple[MatrixCoeff, ...]:
    """Parse four blank-line separated 4x4 blocks; entries comma separated.

    Entries use the scalar text grammar; ``#`` starts a comment.
    """
    blocks: list[list[list[Scalar]]] = [[]]
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append([Scalar.parse(tok) for tok in line.split(",")])
    blocks = [b for b in blocks if b]
    if len(blocks) != 4 or any(len(b) != 4 or any(len(r) != 4 for r in b) for b in blocks):
        raise ValueError("representation file must hold four 4x4 blocks")
    return tuple(MatrixCoeff.from_rows(b) for b in blocks)


def format_rep_file(rep: GammaRep) -> str:
    lines = [f"# gamma matrices, representation {rep.name}"]
    for mu, g in enumerate(rep.gammas):
        lines.append(f"# gamma{mu}")
        for row in g.to_rows():
            lines.append(", ".join(x.render() for x in row))
        lines.append("")
    return "\n".join(lines)


def derived_identities(rep: GammaRep) -> dict[str, bool]:
    """Check the algebraic identities of the derived elements."""
    ident = MatrixCoeff.identity()
    zero = MatrixCoeff.zero()
    a, b, g4 = rep.alpha, rep.beta, rep.gamma4
    report = {
        "alpha^2 = 0": a * a == zero,
        "beta^2 = 0": b * b == zero,
        "{alpha, beta} = I4": anticommutator_m(a, b) == ident,
        "gamma4^2 = -I4": g4 * g4 == -ident,
        "gamma4 = g0 g1 g2 g3": g4 == rep.gammas[0] * rep.gammas[1] * rep.gammas[2] * rep.gammas[3],
        "alpha + beta = g0": a + b == rep.gammas[0],
    }
    for mu in range(4):
        report[f"{{gamma4, g{mu}}} = 0"] = anticommutator_m(g4, rep.gammas[mu]) == zero
    for j in (1, 2, 3):
        report[f"{{alpha, g{j}}} = 0"] = anticommutator_m(a, rep.gammas[j]) == zero
    return report


def clifford_relations(rep: GammaRep) -> dict[tuple[int, int], bool]:
    """All ten relations ``{g_mu, g_nu} = 2 g_{mu nu} I4``, mu <= nu."""
    two_i = MatrixCoeff.identity().scale(2)
    out = {}
    for mu in range(4):
        for nu in range(mu, 4):
            expected = two_i.scale(METRIC[mu]) if mu == nu else MatrixCoeff.zero()
            out[(mu, nu)] = anticommutator_m(rep.gammas[mu], rep.gammas[nu]) == expected
    return out
