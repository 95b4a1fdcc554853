"""Independent floating-point construction of the ansatz systems at a fixed m.

Operators act on a block of polynomial test spinors stored densely over
the monomials of degree <= 4 in (t, x1, x2, x3). A differential operator
of order <= 2 vanishes iff it kills every polynomial of degree <= 2, so
the test block (all unit spinors times monomials of degree <= 2) detects
every relation. Nothing here uses the exact engine.
"""
from __future__ import annotations

from itertools import product
from math import prod

import numpy as np

MAX_DEG = 4


def monomials(max_degree: int) -> list[tuple]:
    return sorted(
        (e for e in product(range(max_degree + 1), repeat=4) if sum(e) <= max_degree),
        key=lambda e: (sum(e), tuple(-x for x in e)),
    )


MONOS = monomials(MAX_DEG)
INDEX = {e: k for k, e in enumerate(MONOS)}
NM = len(MONOS)


def _falling(n: int, k: int) -> int:
    return prod(range(n - k + 1, n + 1)) if k <= n else 0


_MAPS: dict = {}


def mono_map(a: tuple, b: tuple):
    """(src, dst, factor) arrays for x^a d^b on the truncated polynomial space."""
    key = (a, b)
    if key not in _MAPS:
        src, dst, fac = [], [], []
        for e in MONOS:
            f = prod(_falling(e[i], b[i]) for i in range(4))
            if not f:
                continue
            ne = tuple(e[i] - b[i] + a[i] for i in range(4))
            if sum(ne) > MAX_DEG:
                continue
            src.append(INDEX[e])
            dst.append(INDEX[ne])
            fac.append(f)
        _MAPS[key] = (np.array(src, dtype=int), np.array(dst, dtype=int), np.array(fac, dtype=float))
    return _MAPS[key]


class NumOp:
    """Sum of terms ``G x^a d^b`` with complex 4x4 matrices G."""

    def __init__(self, terms=()):
        self.terms = list(terms)

    def __add__(self, other):
        return NumOp(self.terms + other.terms)

    def scale(self, c):
        return NumOp([(g * c, a, b) for g, a, b in self.terms])

    def apply(self, block: np.ndarray) -> np.ndarray:
        """``block`` has shape (4, NM, T)."""
        out = np.zeros_like(block)
        for g, a, b in self.terms:
            # degree guard: inputs here never leave the truncated space
            src, dst, fac = mono_map(a, b)
            if not len(src):
                continue
            moved = np.zeros_like(block)
            np.add.at(moved, (slice(None), dst), block[:, src, :] * fac[None, :, None])
            out += np.einsum("rc,cnt->rnt", g, moved)
        return out


Z4 = (0, 0, 0, 0)


def unit(k: int) -> tuple:
    return tuple(int(i == k) for i in range(4))


def gammas():
    s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    z, e = np.zeros((2, 2)), np.eye(2)
    g = [np.block([[e, z], [z, -e]]).astype(complex)] + [np.block([[z, sj], [-sj, z]]).astype(complex) for sj in s]
    g4 = g[0] @ g[1] @ g[2] @ g[3]
    return g, g4, (g[0] + g4) / 2, (g[0] - g4) / 2


def operators(m: float):
    g, g4, alpha, beta = gammas()
    eye = np.eye(4, dtype=complex)
    omega = NumOp([(-2j * alpha, Z4, unit(0))] + [(1j * g[j], Z4, unit(j)) for j in (1, 2, 3)] + [(2 * m * beta, Z4, Z4)])
    d_op = NumOp(
        [(2 * eye, unit(0), unit(0))]
        + [(eye, unit(j), unit(j)) for j in (1, 2, 3)]
        + [(2 * eye - 0.5 * g[0] @ g4, Z4, Z4)]
    )
    js = []
    for j, k in ((1, 2), (1, 3), (2, 3)):
        js.append(NumOp([(eye, unit(j), unit(k)), (-eye, unit(k), unit(j)), (-0.5 * g[j] @ g[k], Z4, Z4)]))
    s = np.sqrt(-1j * m)
    q = NumOp([(alpha / s, Z4, unit(0)), (beta * s, Z4, Z4)])
    return omega, d_op, js, q


def probe_block() -> np.ndarray:
    inputs = [(c, INDEX[e]) for e in monomials(2) for c in range(4)]
    block = np.zeros((4, NM, len(inputs)), dtype=complex)
    for t, (c, n) in enumerate(inputs):
        block[c, n, t] = 1
    return block


def slot_ops(order: int, degree: int):
    ops = []
    for b in monomials(order):
        for a in monomials(degree):
            for r in range(4):
                for c in range(4):
                    g = np.zeros((4, 4), dtype=complex)
                    g[r, c] = 1
                    ops.append(NumOp([(g, a, b)]))
    return ops


def _bracket_cols(x: NumOp, y: NumOp, block, sign: int) -> np.ndarray:
    return (x.apply(y.apply(block)) + sign * y.apply(x.apply(block))).ravel()


def _rank(mat: np.ndarray) -> int:
    mat = mat[np.any(np.abs(mat) > 1e-12, axis=1)]
    return int(np.linalg.matrix_rank(mat, tol=1e-8 * max(1.0, np.abs(mat).max())))


def _null(mat: np.ndarray) -> np.ndarray:
    mat = mat[np.any(np.abs(mat) > 1e-12, axis=1)]
    if mat.shape[0] < mat.shape[1]:
        mat = np.vstack([mat, np.zeros((mat.shape[1] - mat.shape[0], mat.shape[1]), dtype=mat.dtype)])
    _, sv, vh = np.linalg.svd(mat, full_matrices=False)
    rk = int((sv > 1e-8 * max(1.0, sv.max())).sum())
    return vh[rk:].conj().T


def solution_space(m: float, kind: str, order=1, degree=2, multiplier_degree=2):
    """Columns: ansatz coefficients of a basis of the operator-part solution space."""
    omega, *_ = operators(m)
    block = probe_block()
    sign = -1 if kind == "commutator" else 1
    slots = slot_ops(order, degree)
    cols = [_bracket_cols(omega, a, block, sign) for a in slots]
    omega_block = omega.apply(block)
    for a in monomials(multiplier_degree):
        for r in range(4):
            for c in range(4):
                g = np.zeros((4, 4), dtype=complex)
                g[r, c] = -1
                cols.append(NumOp([(g, a, Z4)]).apply(omega_block).ravel())
    null = _null(np.array(cols).T)
    part = null[: len(slots)]
    u, sv, _ = np.linalg.svd(part, full_matrices=False)
    rk = int((sv > 1e-8 * max(1.0, sv.max())).sum())
    return u[:, :rk], slots


def combine(coeffs: np.ndarray, slots) -> NumOp:
    return NumOp([(op.terms[0][0] * c, op.terms[0][1], op.terms[0][2]) for op, c in zip(slots, coeffs) if abs(c) > 1e-14])


def dimension(m: float, kind: str, **kw) -> int:
    return solution_space(m, kind, **kw)[0].shape[1]


def supercharge_dims(m: float, degree: int = 2) -> dict:
    omega, d_op, js, q = operators(m)
    block = probe_block()
    basis, slots = solution_space(m, "anticommutator", degree=degree, multiplier_degree=degree)
    dims = {"a": basis.shape[1]}
    ops = [combine(basis[:, k], slots) for k in range(basis.shape[1])]

    def restrict(ops, maps):
        if not ops:
            return []
        cols = [np.concatenate([f(o) for f in maps]) for o in ops]
        null = _null(np.array(cols).T)
        return [sum((ops[k].scale(null[k, j]) for k in range(len(ops))), NumOp()) for j in range(null.shape[1])]

    maps_b = [lambda o: _bracket_cols(d_op, o, block, -1) + o.apply(block).ravel()]
    maps_b += [lambda o, j=j: _bracket_cols(j, o, block, -1) for j in js]
    ops = restrict(ops, maps_b)
    dims["b"] = len(ops)
    ops = restrict(ops, [lambda o: _bracket_cols(q, o, block, 1)])
    dims["c"] = len(ops)
    return dims
